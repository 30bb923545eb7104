#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace declab::kernels {

// Fixed-shape pairwise summation: sum(v) = sum(first half) + sum(second half),
// sequential below a small cutoff. The tree depends only on the length, never
// on thread count or backend, so every reduction in the project is
// reproducible bit-for-bit.

namespace detail {
inline double pairwise_rec(const double* v, std::size_t n) {
  if (n <= 8) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += v[i];
    return acc;
  }
  std::size_t half = n / 2;
  return pairwise_rec(v, half) + pairwise_rec(v + half, n - half);
}
}  // namespace detail

inline double pairwise_sum(std::span<const double> v) {
  return detail::pairwise_rec(v.data(), v.size());
}

inline std::complex<double> pairwise_sum_complex(std::span<const double> re,
                                                 std::span<const double> im) {
  return {detail::pairwise_rec(re.data(), re.size()),
          detail::pairwise_rec(im.data(), im.size())};
}

}  // namespace declab::kernels
