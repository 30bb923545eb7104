#include "declab/kernels/detmath.hpp"

#include <cmath>
#include <limits>

namespace declab::kernels {

double ipow(double x, unsigned n) noexcept {
  double result = 1.0;
  double base = x;
  while (n != 0) {
    if (n & 1u) result *= base;
    n >>= 1;
    if (n != 0) base *= base;
  }
  return result;
}

double recip_pow(double base, unsigned n) noexcept {
  return 1.0 / ipow(base, n);
}

double nth_root(double x, int n) noexcept {
  if (x == 0.0) return 0.0;
  if (x < 0.0 || n < 2) return std::numeric_limits<double>::quiet_NaN();
  if (n == 2) return std::sqrt(x);  // IEEE sqrt is correctly rounded

  // x = x' * 2^(q*n) with x' in [1, 2^n), so the root of x' lies in [1, 2).
  int e = std::ilogb(x);
  int q = e >= 0 ? e / n : -((-e + n - 1) / n);
  double xs = std::scalbn(x, -q * n);

  // Bisection seed on [1, 2], then Newton to convergence.
  double lo = 1.0, hi = 2.0;
  for (int i = 0; i < 20; ++i) {
    double mid = 0.5 * (lo + hi);
    if (ipow(mid, unsigned(n)) > xs)
      hi = mid;
    else
      lo = mid;
  }
  double y = 0.5 * (lo + hi);
  for (int i = 0; i < 4; ++i) {
    double yp = ipow(y, unsigned(n - 1));
    y = ((n - 1) * y + xs / yp) / n;
  }
  return std::scalbn(y, q);
}

}  // namespace declab::kernels
