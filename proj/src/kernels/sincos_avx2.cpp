#if defined(__x86_64__) || defined(__i386__)

#include "declab/kernels/sincos.hpp"
#include "declab/kernels/sincos4_avx2.hpp"

namespace declab::kernels {

void sincos_turns_batch_avx2(const double* t, double* s, double* c,
                             std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d tv = _mm256_loadu_pd(t + i);
    __m256d sv, cv;
    sincos4(tv, &sv, &cv);
    _mm256_storeu_pd(s + i, sv);
    _mm256_storeu_pd(c + i, cv);
  }
  // Tail through the scalar path; bit-identical by construction.
  sincos_turns_batch_scalar(t + i, s + i, c + i, n - i);
}

}  // namespace declab::kernels

#endif
