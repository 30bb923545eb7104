#if defined(__x86_64__) || defined(__i386__)

#include "declab/kernels/atomsum.hpp"
#include "declab/kernels/sincos4_avx2.hpp"

namespace declab::kernels {

void atom_terms_avx2(const AtomSoA& atoms, double x1, double x2, double x3,
                     AtomScratch& scratch) {
  const std::size_t n = atoms.size();
  scratch.resize(n);
  const __m256d x1v = _mm256_set1_pd(x1);
  const __m256d x2v = _mm256_set1_pd(x2);
  const __m256d x3v = _mm256_set1_pd(x3);

  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d xi1 = _mm256_loadu_pd(atoms.xi1.data() + j);
    __m256d xi2 = _mm256_loadu_pd(atoms.xi2.data() + j);
    __m256d phi = _mm256_loadu_pd(atoms.phi.data() + j);
    __m256d t = _mm256_fmadd_pd(
        xi1, x1v, _mm256_fmadd_pd(xi2, x2v, _mm256_mul_pd(phi, x3v)));
    __m256d s, c;
    sincos4(t, &s, &c);
    __m256d are = _mm256_loadu_pd(atoms.are.data() + j);
    __m256d aim = _mm256_loadu_pd(atoms.aim.data() + j);
    // re = are*c - aim*s, im = are*s + aim*c (same rounding as scalar fma).
    __m256d re = _mm256_fmsub_pd(are, c, _mm256_mul_pd(aim, s));
    __m256d im = _mm256_fmadd_pd(are, s, _mm256_mul_pd(aim, c));
    _mm256_storeu_pd(scratch.term_re.data() + j, re);
    _mm256_storeu_pd(scratch.term_im.data() + j, im);
  }
  for (; j < n; ++j) {
    double t = std::fma(atoms.xi1[j], x1,
                        std::fma(atoms.xi2[j], x2, atoms.phi[j] * x3));
    SinCos sc = sincos_turns(t);
    scratch.term_re[j] = std::fma(atoms.are[j], sc.c, -(atoms.aim[j] * sc.s));
    scratch.term_im[j] = std::fma(atoms.are[j], sc.s, atoms.aim[j] * sc.c);
  }
}

}  // namespace declab::kernels

#endif
