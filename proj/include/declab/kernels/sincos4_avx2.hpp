#pragma once

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include "declab/kernels/sincos_poly.hpp"

namespace declab::kernels {

// 4-lane sin/cos of 2*pi*t. Identical reduction + Horner sequence as the
// scalar sincos_turns; only include from translation units built with
// -mavx2 -mfma.
inline void sincos4(__m256d t, __m256d* s_out, __m256d* c_out) {
  const __m256d quarter = _mm256_set1_pd(0.25);
  const __m256d four = _mm256_set1_pd(4.0);
  const __m256d signbit = _mm256_set1_pd(-0.0);

  __m256d u = _mm256_sub_pd(
      t, _mm256_round_pd(t, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC));
  __m256d q = _mm256_round_pd(_mm256_mul_pd(four, u),
                              _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(q, quarter, u);
  __m256d r2 = _mm256_mul_pd(r, r);

  __m256d sp = _mm256_set1_pd(poly::S[8]);
  sp = _mm256_fmadd_pd(sp, r2, _mm256_set1_pd(poly::S[7]));
  sp = _mm256_fmadd_pd(sp, r2, _mm256_set1_pd(poly::S[6]));
  sp = _mm256_fmadd_pd(sp, r2, _mm256_set1_pd(poly::S[5]));
  sp = _mm256_fmadd_pd(sp, r2, _mm256_set1_pd(poly::S[4]));
  sp = _mm256_fmadd_pd(sp, r2, _mm256_set1_pd(poly::S[3]));
  sp = _mm256_fmadd_pd(sp, r2, _mm256_set1_pd(poly::S[2]));
  sp = _mm256_fmadd_pd(sp, r2, _mm256_set1_pd(poly::S[1]));
  sp = _mm256_fmadd_pd(sp, r2, _mm256_set1_pd(poly::S[0]));
  __m256d s8 = _mm256_mul_pd(sp, r);

  __m256d cp = _mm256_set1_pd(poly::C[9]);
  cp = _mm256_fmadd_pd(cp, r2, _mm256_set1_pd(poly::C[8]));
  cp = _mm256_fmadd_pd(cp, r2, _mm256_set1_pd(poly::C[7]));
  cp = _mm256_fmadd_pd(cp, r2, _mm256_set1_pd(poly::C[6]));
  cp = _mm256_fmadd_pd(cp, r2, _mm256_set1_pd(poly::C[5]));
  cp = _mm256_fmadd_pd(cp, r2, _mm256_set1_pd(poly::C[4]));
  cp = _mm256_fmadd_pd(cp, r2, _mm256_set1_pd(poly::C[3]));
  cp = _mm256_fmadd_pd(cp, r2, _mm256_set1_pd(poly::C[2]));
  cp = _mm256_fmadd_pd(cp, r2, _mm256_set1_pd(poly::C[1]));
  __m256d c8 = _mm256_fmadd_pd(cp, r2, _mm256_set1_pd(poly::C[0]));

  // Quadrant fixup: q=0 -> (s,c); q=1 -> (c,-s); q=-1 -> (-c,s);
  // q=+-2 -> (-s,-c).
  __m256d absq = _mm256_andnot_pd(signbit, q);
  __m256d one = _mm256_set1_pd(1.0);
  __m256d two = _mm256_set1_pd(2.0);
  __m256d swap = _mm256_cmp_pd(absq, one, _CMP_EQ_OQ);
  __m256d flip_s =
      _mm256_or_pd(_mm256_cmp_pd(q, _mm256_set1_pd(-1.0), _CMP_LE_OQ),
                   _mm256_cmp_pd(q, two, _CMP_EQ_OQ));
  __m256d flip_c = _mm256_or_pd(_mm256_cmp_pd(q, one, _CMP_EQ_OQ),
                                _mm256_cmp_pd(absq, two, _CMP_EQ_OQ));

  __m256d s_pre = _mm256_blendv_pd(s8, c8, swap);
  __m256d c_pre = _mm256_blendv_pd(c8, s8, swap);
  *s_out = _mm256_xor_pd(s_pre, _mm256_and_pd(flip_s, signbit));
  *c_out = _mm256_xor_pd(c_pre, _mm256_and_pd(flip_c, signbit));
}

}  // namespace declab::kernels

#endif
