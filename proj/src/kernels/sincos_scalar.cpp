#include "declab/kernels/sincos.hpp"

#include <cmath>

#include "declab/kernels/sincos_poly.hpp"

namespace declab::kernels {

SinCos sincos_turns(double t) noexcept {
  // u in [-1/2, 1/2]; exact for all finite t (nearbyint hits an integer that
  // shares the exponent range of t, so the subtraction cancels exactly).
  double u = t - std::nearbyint(t);
  double q = std::nearbyint(4.0 * u);  // in {-2,-1,0,1,2}
  double r = std::fma(q, -0.25, u);    // in [-1/8, 1/8], exact
  double r2 = r * r;

  double sp = poly::S[8];
  sp = std::fma(sp, r2, poly::S[7]);
  sp = std::fma(sp, r2, poly::S[6]);
  sp = std::fma(sp, r2, poly::S[5]);
  sp = std::fma(sp, r2, poly::S[4]);
  sp = std::fma(sp, r2, poly::S[3]);
  sp = std::fma(sp, r2, poly::S[2]);
  sp = std::fma(sp, r2, poly::S[1]);
  sp = std::fma(sp, r2, poly::S[0]);
  double s8 = sp * r;

  double cp = poly::C[9];
  cp = std::fma(cp, r2, poly::C[8]);
  cp = std::fma(cp, r2, poly::C[7]);
  cp = std::fma(cp, r2, poly::C[6]);
  cp = std::fma(cp, r2, poly::C[5]);
  cp = std::fma(cp, r2, poly::C[4]);
  cp = std::fma(cp, r2, poly::C[3]);
  cp = std::fma(cp, r2, poly::C[2]);
  cp = std::fma(cp, r2, poly::C[1]);
  double c8 = std::fma(cp, r2, poly::C[0]);

  // Quadrant fixup: angle = 2*pi*r + q*(pi/2).
  int qi = int(q);
  switch (qi) {
    case 0:
      return {s8, c8};
    case 1:
      return {c8, -s8};
    case -1:
      return {-c8, s8};
    default:  // +-2
      return {-s8, -c8};
  }
}

void sincos_turns_batch_scalar(const double* t, double* s, double* c,
                               std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    SinCos sc = sincos_turns(t[i]);
    s[i] = sc.s;
    c[i] = sc.c;
  }
}

}  // namespace declab::kernels
