#pragma once

namespace declab::kernels {

// libm-free scalar helpers. Everything below is a fixed sequence of IEEE
// +,-,*,/ (plus exponent manipulation), so results do not depend on the libm
// version; frozen test baselines and cross-run reproducibility rely on this.

// x^n for integer n >= 0, binary exponentiation, fixed operation order.
double ipow(double x, unsigned n) noexcept;

// (1 + t)^-n for t >= 0 via 1/ipow(1+t, n); weight evaluation helper.
double recip_pow(double base, unsigned n) noexcept;

// n-th root of x >= 0 for 2 <= n <= 512: exponent pre-scaling into [1, 2^n),
// then Newton iterations to convergence at double precision.
double nth_root(double x, int n) noexcept;

}  // namespace declab::kernels
