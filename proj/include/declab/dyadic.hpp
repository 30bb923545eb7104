#pragma once

#include <cstdint>
#include <string>

#include "declab/errors.hpp"

namespace declab {

// Exact dyadic rational value m * 2^e, normalized so that m is odd or
// (m == 0 and e == 0). All partition endpoints, cap dimensions and
// rescaling coefficients are dyadic, so +,-,* and comparisons stay exact;
// floating point enters only at evaluation time via to_double().
struct Dyadic {
  std::int64_t m = 0;
  int e = 0;

  constexpr Dyadic() = default;

  static Dyadic make(std::int64_t mantissa, int exponent);
  static Dyadic from_int(std::int64_t v) { return make(v, 0); }
  // 2^k
  static Dyadic pow2(int k) { return make(1, k); }

  bool is_zero() const { return m == 0; }
  bool is_pow2() const { return m == 1; }
  bool is_negative() const { return m < 0; }

  double to_double() const;

  Dyadic abs() const { return make(m < 0 ? -m : m, e); }

  // Exact multiplicative inverse; only defined for +-2^k values.
  Dyadic inv() const;

  // "m/2^q" with q >= 0 (external serialization form).
  std::string to_frac_string() const;
  static Dyadic parse_frac(const std::string& s);

  // Exact conversion; every finite double is dyadic.
  static Dyadic from_double(double v);
};

Dyadic operator+(Dyadic a, Dyadic b);
Dyadic operator-(Dyadic a, Dyadic b);
Dyadic operator-(Dyadic a);
Dyadic operator*(Dyadic a, Dyadic b);
// Exact division; rhs must be +-2^k.
Dyadic operator/(Dyadic a, Dyadic b);

bool operator==(Dyadic a, Dyadic b);
bool operator!=(Dyadic a, Dyadic b);
bool operator<(Dyadic a, Dyadic b);
bool operator<=(Dyadic a, Dyadic b);
bool operator>(Dyadic a, Dyadic b);
bool operator>=(Dyadic a, Dyadic b);

// Closed dyadic interval [lo, hi].
struct DInterval {
  Dyadic lo, hi;
  Dyadic length() const { return hi - lo; }
  bool contains(Dyadic x) const { return lo <= x && x <= hi; }
  bool contains(const DInterval& o) const { return lo <= o.lo && o.hi <= hi; }
};

bool operator==(const DInterval& a, const DInterval& b);

// Axis-aligned rectangle [x0,x1] x [y0,y1] with dyadic corners.
struct DRect {
  DInterval x, y;

  Dyadic area() const { return x.length() * y.length(); }
  bool contains_point(Dyadic px, Dyadic py) const {
    return x.contains(px) && y.contains(py);
  }
  bool contains(const DRect& o) const {
    return x.contains(o.x) && y.contains(o.y);
  }
  // Open-interior overlap test.
  bool interior_intersects(const DRect& o) const;
};

bool operator==(const DRect& a, const DRect& b);

inline DRect make_rect(Dyadic x0, Dyadic x1, Dyadic y0, Dyadic y1) {
  return DRect{{x0, x1}, {y0, y1}};
}

inline DRect unit_square() {
  return make_rect(Dyadic::from_int(0), Dyadic::from_int(1),
                   Dyadic::from_int(0), Dyadic::from_int(1));
}

}  // namespace declab
