#include "declab/dyadic.hpp"

#include <cmath>
#include <cstdlib>

namespace declab {

namespace {

constexpr std::int64_t kMantissaLimit = std::int64_t(1) << 62;

std::int64_t shifted(std::int64_t m, int by) {
  if (by == 0 || m == 0) return m;
  if (by >= 62) throw DyadicOverflow("dyadic mantissa shift overflow");
  std::int64_t r = m;
  for (int i = 0; i < by; ++i) {
    if (r > kMantissaLimit / 2 || r < -(kMantissaLimit / 2))
      throw DyadicOverflow("dyadic mantissa shift overflow");
    r <<= 1;
  }
  return r;
}

}  // namespace

Dyadic Dyadic::make(std::int64_t mantissa, int exponent) {
  Dyadic d;
  if (mantissa == 0) return d;
  while ((mantissa & 1) == 0) {
    mantissa >>= 1;
    ++exponent;
  }
  d.m = mantissa;
  d.e = exponent;
  return d;
}

double Dyadic::to_double() const { return std::ldexp(double(m), e); }

Dyadic Dyadic::from_double(double v) {
  if (v == 0.0) return Dyadic{};
  int e;
  double f = std::frexp(v, &e);  // v = f * 2^e, |f| in [0.5, 1)
  auto m = std::int64_t(std::ldexp(f, 53));
  return make(m, e - 53);
}

Dyadic Dyadic::inv() const {
  if (m != 1 && m != -1)
    throw DyadicOverflow("dyadic inverse defined only for +-2^k values");
  return make(m, -e);
}

std::string Dyadic::to_frac_string() const {
  if (e >= 0) {
    // integer value
    std::int64_t v = shifted(m, e);
    return std::to_string(v) + "/2^0";
  }
  return std::to_string(m) + "/2^" + std::to_string(-e);
}

Dyadic Dyadic::parse_frac(const std::string& s) {
  auto slash = s.find('/');
  auto caret = s.find("2^", slash == std::string::npos ? 0 : slash);
  if (slash == std::string::npos || caret == std::string::npos)
    throw ConfigError("malformed dyadic literal: " + s);
  std::int64_t m = std::strtoll(s.substr(0, slash).c_str(), nullptr, 10);
  int q = int(std::strtol(s.substr(caret + 2).c_str(), nullptr, 10));
  if (q < 0) throw ConfigError("malformed dyadic literal: " + s);
  return make(m, -q);
}

Dyadic operator+(Dyadic a, Dyadic b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  int e = a.e < b.e ? a.e : b.e;
  std::int64_t ma = shifted(a.m, a.e - e);
  std::int64_t mb = shifted(b.m, b.e - e);
  std::int64_t sum;
  if (__builtin_add_overflow(ma, mb, &sum))
    throw DyadicOverflow("dyadic addition overflow");
  return Dyadic::make(sum, e);
}

Dyadic operator-(Dyadic a) { return Dyadic::make(-a.m, a.e); }

Dyadic operator-(Dyadic a, Dyadic b) { return a + (-b); }

Dyadic operator*(Dyadic a, Dyadic b) {
  if (a.is_zero() || b.is_zero()) return Dyadic{};
  std::int64_t prod;
  if (__builtin_mul_overflow(a.m, b.m, &prod))
    throw DyadicOverflow("dyadic multiplication overflow");
  return Dyadic::make(prod, a.e + b.e);
}

Dyadic operator/(Dyadic a, Dyadic b) { return a * b.inv(); }

bool operator==(Dyadic a, Dyadic b) { return a.m == b.m && a.e == b.e; }
bool operator!=(Dyadic a, Dyadic b) { return !(a == b); }

bool operator<(Dyadic a, Dyadic b) {
  if (a.m == b.m && a.e == b.e) return false;
  if (a.m <= 0 && b.m > 0) return true;
  if (a.m >= 0 && b.m < 0) return false;
  Dyadic d = b - a;
  return d.m > 0;
}

bool operator<=(Dyadic a, Dyadic b) { return a == b || a < b; }
bool operator>(Dyadic a, Dyadic b) { return b < a; }
bool operator>=(Dyadic a, Dyadic b) { return b <= a; }

bool operator==(const DInterval& a, const DInterval& b) {
  return a.lo == b.lo && a.hi == b.hi;
}

bool DRect::interior_intersects(const DRect& o) const {
  auto overlap = [](const DInterval& p, const DInterval& q) {
    Dyadic lo = p.lo < q.lo ? q.lo : p.lo;
    Dyadic hi = p.hi < q.hi ? p.hi : q.hi;
    return lo < hi;
  };
  return overlap(x, o.x) && overlap(y, o.y);
}

bool operator==(const DRect& a, const DRect& b) {
  return a.x == b.x && a.y == b.y;
}

}  // namespace declab
