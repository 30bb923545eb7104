#include "declab/geometry.hpp"

#include <cmath>

#include "declab/errors.hpp"

namespace declab {

DyadicPoly DyadicPoly::from(std::initializer_list<Dyadic> coeffs) {
  if (coeffs.size() > 5)
    throw PhaseClassError("phase polynomial degree exceeds 4");
  DyadicPoly p;
  std::size_t i = 0;
  for (const auto& v : coeffs) p.c[i++] = v;
  return p;
}

double DyadicPoly::eval(double t) const {
  double acc = c[4].to_double();
  for (int i = 3; i >= 0; --i) acc = acc * t + c[i].to_double();
  return acc;
}

Dyadic DyadicPoly::eval_exact(Dyadic t) const {
  Dyadic acc = c[4];
  for (int i = 3; i >= 0; --i) acc = acc * t + c[i];
  return acc;
}

DyadicPoly DyadicPoly::derivative() const {
  DyadicPoly d;
  for (int i = 1; i <= 4; ++i) d.c[i - 1] = Dyadic::from_int(i) * c[i];
  return d;
}

DyadicPoly DyadicPoly::taylor_shift(Dyadic a) const {
  static const int binom[5][5] = {{1, 0, 0, 0, 0},
                                  {1, 1, 0, 0, 0},
                                  {1, 2, 1, 0, 0},
                                  {1, 3, 3, 1, 0},
                                  {1, 4, 6, 4, 1}};
  DyadicPoly out;
  for (int j = 0; j <= 4; ++j) {
    Dyadic acc;
    Dyadic apow = Dyadic::from_int(1);
    for (int i = j; i <= 4; ++i) {
      acc = acc + Dyadic::from_int(binom[i][j]) * c[i] * apow;
      apow = apow * a;
    }
    out.c[j] = acc;
  }
  return out;
}

int DyadicPoly::degree() const {
  for (int i = 4; i >= 0; --i)
    if (!c[i].is_zero()) return i;
  return 0;
}

double DyadicPoly::deriv1_bound(double lo, double hi) const {
  double m = std::max(std::fabs(lo), std::fabs(hi));
  double acc = 0.0;
  double mp = 1.0;
  for (int j = 1; j <= 4; ++j) {
    acc += j * std::fabs(c[j].to_double()) * mp;
    mp *= m;
  }
  return acc;
}

bool operator==(const DyadicPoly& a, const DyadicPoly& b) {
  for (int i = 0; i <= 4; ++i)
    if (!(a.c[i] == b.c[i])) return false;
  return true;
}

DerivBounds derivative_bounds(const DyadicPoly& p, double lo, double hi) {
  // p'' = 2 c2 + 6 c3 t + 12 c4 t^2: extrema at the endpoints or the vertex.
  const double a = 2.0 * p.c[2].to_double();
  const double b = 6.0 * p.c[3].to_double();
  const double cc = 12.0 * p.c[4].to_double();
  auto q = [&](double t) { return a + t * (b + t * cc); };
  double mn = std::min(q(lo), q(hi));
  double mx = std::max(q(lo), q(hi));
  if (cc != 0.0) {
    double tv = -b / (2.0 * cc);
    if (lo < tv && tv < hi) {
      double v = q(tv);
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
  }
  // p''' = 6 c3 + 24 c4 t is affine; p'''' constant.
  const double d3a = std::fabs(6.0 * p.c[3].to_double() +
                               24.0 * p.c[4].to_double() * lo);
  const double d3b = std::fabs(6.0 * p.c[3].to_double() +
                               24.0 * p.c[4].to_double() * hi);
  return {mn, mx, std::max(d3a, d3b), std::fabs(24.0 * p.c[4].to_double())};
}

DerivBounds phase_derivative_bounds(const std::vector<Dyadic>& coeffs) {
  for (std::size_t i = 5; i < coeffs.size(); ++i)
    if (!coeffs[i].is_zero())
      throw PhaseClassError("phase polynomial degree exceeds 4");
  DyadicPoly p;
  for (std::size_t i = 0; i < coeffs.size() && i < 5; ++i) p.c[i] = coeffs[i];
  return derivative_bounds(p, 0.0, 1.0);
}

double gaussian_curvature(double xi1, double xi2) {
  const double x2 = xi1 * xi1, y2 = xi2 * xi2;
  const double x6 = x2 * x2 * x2, y6 = y2 * y2 * y2;
  const double den = 1.0 + 16.0 * x6 + 16.0 * y6;
  return 144.0 * x2 * y2 / (den * den);
}

std::array<double, 3> Rescaling::map_point(
    const std::array<double, 3>& x) const {
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) {
    double acc = 0.0;
    for (int j = 0; j < 3; ++j) acc += spatial[i][j].to_double() * x[j];
    out[i] = acc;
  }
  return out;
}

std::array<double, 2> Rescaling::freq_map(double eta1, double eta2) const {
  return {freq1.offset.to_double() + freq1.scale.to_double() * eta1,
          freq2.offset.to_double() + freq2.scale.to_double() * eta2};
}

Rescaling make_separable_rescaling(const DRect& cap, const PhaseSpec& source,
                                   Dyadic s) {
  if (source.mode != PhaseMode::Surface2D)
    throw DomainError("separable rescaling needs a surface phase");
  Rescaling r;
  r.source = cap;
  const Dyadic w1 = cap.x.length();
  const Dyadic w2 = cap.y.length();
  r.freq1 = {w1, cap.x.lo};
  r.freq2 = {w2, cap.y.lo};
  r.amplitude = w1 * w2;
  r.jacobian_p_factor = (w1 * w2 * s).inv();

  const DyadicPoly t1 = source.phi1.taylor_shift(cap.x.lo);
  const DyadicPoly t2 = source.phi2.taylor_shift(cap.y.lo);

  const Dyadic zero;
  r.spatial = {{{w1, zero, t1.c[1] * w1},
                {zero, w2, t2.c[1] * w2},
                {zero, zero, s}}};

  DyadicPoly tp1, tp2;
  Dyadic w1p = w1 * w1;
  Dyadic w2p = w2 * w2;
  for (int i = 2; i <= 4; ++i) {
    tp1.c[i] = t1.c[i] * w1p / s;
    tp2.c[i] = t2.c[i] * w2p / s;
    w1p = w1p * w1;
    w2p = w2p * w2;
  }
  r.target_phase = PhaseSpec::surface(tp1, tp2);
  return r;
}

namespace {

// Recover K from lambda = 2^-t and the cap width lambda^-1 K^-1/2.
std::int64_t k_from_width(int t_lam, Dyadic width) {
  Dyadic ks = (width * Dyadic::pow2(-t_lam)).inv();  // K^{1/2}
  if (!ks.is_pow2() || ks.e < 2 || ks.e % 2 != 0)
    throw DomainError("cap dimensions inconsistent with an admissible K");
  std::int64_t K = std::int64_t(1) << (2 * ks.e);
  scale_log16(K);
  return K;
}

}  // namespace

Rescaling rescale_omega0(const Cap& tau) {
  if (tau.tag != SchemeKind::Omega0Caps)
    throw DomainError("rescale_omega0 expects an Omega0 cap");
  k_from_width(int(tau.p[0]), tau.rect.x.length());
  std::int64_t K = k_from_width(int(tau.p[1]), tau.rect.y.length());
  const Dyadic s = Dyadic::from_int(K).inv();
  return make_separable_rescaling(tau.rect, PhaseSpec::quartic_surface(), s);
}

Rescaling rescale_omega3(std::int64_t K) {
  const int sq = scale_log16(K);
  const Dyadic cut = Dyadic::pow2(-sq);
  DRect cap = make_rect(Dyadic::from_int(0), cut, Dyadic::from_int(0), cut);
  return make_separable_rescaling(cap, PhaseSpec::quartic_surface(),
                                  Dyadic::from_int(K).inv());
}

Rescaling rescale_omega1(const Cap& slab) {
  if (slab.tag != SchemeKind::Omega1Slabs)
    throw DomainError("rescale_omega1 expects an Omega1 slab");
  std::int64_t K = k_from_width(int(slab.p[0]), slab.rect.x.length());
  return make_separable_rescaling(slab.rect, PhaseSpec::quartic_surface(),
                                  Dyadic::from_int(K).inv());
}

namespace {

void require_f224_phase(const PhaseSpec& source) {
  if (source.mode != PhaseMode::Surface2D ||
      !(source.phi2 == DyadicPoly::quartic()))
    throw PhaseClassError("source surface must have second axis xi2^4");
  DerivBounds b = phase_derivative_bounds(source.phi1);
  if (b.d2_min <= 0.0)
    throw PhaseClassError("source phi1 is degenerate on [0,1]");
}

}  // namespace

Rescaling rescale_nu_D0(const Cap& nu, const PhaseSpec& source) {
  if (nu.tag != SchemeKind::F3_R24)
    throw DomainError("rescale_nu_D0 expects an F3(K,2,4) cap");
  if (nu.p[1] < 1)
    throw DomainError("cap lies in D1; use the D1 rescaling");
  require_f224_phase(source);
  // First axis has width K^{-1/2}.
  Dyadic w1 = nu.rect.x.length();
  if (!w1.is_pow2() || w1.e > 0 || (-w1.e) % 2 != 0)
    throw DomainError("cap width inconsistent with K^{-1/2}");
  std::int64_t K = std::int64_t(1) << (-2 * w1.e);
  scale_log16(K);
  return make_separable_rescaling(nu.rect, source, Dyadic::from_int(K).inv());
}

Rescaling rescale_nu_D1(std::int64_t K, const PhaseSpec& source) {
  const int sq = scale_log16(K);
  require_f224_phase(source);
  DRect cap = make_rect(Dyadic::from_int(0), Dyadic::pow2(-2 * sq),
                        Dyadic::from_int(0), Dyadic::pow2(-sq));
  return make_separable_rescaling(cap, source, Dyadic::from_int(K).inv());
}

std::pair<DRect, bool> map_cap(const DRect& theta, const Rescaling& r,
                               const PartitionScheme& target) {
  if (!r.source.contains(theta))
    throw DomainError("theta not contained in the rescaling's source cap");
  DRect image = make_rect((theta.x.lo - r.freq1.offset) / r.freq1.scale,
                          (theta.x.hi - r.freq1.offset) / r.freq1.scale,
                          (theta.y.lo - r.freq2.offset) / r.freq2.scale,
                          (theta.y.hi - r.freq2.offset) / r.freq2.scale);
  bool member = false;
  for (const auto& c : target.caps)
    if (c.rect == image) {
      member = true;
      break;
    }
  return {image, member};
}

namespace {

nlohmann::ordered_json poly_json(const DyadicPoly& p) {
  auto arr = nlohmann::ordered_json::array();
  for (int i = 0; i <= 4; ++i) arr.push_back(p.c[i].to_frac_string());
  return arr;
}

}  // namespace

nlohmann::ordered_json rescaling_to_json(const Rescaling& r) {
  nlohmann::ordered_json j;
  j["freq_map"] = {
      {"scale1", r.freq1.scale.to_frac_string()},
      {"offset1", r.freq1.offset.to_frac_string()},
      {"scale2", r.freq2.scale.to_frac_string()},
      {"offset2", r.freq2.offset.to_frac_string()},
  };
  auto rows = nlohmann::ordered_json::array();
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) rows.push_back(r.spatial[i][k].to_frac_string());
  j["spatial_row_major"] = std::move(rows);
  j["amplitude"] = r.amplitude.to_frac_string();
  j["jacobian_p_factor"] = r.jacobian_p_factor.to_frac_string();
  j["target_phi1"] = poly_json(r.target_phase.phi1);
  j["target_phi2"] = poly_json(r.target_phase.phi2);
  j["source"] = {
      {"a1", r.source.x.lo.to_frac_string()},
      {"b1", r.source.x.hi.to_frac_string()},
      {"a2", r.source.y.lo.to_frac_string()},
      {"b2", r.source.y.hi.to_frac_string()},
  };
  return j;
}

}  // namespace declab
