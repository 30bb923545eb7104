#include "declab/norms.hpp"

#include <cmath>
#include <ostream>

#include "declab/errors.hpp"
#include "declab/kernels/detmath.hpp"
#include "declab/kernels/reduce.hpp"
#include "declab/kernels/sincos.hpp"
#include "declab/rng.hpp"

namespace declab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kShellStrata = 16;

double radical_inverse(std::uint64_t i, int base) {
  double inv = 1.0 / base;
  double f = inv, r = 0.0;
  while (i != 0) {
    r += f * double(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

double frac(double x) { return x - std::floor(x); }

struct HaltonStream {
  double shift[3];
  std::uint64_t index = 0;

  explicit HaltonStream(std::uint64_t seed) {
    Xoshiro256ss rng(seed);
    for (auto& s : shift) s = rng.uniform();
  }
  std::array<double, 3> next() {
    ++index;
    return {frac(radical_inverse(index, 2) + shift[0]),
            frac(radical_inverse(index, 3) + shift[1]),
            frac(radical_inverse(index, 5) + shift[2])};
  }
};

Point3 direction(int dim, double u2, double u3) {
  if (dim == 2) {
    kernels::SinCos sc = kernels::sincos_turns(u2);
    return {sc.c, sc.s, 0.0};
  }
  const double z = 1.0 - 2.0 * u2;
  const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
  kernels::SinCos sc = kernels::sincos_turns(u3);
  return {rho * sc.c, rho * sc.s, z};
}

double unit_volume(int dim) { return dim == 2 ? kPi : 4.0 * kPi / 3.0; }

// Volume-uniform radius in [t_lo, t_hi] (unit-ball scale).
double stratum_radius(int dim, double t_lo, double t_hi, double u) {
  if (dim == 2) {
    double v = t_lo * t_lo + u * (t_hi * t_hi - t_lo * t_lo);
    return std::sqrt(v);
  }
  double lo3 = t_lo * t_lo * t_lo, hi3 = t_hi * t_hi * t_hi;
  return kernels::nth_root(lo3 + u * (hi3 - lo3), 3);
}

double stratum_volume(int dim, double t_lo, double t_hi) {
  if (dim == 2) return kPi * (t_hi * t_hi - t_lo * t_lo);
  return unit_volume(3) * (t_hi * t_hi * t_hi - t_lo * t_lo * t_lo);
}

}  // namespace

SamplingPlan sample_ball(const std::array<double, 3>& x0, double R,
                         std::size_t M, std::uint64_t seed, int dim) {
  if (dim != 2 && dim != 3) throw ConfigError("plan dimension must be 2 or 3");
  if (M < 512) throw ConfigError("plan needs M >= 512 points");
  SamplingPlan plan;
  plan.center = x0;
  plan.radius = R;
  plan.seed = seed;
  plan.dim = dim;
  plan.inner_count = M;

  HaltonStream hs(seed);
  const double volR = unit_volume(dim) * kernels::ipow(R, unsigned(dim));

  plan.points.reserve(M + M / 2 + kShellStrata);
  plan.weights.reserve(plan.points.capacity());

  for (std::size_t i = 0; i < M; ++i) {
    auto u = hs.next();
    double r = R * stratum_radius(dim, 0.0, 1.0, u[0]);
    Point3 d = direction(dim, u[1], u[2]);
    plan.points.push_back(
        {x0[0] + r * d[0], x0[1] + r * d[1], x0[2] + r * d[2]});
    plan.weights.push_back(volR / double(M));
  }

  // Shell [R, 4R]: geometric strata accumulating toward the ball edge, where
  // the adapted weight still carries mass.
  const std::size_t shell_total = M / 2;
  const std::size_t base = shell_total / kShellStrata;
  const std::size_t rem = shell_total % kShellStrata;
  for (int k = 0; k < kShellStrata; ++k) {
    const double t_lo =
        k == 0 ? 1.0 : 1.0 + 3.0 * std::ldexp(1.0, k - kShellStrata);
    const double t_hi = 1.0 + 3.0 * std::ldexp(1.0, k + 1 - kShellStrata);
    const std::size_t cnt = base + (std::size_t(k) < rem ? 1 : 0);
    if (cnt == 0) continue;
    const double w =
        stratum_volume(dim, t_lo, t_hi) * kernels::ipow(R, unsigned(dim)) /
        double(cnt);
    for (std::size_t i = 0; i < cnt; ++i) {
      auto u = hs.next();
      double r = R * stratum_radius(dim, t_lo, t_hi, u[0]);
      Point3 d = direction(dim, u[1], u[2]);
      plan.points.push_back(
          {x0[0] + r * d[0], x0[1] + r * d[1], x0[2] + r * d[2]});
      plan.weights.push_back(w);
    }
  }
  return plan;
}

double WeightSpec::eval(const Point3& x) const {
  const double dx = x[0] - center[0];
  const double dy = x[1] - center[1];
  const double dz = x[2] - center[2];
  const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
  if (d <= R) return 1.0;
  const double t = 1.0 + (d - R) / R;
  return kernels::recip_pow(t, unsigned(exponent));
}

namespace {

void check_p(int p) {
  if (p < 2 || p > 6) throw ConfigError("p must lie in [2, 6]");
}

double abs_pow(Complex v, int p) {
  const double m = v.real() * v.real() + v.imag() * v.imag();
  if (p % 2 == 0) return kernels::ipow(m, unsigned(p / 2));
  return kernels::ipow(m, unsigned((p - 1) / 2)) * std::sqrt(m);
}

double reduce_norm(std::vector<double>& buf, int p) {
  const double s = kernels::pairwise_sum(buf);
  return kernels::nth_root(s, p);
}

}  // namespace

double lp_norm(const Field& field, int p, const SamplingPlan& plan) {
  check_p(p);
  if (field.values.size() != plan.size())
    throw ShapeError("field is not sampled on this plan");
  std::vector<double> buf(plan.inner_count);
  for (std::size_t i = 0; i < plan.inner_count; ++i)
    buf[i] = plan.weights[i] * abs_pow(field.values[i], p);
  return reduce_norm(buf, p);
}

double weighted_lp_norm(const Field& field, int p, const SamplingPlan& plan,
                        const WeightSpec& w) {
  check_p(p);
  if (field.values.size() != plan.size())
    throw ShapeError("field is not sampled on this plan");
  std::vector<double> buf(plan.size());
  for (std::size_t i = 0; i < plan.size(); ++i)
    buf[i] =
        plan.weights[i] * w.eval(plan.points[i]) * abs_pow(field.values[i], p);
  return reduce_norm(buf, p);
}

double weighted_lp_norm(const Field& field, int p, const SamplingPlan& plan,
                        std::span<const double> weight_values) {
  check_p(p);
  if (field.values.size() != plan.size() || weight_values.size() != plan.size())
    throw ShapeError("field/weights are not sampled on this plan");
  std::vector<double> buf(plan.size());
  for (std::size_t i = 0; i < plan.size(); ++i)
    buf[i] =
        plan.weights[i] * weight_values[i] * abs_pow(field.values[i], p);
  return reduce_norm(buf, p);
}

double l2_aggregate(std::span<const double> norms) {
  if (norms.empty()) return 0.0;
  std::vector<double> sq(norms.size());
  for (std::size_t i = 0; i < norms.size(); ++i) sq[i] = norms[i] * norms[i];
  return std::sqrt(kernels::pairwise_sum(sq));
}

void plan_to_csv(const SamplingPlan& plan, std::ostream& out) {
  out << "x1,x2,x3,measure_weight\n";
  out.precision(17);
  for (std::size_t i = 0; i < plan.size(); ++i)
    out << plan.points[i][0] << "," << plan.points[i][1] << ","
        << plan.points[i][2] << "," << plan.weights[i] << "\n";
}

nlohmann::ordered_json weight_to_json(const WeightSpec& w) {
  nlohmann::ordered_json j;
  j["exponent"] = w.exponent;
  j["center"] = {w.center[0], w.center[1], w.center[2]};
  j["R"] = w.R;
  return j;
}

}  // namespace declab
