#include "declab/extension.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "declab/errors.hpp"
#include "declab/kernels/detmath.hpp"
#include "declab/kernels/reduce.hpp"
#include "declab/parallel.hpp"
#include "declab/rng.hpp"

namespace declab {

LatticeComb LatticeComb::ones(int N) {
  LatticeComb c;
  c.N = N;
  c.a.assign(std::size_t(N) * N, Complex{1.0, 0.0});
  return c;
}

LatticeComb LatticeComb::from_csv(std::istream& in) {
  std::vector<std::array<double, 4>> rows;
  int maxn = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("n,", 0) == 0) continue;
    std::array<double, 4> r{};
    std::stringstream ss(line);
    char comma;
    if (!(ss >> r[0] >> comma >> r[1] >> comma >> r[2] >> comma >> r[3]))
      throw ConfigError("malformed comb CSV line: " + line);
    rows.push_back(r);
    maxn = std::max({maxn, int(r[0]), int(r[1])});
  }
  LatticeComb c;
  c.N = maxn + 1;
  c.a.assign(std::size_t(c.N) * c.N, Complex{0.0, 0.0});
  for (const auto& r : rows) c.at(int(r[0]), int(r[1])) = {r[2], r[3]};
  return c;
}

void LatticeComb::to_csv(std::ostream& out) const {
  out << "n,m,re,im\n";
  for (int n = 0; n < N; ++n)
    for (int m = 0; m < N; ++m) {
      const Complex& v = at(n, m);
      if (v == Complex{0.0, 0.0}) continue;
      out << n << "," << m << "," << v.real() << "," << v.imag() << "\n";
    }
}

DensitySpec DensitySpec::make_constant(Complex c) {
  DensitySpec d;
  d.kind = DensityKind::Constant;
  d.constant = c;
  d.label = "constant";
  return d;
}

DensitySpec DensitySpec::make_percap(std::uint64_t seed,
                                     std::shared_ptr<const PartitionScheme> s) {
  DensitySpec d;
  d.kind = DensityKind::PerCapUnimodular;
  d.seed = seed;
  d.scheme = std::move(s);
  d.label = "percap_unimodular:" + std::to_string(seed);
  return d;
}

DensitySpec DensitySpec::make_single_cap(
    std::size_t cap, std::shared_ptr<const PartitionScheme> s) {
  DensitySpec d;
  d.kind = DensityKind::SingleCap;
  d.cap_index = cap;
  d.scheme = std::move(s);
  d.label = "single_cap:" + std::to_string(cap);
  return d;
}

DensitySpec DensitySpec::make_bump(double cx, double cy, double w) {
  DensitySpec d;
  d.kind = DensityKind::Bump;
  d.bump_cx = cx;
  d.bump_cy = cy;
  d.bump_w = w;
  d.label = "bump";
  return d;
}

DensitySpec DensitySpec::make_comb(std::shared_ptr<const LatticeComb> comb) {
  DensitySpec d;
  d.kind = DensityKind::LatticeComb;
  d.comb = std::move(comb);
  d.label = "comb:N=" + std::to_string(d.comb->N);
  return d;
}

Complex DensitySpec::cap_value(std::size_t i) const {
  if (kind == DensityKind::Constant) return constant;
  if (kind == DensityKind::SingleCap)
    return i == cap_index ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
  if (kind != DensityKind::PerCapUnimodular)
    throw DomainError("density has no per-cap constant value");
  // One unit-modulus constant per cap, reproducible from the seed.
  double turns = double(mix_seed(seed, i) >> 11) * 0x1.0p-53;
  kernels::SinCos sc = kernels::sincos_turns(turns);
  return {sc.c, sc.s};
}

namespace {

double bump1(double s) {
  if (s <= -1.0 || s >= 1.0) return 0.0;
  double u = 1.0 - s * s;
  return u * u;
}

}  // namespace

Complex DensitySpec::eval(double xi1, double xi2) const {
  switch (kind) {
    case DensityKind::Constant:
      return constant;
    case DensityKind::Bump:
      return Complex{bump1((xi1 - bump_cx) / bump_w) *
                         bump1((xi2 - bump_cy) / bump_w),
                     0.0};
    case DensityKind::PerCapUnimodular:
    case DensityKind::SingleCap: {
      if (!scheme) throw DomainError("per-cap density without a scheme");
      std::size_t i = locate(*scheme, Dyadic::from_double(xi1),
                             Dyadic::from_double(xi2));
      return cap_value(i);
    }
    default:
      throw DomainError("lattice comb is not a pointwise density");
  }
}

int required_log2_h(const DRect& Q, const PhaseSpec& phase,
                    std::span<const Point3> points) {
  const double lo1 = Q.x.lo.to_double(), hi1 = Q.x.hi.to_double();
  const double lo2 = Q.y.lo.to_double(), hi2 = Q.y.hi.to_double();
  const double b1 = phase.phi1.deriv1_bound(lo1, hi1);
  const double b2 = phase.mode == PhaseMode::Surface2D
                        ? phase.phi2.deriv1_bound(lo2, hi2)
                        : 0.0;
  double rate = 0.0;
  for (const auto& p : points) {
    rate = std::max(rate, std::fabs(p[0]) + std::fabs(p[2]) * b1);
    rate = std::max(rate, std::fabs(p[1]) + std::fabs(p[2]) * b2);
  }
  int q = 0;
  while (std::ldexp(rate, -q) > 0.25) ++q;
  // h must divide both side lengths exactly.
  q = std::max(q, -Q.x.length().e);
  q = std::max(q, -Q.y.length().e);
  return q;
}

namespace {

std::int64_t nodes_on(const DInterval& iv, int log2_h) {
  Dyadic n = iv.length() * Dyadic::pow2(log2_h);
  if (n.e < 0) throw StepError("step does not divide the side length", 0.0);
  return n.m << n.e;
}

Field eval_atoms_impl(const kernels::AtomSoA& atoms,
                      std::span<const Point3> points, int workers) {
  Field f;
  f.points.assign(points.begin(), points.end());
  f.values.assign(points.size(), Complex{0.0, 0.0});
  parallel_for(points.size(), workers, [&](std::size_t b, std::size_t e) {
    kernels::AtomScratch scratch;
    for (std::size_t i = b; i < e; ++i)
      f.values[i] = kernels::atom_sum_point(atoms, points[i][0], points[i][1],
                                            points[i][2], scratch);
  });
  return f;
}

}  // namespace

Field evaluate_continuous_n(const DRect& Q,
                            const std::function<Complex(double, double)>& g,
                            const PhaseSpec& phase,
                            std::span<const Point3> points, std::int64_t n1,
                            std::int64_t n2, int workers) {
  if (n1 <= 0 || n2 <= 0) throw ConfigError("node counts must be positive");
  if (n1 * n2 > (std::int64_t(1) << 26))
    throw ConfigError("quadrature grid too large (> 2^26 nodes)");
  const double h1 = Q.x.length().to_double() / double(n1);
  const double h2 = Q.y.length().to_double() / double(n2);
  const double x0 = Q.x.lo.to_double(), y0 = Q.y.lo.to_double();
  const double cell = h1 * h2;
  kernels::AtomSoA atoms;
  atoms.reserve(std::size_t(n1 * n2));
  for (std::int64_t i = 0; i < n1; ++i) {
    const double xi1 = x0 + (double(i) + 0.5) * h1;
    for (std::int64_t j = 0; j < n2; ++j) {
      const double xi2 = y0 + (double(j) + 0.5) * h2;
      Complex a = g(xi1, xi2);
      if (a == Complex{0.0, 0.0}) continue;
      atoms.push(xi1, xi2, phase.eval(xi1, xi2), a * cell);
    }
  }
  return eval_atoms_impl(atoms, points, workers);
}

Field evaluate_continuous(const DRect& Q, const DensitySpec& g,
                          const PhaseSpec& phase,
                          std::span<const Point3> points, StepControl step,
                          int workers) {
  if (g.kind == DensityKind::LatticeComb)
    throw DomainError("lattice combs evaluate through evaluate_expsum");
  const int need = required_log2_h(Q, phase, points);
  int q = need;
  if (!step.auto_h) {
    if (step.log2_h < need)
      throw StepError("step 2^-" + std::to_string(step.log2_h) +
                          " too coarse for the requested points; need h <= 2^-" +
                          std::to_string(need),
                      std::ldexp(1.0, -need));
    q = step.log2_h;
  }
  const std::int64_t n1 = nodes_on(Q.x, q);
  const std::int64_t n2 = nodes_on(Q.y, q);
  return evaluate_continuous_n(
      Q, [&](double a, double b) { return g.eval(a, b); }, phase, points, n1,
      n2, workers);
}

Field evaluate_expsum(const LatticeComb& comb, const PhaseSpec& phase,
                      std::span<const Point3> points, int workers) {
  kernels::AtomSoA atoms;
  atoms.reserve(comb.a.size());
  const double invN = 1.0 / comb.N;
  for (int n = 0; n < comb.N; ++n)
    for (int m = 0; m < comb.N; ++m) {
      Complex a = comb.at(n, m);
      if (a == Complex{0.0, 0.0}) continue;
      const double xi1 = n * invN, xi2 = m * invN;
      atoms.push(xi1, xi2, phase.eval(xi1, xi2), a);
    }
  return eval_atoms_impl(atoms, points, workers);
}

Field evaluate_atoms(const kernels::AtomSoA& atoms,
                     std::span<const Point3> points, int workers) {
  return eval_atoms_impl(atoms, points, workers);
}

kernels::AtomSoA make_interval_atoms(const DInterval& I, const DyadicPoly& phi,
                                     std::int64_t n) {
  kernels::AtomSoA atoms;
  atoms.reserve(std::size_t(n));
  const double lo = I.lo.to_double();
  const double h = I.length().to_double() / double(n);
  for (std::int64_t i = 0; i < n; ++i) {
    const double xi = lo + (double(i) + 0.5) * h;
    atoms.push(xi, 0.0, phi.eval(xi), Complex{h, 0.0});
  }
  return atoms;
}

namespace {

constexpr int kOracleMaxN = 64;

std::uint64_t pack_key(int nsum, int msum, std::int64_t power) {
  return (std::uint64_t(nsum) << 40) | (std::uint64_t(msum) << 33) |
         std::uint64_t(power);
}

}  // namespace

std::uint64_t oracle_l4_count(int N) {
  if (N < 1 || N > kOracleMaxN)
    throw ConfigError("oracle_l4_count handles 1 <= N <= 64");
  std::vector<std::uint64_t> keys;
  keys.reserve(std::size_t(N) * N * N * N);
  std::vector<std::int64_t> p4(N);
  for (int n = 0; n < N; ++n) p4[n] = std::int64_t(n) * n * n * n;
  for (int n1 = 0; n1 < N; ++n1)
    for (int n2 = 0; n2 < N; ++n2)
      for (int m1 = 0; m1 < N; ++m1)
        for (int m2 = 0; m2 < N; ++m2)
          keys.push_back(
              pack_key(n1 + n2, m1 + m2, p4[n1] + p4[n2] + p4[m1] + p4[m2]));
  std::sort(keys.begin(), keys.end());
  // Solutions = sum over key classes of multiplicity^2.
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    std::uint64_t mult = j - i;
    count += mult * mult;
    i = j;
  }
  return count;
}

std::uint64_t oracle_l4_count_bruteforce(int N) {
  if (N < 1 || N > 6)
    throw ConfigError("brute-force enumeration handles 1 <= N <= 6");
  std::vector<std::int64_t> p4(N);
  for (int n = 0; n < N; ++n) p4[n] = std::int64_t(n) * n * n * n;
  std::uint64_t count = 0;
  for (int n1 = 0; n1 < N; ++n1)
    for (int n2 = 0; n2 < N; ++n2)
      for (int n3 = 0; n3 < N; ++n3)
        for (int n4 = 0; n4 < N; ++n4) {
          if (n1 + n2 != n3 + n4) continue;
          for (int m1 = 0; m1 < N; ++m1)
            for (int m2 = 0; m2 < N; ++m2)
              for (int m3 = 0; m3 < N; ++m3)
                for (int m4 = 0; m4 < N; ++m4) {
                  if (m1 + m2 != m3 + m4) continue;
                  if (p4[n1] + p4[n2] + p4[m1] + p4[m2] ==
                      p4[n3] + p4[n4] + p4[m3] + p4[m4])
                    ++count;
                }
        }
  return count;
}

double oracle_l4_period_average(int N, int P1, int P2, int P3, int workers) {
  if (N < 1 || N > kOracleMaxN)
    throw ConfigError("oracle period average handles 1 <= N <= 64");
  LatticeComb comb = LatticeComb::ones(N);
  PhaseSpec phase = PhaseSpec::quartic_surface();
  kernels::AtomSoA atoms;
  atoms.reserve(comb.a.size());
  const double invN = 1.0 / N;
  for (int n = 0; n < N; ++n)
    for (int m = 0; m < N; ++m)
      atoms.push(n * invN, m * invN, phase.eval(n * invN, m * invN),
                 Complex{1.0, 0.0});

  const double h1 = double(N) / P1;
  const double h2 = double(N) / P2;
  const double h3 = double(std::int64_t(N) * N * N * N) / P3;
  // One partial per x3 slab; fixed split keeps the reduction shape
  // independent of the worker count.
  std::vector<double> partial(std::size_t(P3), 0.0);
  parallel_for(std::size_t(P3), workers, [&](std::size_t b, std::size_t e) {
    kernels::AtomScratch scratch;
    std::vector<double> vals(std::size_t(P1) * P2);
    for (std::size_t i3 = b; i3 < e; ++i3) {
      const double x3 = (double(i3) + 0.5) * h3;
      std::size_t idx = 0;
      for (int i1 = 0; i1 < P1; ++i1) {
        const double x1 = (double(i1) + 0.5) * h1;
        for (int i2 = 0; i2 < P2; ++i2) {
          const double x2 = (double(i2) + 0.5) * h2;
          Complex s = kernels::atom_sum_point(atoms, x1, x2, x3, scratch);
          double m2 = s.real() * s.real() + s.imag() * s.imag();
          vals[idx++] = m2 * m2;
        }
      }
      partial[i3] = kernels::pairwise_sum(vals);
    }
  });
  double total = kernels::pairwise_sum(partial);
  return total / (double(P1) * double(P2) * double(P3));
}

void field_to_csv(const Field& f, std::ostream& out) {
  out << "x1,x2,x3,re,im\n";
  out.precision(17);
  for (std::size_t i = 0; i < f.points.size(); ++i)
    out << f.points[i][0] << "," << f.points[i][1] << "," << f.points[i][2]
        << "," << f.values[i].real() << "," << f.values[i].imag() << "\n";
}

}  // namespace declab
