#include "declab/decoupling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>

#include "declab/errors.hpp"
#include "declab/kernels/detmath.hpp"
#include "declab/kernels/reduce.hpp"
#include "declab/parallel.hpp"
#include "declab/rng.hpp"

namespace declab {

const char* eval_mode_name(EvalMode m) {
  return m == EvalMode::Expsum ? "expsum" : "continuous";
}

namespace {

double abs_pow_p(Complex v, int p) {
  const double m = v.real() * v.real() + v.imag() * v.imag();
  if (p % 2 == 0) return kernels::ipow(m, unsigned(p / 2));
  return kernels::ipow(m, unsigned((p - 1) / 2)) * std::sqrt(m);
}

// Weighted L^p over all plan points from a raw value vector.
double weighted_norm_values(const std::vector<Complex>& vals, int p,
                            const SamplingPlan& plan,
                            const std::vector<double>& wvals) {
  std::vector<double> buf(plan.size());
  for (std::size_t i = 0; i < plan.size(); ++i)
    buf[i] = plan.weights[i] * wvals[i] * abs_pow_p(vals[i], p);
  return kernels::nth_root(kernels::pairwise_sum(buf), p);
}

double inner_norm_values(const std::vector<Complex>& vals, int p,
                         const SamplingPlan& plan) {
  std::vector<double> buf(plan.inner_count);
  for (std::size_t i = 0; i < plan.inner_count; ++i)
    buf[i] = plan.weights[i] * abs_pow_p(vals[i], p);
  return kernels::nth_root(kernels::pairwise_sum(buf), p);
}

struct CapEvalOutput {
  std::vector<double> per_cap_norms;
  std::vector<Complex> full;
};

// Evaluates per-cap atom lists at the plan points, chunked over caps with a
// fixed chunk size so the full-field accumulation order is independent of
// the worker count.
CapEvalOutput eval_cap_atoms(const std::vector<kernels::AtomSoA>& cap_atoms,
                             int p, const SamplingPlan& plan,
                             const std::vector<double>& wvals, int workers) {
  const std::size_t ncaps = cap_atoms.size();
  const std::size_t npts = plan.size();
  constexpr std::size_t kChunk = 16;
  const std::size_t nchunks = (ncaps + kChunk - 1) / kChunk;

  CapEvalOutput out;
  out.per_cap_norms.assign(ncaps, 0.0);
  std::vector<std::vector<Complex>> chunk_full(nchunks);

  parallel_for(nchunks, workers, [&](std::size_t cb, std::size_t ce) {
    kernels::AtomScratch scratch;
    std::vector<Complex> vals(npts);
    for (std::size_t ci = cb; ci < ce; ++ci) {
      auto& acc = chunk_full[ci];
      const std::size_t cap_lo = ci * kChunk;
      const std::size_t cap_hi = std::min(cap_lo + kChunk, ncaps);
      for (std::size_t cap = cap_lo; cap < cap_hi; ++cap) {
        const auto& atoms = cap_atoms[cap];
        if (atoms.size() == 0) continue;
        for (std::size_t i = 0; i < npts; ++i)
          vals[i] = kernels::atom_sum_point(atoms, plan.points[i][0],
                                            plan.points[i][1],
                                            plan.points[i][2], scratch);
        if (acc.empty()) acc.assign(npts, Complex{0.0, 0.0});
        for (std::size_t i = 0; i < npts; ++i) acc[i] += vals[i];
        out.per_cap_norms[cap] = weighted_norm_values(vals, p, plan, wvals);
      }
    }
  });

  out.full.assign(npts, Complex{0.0, 0.0});
  for (const auto& acc : chunk_full) {
    if (acc.empty()) continue;
    for (std::size_t i = 0; i < npts; ++i) out.full[i] += acc[i];
  }
  return out;
}

struct IntervalKey {
  std::int64_t lm, le, hm, he;
  bool operator<(const IntervalKey& o) const {
    return std::tie(lm, le, hm, he) < std::tie(o.lm, o.le, o.hm, o.he);
  }
};

IntervalKey key_of(const DInterval& iv) {
  return {iv.lo.m, iv.lo.e, iv.hi.m, iv.hi.e};
}

// Separable fast path for per-cap-constant densities: the extension over a
// product cap factors into two 1D oscillatory integrals, so a trial costs
// O(axis nodes) instead of O(grid nodes).
CapEvalOutput eval_percap_constant_continuous(
    const DensitySpec& g, const PartitionScheme& scheme, const PhaseSpec& phase,
    int p, const SamplingPlan& plan, const std::vector<double>& wvals,
    int workers) {
  const std::size_t npts = plan.size();

  std::map<IntervalKey, std::size_t> xidx, yidx;
  std::vector<DInterval> xiv, yiv;
  std::vector<std::pair<std::size_t, std::size_t>> cap_axes(
      scheme.caps.size());
  for (std::size_t capi = 0; capi < scheme.caps.size(); ++capi) {
    const DRect& r = scheme.caps[capi].rect;
    auto kx = key_of(r.x);
    auto it = xidx.find(kx);
    if (it == xidx.end()) {
      it = xidx.emplace(kx, xiv.size()).first;
      xiv.push_back(r.x);
    }
    auto ky = key_of(r.y);
    auto jt = yidx.find(ky);
    if (jt == yidx.end()) {
      jt = yidx.emplace(ky, yiv.size()).first;
      yiv.push_back(r.y);
    }
    cap_axes[capi] = {it->second, jt->second};
  }

  const int q = required_log2_h(scheme.region, phase, plan.points);

  auto eval_axis_table = [&](const std::vector<DInterval>& ivs,
                             const DyadicPoly& phi, bool first_axis) {
    std::vector<std::vector<Complex>> table(ivs.size());
    for (std::size_t k = 0; k < ivs.size(); ++k) {
      Dyadic n = ivs[k].length() * Dyadic::pow2(q);
      kernels::AtomSoA atoms = make_interval_atoms(ivs[k], phi, n.m << n.e);
      auto& row = table[k];
      row.assign(npts, Complex{0.0, 0.0});
      parallel_for(npts, workers, [&](std::size_t b, std::size_t e) {
        kernels::AtomScratch scratch;
        for (std::size_t i = b; i < e; ++i) {
          const double xl = first_axis ? plan.points[i][0] : plan.points[i][1];
          row[i] =
              kernels::atom_sum_point(atoms, xl, 0.0, plan.points[i][2],
                                      scratch);
        }
      });
    }
    return table;
  };

  auto A = eval_axis_table(xiv, phase.phi1, true);
  auto B = eval_axis_table(yiv, phase.phi2, false);

  const std::size_t ncaps = scheme.caps.size();
  constexpr std::size_t kChunk = 64;
  const std::size_t nchunks = (ncaps + kChunk - 1) / kChunk;
  CapEvalOutput out;
  out.per_cap_norms.assign(ncaps, 0.0);
  std::vector<std::vector<Complex>> chunk_full(nchunks);

  parallel_for(nchunks, workers, [&](std::size_t cb, std::size_t ce) {
    std::vector<Complex> vals(npts);
    for (std::size_t ci = cb; ci < ce; ++ci) {
      auto& acc = chunk_full[ci];
      const std::size_t cap_lo = ci * kChunk;
      const std::size_t cap_hi = std::min(cap_lo + kChunk, ncaps);
      for (std::size_t cap = cap_lo; cap < cap_hi; ++cap) {
        const Complex c = g.cap_value(cap);
        if (c == Complex{0.0, 0.0}) continue;
        const auto& Ax = A[cap_axes[cap].first];
        const auto& By = B[cap_axes[cap].second];
        for (std::size_t i = 0; i < npts; ++i) vals[i] = c * Ax[i] * By[i];
        if (acc.empty()) acc.assign(npts, Complex{0.0, 0.0});
        for (std::size_t i = 0; i < npts; ++i) acc[i] += vals[i];
        out.per_cap_norms[cap] = weighted_norm_values(vals, p, plan, wvals);
      }
    }
  });

  out.full.assign(npts, Complex{0.0, 0.0});
  for (const auto& acc : chunk_full) {
    if (acc.empty()) continue;
    for (std::size_t i = 0; i < npts; ++i) out.full[i] += acc[i];
  }
  return out;
}

// Generic continuous path (non-separable densities): per-cap 2D quadrature.
CapEvalOutput eval_generic_continuous(const DensitySpec& g,
                                      const PartitionScheme& scheme,
                                      const PhaseSpec& phase, int p,
                                      const SamplingPlan& plan,
                                      const std::vector<double>& wvals,
                                      int workers) {
  const std::size_t npts = plan.size();
  const int q = required_log2_h(scheme.region, phase, plan.points);
  CapEvalOutput out;
  out.per_cap_norms.assign(scheme.caps.size(), 0.0);
  out.full.assign(npts, Complex{0.0, 0.0});
  for (std::size_t cap = 0; cap < scheme.caps.size(); ++cap) {
    const DRect& r = scheme.caps[cap].rect;
    Dyadic n1 = r.x.length() * Dyadic::pow2(q);
    Dyadic n2 = r.y.length() * Dyadic::pow2(q);
    Field f = evaluate_continuous_n(
        r, [&](double a, double b) { return g.eval(a, b); }, phase,
        plan.points, n1.m << n1.e, n2.m << n2.e, workers);
    for (std::size_t i = 0; i < npts; ++i) out.full[i] += f.values[i];
    out.per_cap_norms[cap] = weighted_norm_values(f.values, p, plan, wvals);
  }
  return out;
}

std::vector<double> weight_values(const SamplingPlan& plan) {
  WeightSpec w = WeightSpec::for_ball(plan);
  std::vector<double> wv(plan.size());
  for (std::size_t i = 0; i < plan.size(); ++i) wv[i] = w.eval(plan.points[i]);
  return wv;
}

std::vector<kernels::AtomSoA> comb_atoms_by_cap(const LatticeComb& comb,
                                                const PartitionScheme& scheme,
                                                const PhaseSpec& phase) {
  std::vector<kernels::AtomSoA> cap_atoms(scheme.caps.size());
  const double invN = 1.0 / comb.N;
  for (int n = 0; n < comb.N; ++n)
    for (int m = 0; m < comb.N; ++m) {
      Complex a = comb.at(n, m);
      if (a == Complex{0.0, 0.0}) continue;
      const double xi1 = n * invN, xi2 = m * invN;
      std::size_t cap = locate(scheme, Dyadic::from_double(xi1),
                               Dyadic::from_double(xi2));
      cap_atoms[cap].push(xi1, xi2, phase.eval(xi1, xi2), a);
    }
  return cap_atoms;
}

}  // namespace

DecouplingReport ratio(const DensitySpec& g, const PartitionScheme& scheme,
                       const PhaseSpec& phase, int p, std::int64_t R,
                       const SamplingPlan& plan, const EvalOptions& opt) {
  if (phase.mode != PhaseMode::Surface2D)
    throw ConfigError("surface ratios need a Surface2D phase");
  if (p < 2 || p > 4)
    throw ConfigError("surface decoupling handles 2 <= p <= 4");
  if (plan.dim != 3) throw ShapeError("surface ratios need a 3D plan");
  if (plan.radius != double(R))
    throw ShapeError("sampling plan radius does not match R");

  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> wvals = weight_values(plan);

  CapEvalOutput out;
  if (opt.mode == EvalMode::Expsum) {
    if (g.kind != DensityKind::LatticeComb)
      throw ConfigError("expsum mode needs a lattice-comb density");
    auto cap_atoms = comb_atoms_by_cap(*g.comb, scheme, phase);
    out = eval_cap_atoms(cap_atoms, p, plan, wvals, opt.workers);
  } else if (g.per_cap_constant()) {
    out = eval_percap_constant_continuous(g, scheme, phase, p, plan, wvals,
                                          opt.workers);
  } else {
    out = eval_generic_continuous(g, scheme, phase, p, plan, wvals,
                                  opt.workers);
  }

  DecouplingReport rep;
  rep.R = R;
  rep.K = scheme.K;
  rep.p = p;
  rep.scheme_id = scheme.id();
  rep.density_id = g.label;
  rep.mode = eval_mode_name(opt.mode);
  rep.seed = g.seed;
  Field full;
  full.points = plan.points;
  full.values = std::move(out.full);
  rep.lhs = inner_norm_values(full.values, p, plan);
  rep.per_cap_norms = std::move(out.per_cap_norms);
  rep.rhs = l2_aggregate(rep.per_cap_norms);
  if (!(rep.rhs > 0.0))
    throw DomainError("degenerate ratio: rhs vanished");
  rep.ratio = rep.lhs / rep.rhs;
  rep.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

double trivial_decoupling_bound(const PartitionScheme& scheme, int p) {
  if (p < 2 || p > 6) throw ConfigError("p must lie in [2, 6]");
  return std::sqrt(double(scheme.caps.size()));
}

nlohmann::ordered_json DecouplingReport::to_json(bool include_per_cap) const {
  nlohmann::ordered_json j;
  j["R"] = R;
  if (K != 0) j["K"] = K;
  j["p"] = p;
  j["scheme"] = scheme_id;
  j["density"] = density_id;
  j["mode"] = mode;
  j["seed"] = seed;
  j["lhs"] = lhs;
  j["rhs"] = rhs;
  j["ratio"] = ratio;
  if (include_per_cap) j["per_cap_norms"] = per_cap_norms;
  return j;
}

namespace {

int default_comb_N(std::int64_t R) {
  const int l = scale_log16(R);
  const std::int64_t root = std::int64_t(1) << (2 * l);  // R^(1/2)
  return int(std::min<std::int64_t>(64, root));
}

LatticeComb build_trial_comb(const std::string& variant, int N,
                             const PartitionScheme& scheme,
                             std::uint64_t trial_seed) {
  LatticeComb comb = LatticeComb::ones(N);
  if (variant == "comb_ones") return comb;
  const double invN = 1.0 / N;
  if (variant == "comb_random") {
    Xoshiro256ss rng(trial_seed);
    for (auto& a : comb.a) {
      kernels::SinCos sc = kernels::sincos_turns(rng.uniform());
      a = {sc.c, sc.s};
    }
    return comb;
  }
  // Cap-structured variants need the atom -> cap map.
  std::vector<std::size_t> capof(comb.a.size());
  for (int n = 0; n < N; ++n)
    for (int m = 0; m < N; ++m)
      capof[std::size_t(n) * N + m] =
          locate(scheme, Dyadic::from_double(n * invN),
                 Dyadic::from_double(m * invN));
  if (variant == "comb_percap") {
    DensitySpec pc;
    pc.kind = DensityKind::PerCapUnimodular;
    pc.seed = trial_seed;
    for (std::size_t i = 0; i < comb.a.size(); ++i)
      comb.a[i] = pc.cap_value(capof[i]);
    return comb;
  }
  if (variant == "comb_single_cap") {
    std::vector<std::size_t> active = capof;
    std::sort(active.begin(), active.end());
    active.erase(std::unique(active.begin(), active.end()), active.end());
    Xoshiro256ss rng(trial_seed);
    std::size_t chosen = active[rng.below(active.size())];
    for (std::size_t i = 0; i < comb.a.size(); ++i)
      comb.a[i] = capof[i] == chosen ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
    return comb;
  }
  throw ConfigError("unknown expsum density variant: " + variant);
}

}  // namespace

EstimateReport estimate_constant(std::int64_t R, int p, EvalMode mode,
                                 int trials, std::uint64_t seed, std::size_t M,
                                 int workers, int comb_N) {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  auto scheme = std::make_shared<PartitionScheme>(build_f3_r4(R));
  scheme->K = auto_K(R);
  const PhaseSpec phase = PhaseSpec::quartic_surface();
  const SamplingPlan plan = sample_ball({0.0, 0.0, 0.0}, double(R), M, seed);

  EstimateReport er;
  er.R = R;
  er.K = scheme->K;
  er.p = p;
  er.mode = eval_mode_name(mode);
  er.seed = seed;
  er.trials = trials;
  er.plan_points = plan.size();
  er.comb_N = mode == EvalMode::Expsum
                  ? (comb_N > 0 ? comb_N : default_comb_N(R))
                  : 0;

  const std::vector<std::string> expsum_family = {
      "comb_ones", "comb_percap", "comb_single_cap", "comb_random"};
  const std::vector<std::string> cont_family = {"constant", "percap",
                                                "single_cap"};

  EvalOptions opt;
  opt.mode = mode;
  opt.workers = workers;

  for (int t = 0; t < trials; ++t) {
    const std::uint64_t ts = mix_seed(seed, std::uint64_t(t));
    DensitySpec g;
    if (mode == EvalMode::Expsum) {
      const std::string& variant = expsum_family[t % expsum_family.size()];
      auto comb = std::make_shared<LatticeComb>(
          build_trial_comb(variant, er.comb_N, *scheme, ts));
      g = DensitySpec::make_comb(comb);
      g.seed = ts;
      g.label = variant + ":N=" + std::to_string(er.comb_N);
    } else {
      const std::string& variant = cont_family[t % cont_family.size()];
      if (variant == "constant") {
        kernels::SinCos sc =
            kernels::sincos_turns(double(ts >> 11) * 0x1.0p-53);
        g = DensitySpec::make_constant({sc.c, sc.s});
        g.seed = ts;
      } else if (variant == "percap") {
        g = DensitySpec::make_percap(ts, scheme);
      } else {
        Xoshiro256ss rng(ts);
        g = DensitySpec::make_single_cap(rng.below(scheme->caps.size()),
                                         scheme);
        g.seed = ts;
      }
    }
    DecouplingReport row = ratio(g, *scheme, phase, p, R, plan, opt);
    row.K = scheme->K;
    er.rows.push_back(std::move(row));
  }

  std::vector<double> ratios;
  ratios.reserve(er.rows.size());
  for (const auto& r : er.rows) ratios.push_back(r.ratio);
  er.max_ratio = *std::max_element(ratios.begin(), ratios.end());
  std::sort(ratios.begin(), ratios.end());
  er.median_ratio = ratios[(ratios.size() - 1) / 2];
  return er;
}

nlohmann::ordered_json EstimateReport::to_json() const {
  nlohmann::ordered_json j;
  j["R"] = R;
  j["K"] = K;
  j["p"] = p;
  j["mode"] = mode;
  j["seed"] = seed;
  j["trials"] = trials;
  j["plan_points"] = plan_points;
  if (comb_N != 0) j["comb_N"] = comb_N;
  j["max_ratio"] = max_ratio;
  j["median_ratio"] = median_ratio;
  auto rows_json = nlohmann::ordered_json::array();
  for (const auto& r : rows) rows_json.push_back(r.to_json(false));
  j["rows"] = std::move(rows_json);
  return j;
}

void EstimateReport::to_csv(std::ostream& out) const {
  out << "R,K,p,scheme,density,seed,lhs,rhs,ratio\n";
  out.precision(17);
  for (const auto& r : rows)
    out << r.R << "," << r.K << "," << r.p << "," << r.scheme_id << ","
        << r.density_id << "," << r.seed << "," << r.lhs << "," << r.rhs << ","
        << r.ratio << "\n";
}

void fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys,
                double* slope, double* intercept,
                std::vector<double>* residuals) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw ConfigError("fit needs >= 2 matched samples");
  const std::size_t n = xs.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw ConfigError("degenerate fit: all abscissae equal");
  *slope = sxy / sxx;
  *intercept = my - *slope * mx;
  if (residuals) {
    residuals->resize(n);
    for (std::size_t i = 0; i < n; ++i)
      (*residuals)[i] = ys[i] - (*intercept + *slope * xs[i]);
  }
}

ScanReport growth_scan(const std::vector<std::int64_t>& R_list, int p,
                       EvalMode mode, int trials, std::uint64_t seed,
                       std::size_t M, int workers) {
  if (R_list.size() < 3)
    throw ConfigError("growth scan needs at least 3 scales");
  {
    auto sorted = R_list;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ConfigError("growth scan scales must be distinct");
  }
  ScanReport sr;
  sr.R_list = R_list;
  sr.p = p;
  sr.mode = eval_mode_name(mode);
  sr.seed = seed;
  sr.trials = trials;
  std::vector<double> xs, ys;
  for (std::int64_t R : R_list) {
    EstimateReport er = estimate_constant(R, p, mode, trials, seed, M, workers);
    sr.max_ratios.push_back(er.max_ratio);
    xs.push_back(std::log(double(R)));
    ys.push_back(std::log(er.max_ratio));
    sr.estimates.push_back(std::move(er));
  }
  fit_loglog(xs, ys, &sr.slope, &sr.intercept, &sr.residuals);
  return sr;
}

nlohmann::ordered_json ScanReport::to_json() const {
  nlohmann::ordered_json j;
  j["R_list"] = R_list;
  j["p"] = p;
  j["mode"] = mode;
  j["seed"] = seed;
  j["trials"] = trials;
  j["max_ratios"] = max_ratios;
  j["slope"] = slope;
  j["intercept"] = intercept;
  j["residuals"] = residuals;
  auto est = nlohmann::ordered_json::array();
  for (const auto& e : estimates) est.push_back(e.to_json());
  j["estimates"] = std::move(est);
  return j;
}

void ScanReport::to_csv(std::ostream& out) const {
  out << "R,max_ratio,log_R,log_max_ratio,slope\n";
  out.precision(17);
  for (std::size_t i = 0; i < R_list.size(); ++i)
    out << R_list[i] << "," << max_ratios[i] << "," << std::log(double(R_list[i]))
        << "," << std::log(max_ratios[i]) << "," << slope << "\n";
}

std::int64_t KRule::operator()(std::int64_t R) const {
  if (fixed) {
    scale_log16(fixed_K);
    return fixed_K;
  }
  return auto_K(R);
}

RecurrenceResult recurrence_iterate(double a, double eps, const KRule& rule,
                                    std::int64_t R, double c, double d_base) {
  if (!(a > 0.0)) throw ConfigError("recurrence needs a > 0");
  if (eps < 0.0 || eps > 0.5)
    throw ConfigError("recurrence needs 0 <= eps <= 1/2");
  scale_log16(R);

  RecurrenceResult res;
  res.d_base = d_base;
  double total = 0.0;
  double worst_kc_over_reps = 0.0;
  std::int64_t Ri = R;
  while (Ri >= 16) {
    std::int64_t Ki = rule(Ri);
    bool clamped = false;
    if (Ki > Ri) {
      Ki = Ri;
      clamped = true;
    }
    const double kc = std::pow(double(Ki), c);
    const double reps = std::pow(double(Ri), eps);
    RecurrenceRow row;
    row.R = Ri;
    row.K = Ki;
    row.term = a * kc * reps;
    row.contracting = !clamped && kc <= reps;
    worst_kc_over_reps = std::max(worst_kc_over_reps, kc / reps);
    total += row.term;
    res.rows.push_back(row);
    Ri /= Ki;
  }
  res.bound = total + d_base;

  if (eps == 0.0) {
    // Degenerate diagnostic: no contraction, bound grows with the step count.
    res.a_prime = res.bound;
    res.certified = false;
    res.note = "eps = 0: no contraction; bound grows like steps * a * K^c";
    return res;
  }
  // term_i = a * (K_i^c / R_i^eps) * R_i^(2 eps) and the scales decay by at
  // least 16 per step, so the series is dominated by a geometric one:
  const double geom = 1.0 / (1.0 - std::pow(16.0, -2.0 * eps));
  res.a_prime = a * worst_kc_over_reps * geom + d_base;
  res.certified = res.bound <= res.a_prime * std::pow(double(R), 2.0 * eps);
  const std::size_t contracting =
      std::size_t(std::count_if(res.rows.begin(), res.rows.end(),
                                [](const RecurrenceRow& r) {
                                  return r.contracting;
                                }));
  res.note = std::to_string(contracting) + "/" +
             std::to_string(res.rows.size()) + " steps contracting";
  return res;
}

nlohmann::ordered_json RecurrenceResult::to_json() const {
  nlohmann::ordered_json j;
  auto rows_json = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json rj;
    rj["R"] = r.R;
    rj["K"] = r.K;
    rj["term"] = r.term;
    rj["contracting"] = r.contracting;
    rows_json.push_back(rj);
  }
  j["rows"] = std::move(rows_json);
  j["d_base"] = d_base;
  j["bound"] = bound;
  j["a_prime"] = a_prime;
  j["certified"] = certified;
  j["note"] = note;
  return j;
}

TwoThirdsResult two_thirds_iterate(double C, double eps, double R,
                                   double base_value) {
  if (!(C > 0.0) || !(R > 1.0))
    throw ConfigError("two-thirds iteration needs C > 0, R > 1");
  TwoThirdsResult res;
  double expo = 1.0;
  double log_bound = std::log(base_value);
  while (std::pow(R, expo) > 4.0) {
    log_bound += std::log(C) + eps * expo * std::log(R);
    res.exponent_sum += expo;
    expo *= 2.0 / 3.0;
    ++res.steps;
  }
  res.bound = std::exp(log_bound);
  res.c_prime = std::pow(C, double(res.steps)) * base_value;
  // exponent_sum < 3 makes the accumulated power at most R^(3 eps).
  res.certified = res.exponent_sum < 3.0 &&
                  res.bound <= res.c_prime * std::pow(R, 3.0 * eps) *
                                   (1.0 + 1e-12);
  return res;
}

nlohmann::ordered_json TwoThirdsResult::to_json() const {
  nlohmann::ordered_json j;
  j["steps"] = steps;
  j["exponent_sum"] = exponent_sum;
  j["bound"] = bound;
  j["c_prime"] = c_prime;
  j["certified"] = certified;
  return j;
}

IdentityReport rescaling_identity_check(const std::string& name,
                                        const Rescaling& r,
                                        const PhaseSpec& source, int npoints,
                                        int ndensities, std::uint64_t seed,
                                        int workers) {
  IdentityReport rep;
  rep.name = name;
  Xoshiro256ss rng(seed);
  std::vector<Point3> pts(static_cast<std::size_t>(npoints), Point3{});
  for (auto& p : pts)
    p = {rng.uniform(-24, 24), rng.uniform(-24, 24), rng.uniform(-24, 24)};
  std::vector<Point3> mapped(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) mapped[i] = r.map_point(pts[i]);

  const int q = required_log2_h(r.source, source, pts);
  Dyadic n1d = r.source.x.length() * Dyadic::pow2(q);
  Dyadic n2d = r.source.y.length() * Dyadic::pow2(q);
  const std::int64_t n1 = n1d.m << n1d.e, n2 = n2d.m << n2d.e;
  const double amp = r.amplitude.to_double();

  for (int d = 0; d < ndensities; ++d) {
    Xoshiro256ss drng(mix_seed(seed, std::uint64_t(d)));
    DensitySpec g;
    if (d % 2 == 0) {
      kernels::SinCos sc = kernels::sincos_turns(drng.uniform());
      g = DensitySpec::make_constant({sc.c, sc.s});
    } else {
      const double cx =
          r.source.x.lo.to_double() +
          drng.uniform(0.25, 0.75) * r.source.x.length().to_double();
      const double cy =
          r.source.y.lo.to_double() +
          drng.uniform(0.25, 0.75) * r.source.y.length().to_double();
      const double w = drng.uniform(0.5, 1.5) *
                       std::max(r.source.x.length().to_double(),
                                r.source.y.length().to_double());
      g = DensitySpec::make_bump(cx, cy, w);
    }
    Field sf = evaluate_continuous_n(
        r.source, [&](double a, double b) { return g.eval(a, b); }, source,
        pts, n1, n2, workers);
    Field tf = evaluate_continuous_n(
        unit_square(),
        [&](double e1, double e2) {
          auto xi = r.freq_map(e1, e2);
          return amp * g.eval(xi[0], xi[1]);
        },
        r.target_phase, mapped, n1, n2, workers);
    for (std::size_t i = 0; i < pts.size(); ++i)
      rep.max_err_continuous = std::max(
          rep.max_err_continuous,
          std::fabs(std::abs(sf.values[i]) - std::abs(tf.values[i])) / amp);
  }

  // Discrete identity: comb atoms in the cap map with unchanged coefficients.
  {
    const int N = 256;
    Xoshiro256ss arng(mix_seed(seed, 9999));
    kernels::AtomSoA sa, ta;
    const double w1 = r.freq1.scale.to_double(),
                 a1 = r.freq1.offset.to_double();
    const double w2 = r.freq2.scale.to_double(),
                 a2 = r.freq2.offset.to_double();
    for (int n = 0; n < N; ++n)
      for (int m = 0; m < N; ++m) {
        const double xi1 = double(n) / N, xi2 = double(m) / N;
        if (xi1 < a1 || xi1 >= a1 + w1 || xi2 < a2 || xi2 >= a2 + w2) continue;
        kernels::SinCos sc = kernels::sincos_turns(arng.uniform());
        Complex a{sc.c, sc.s};
        sa.push(xi1, xi2, source.eval(xi1, xi2), a);
        const double e1 = (xi1 - a1) / w1, e2 = (xi2 - a2) / w2;
        ta.push(e1, e2, r.target_phase.eval(e1, e2), a);
      }
    Field sf = evaluate_atoms(sa, pts, workers);
    Field tf = evaluate_atoms(ta, mapped, workers);
    for (std::size_t i = 0; i < pts.size(); ++i)
      rep.max_err_expsum =
          std::max(rep.max_err_expsum,
                   std::fabs(std::abs(sf.values[i]) - std::abs(tf.values[i])) /
                       double(sa.size()));
  }
  return rep;
}

Dyadic curve_piece_width_gamma_lambda(Dyadic lambda, std::int64_t K) {
  const int sq = scale_log16(K);
  return lambda.inv() * Dyadic::pow2(-2 * sq);
}

Dyadic curve_piece_width_class(std::int64_t K) {
  const int sq = scale_log16(K);
  return Dyadic::pow2(-2 * sq);
}

CurveRatioReport curve_ratio_2d(const PhaseSpec& curve, const DInterval& domain,
                                Dyadic piece_width, std::int64_t K, int p,
                                const SamplingPlan& plan2d,
                                const DensitySpec& g, int workers) {
  if (curve.mode != PhaseMode::Curve1D)
    throw ConfigError("curve ratios need a Curve1D phase");
  if (p < 2 || p > 6) throw ConfigError("curve decoupling handles 2 <= p <= 6");
  if (plan2d.dim != 2) throw ShapeError("curve ratios need a 2D plan");
  if (plan2d.radius != double(K))
    throw ShapeError("sampling plan radius does not match K");
  if (!g.per_cap_constant())
    throw ConfigError("curve ratios take per-piece-constant densities");
  {
    DerivBounds b = derivative_bounds(curve.phi1, domain.lo.to_double(),
                                      domain.hi.to_double());
    if (b.d2_min <= 0.0)
      throw PhaseClassError("curve phase is degenerate on the domain");
  }

  Dyadic count = domain.length() / piece_width;
  if (count.e < 0 || count.m <= 0)
    throw ConfigError("piece width does not divide the domain");
  const std::int64_t npieces = count.m << count.e;

  // Quadrature step from the fastest oscillation over the plan points.
  const double b1 =
      curve.phi1.deriv1_bound(domain.lo.to_double(), domain.hi.to_double());
  double rate = 0.0;
  for (const auto& x : plan2d.points)
    rate = std::max(rate, std::fabs(x[0]) + std::fabs(x[1]) * b1);
  int q = 0;
  while (std::ldexp(rate, -q) > 0.25) ++q;
  q = std::max(q, -piece_width.e);

  const std::size_t npts = plan2d.size();
  WeightSpec w = WeightSpec::for_ball(plan2d);
  std::vector<double> wvals(npts);
  for (std::size_t i = 0; i < npts; ++i) wvals[i] = w.eval(plan2d.points[i]);

  std::vector<Complex> full(npts, Complex{0.0, 0.0});
  std::vector<double> piece_norms(std::size_t(npieces), 0.0);
  Dyadic nnodes_d = piece_width * Dyadic::pow2(q);
  const std::int64_t nnodes = nnodes_d.m << nnodes_d.e;

  for (std::int64_t k = 0; k < npieces; ++k) {
    Dyadic lo = domain.lo + Dyadic::from_int(k) * piece_width;
    DInterval piece{lo, lo + piece_width};
    const Complex c = g.cap_value(std::size_t(k));
    kernels::AtomSoA atoms = make_interval_atoms(piece, curve.phi1, nnodes);
    std::vector<Complex> vals(npts, Complex{0.0, 0.0});
    if (!(c == Complex{0.0, 0.0})) {
      parallel_for(npts, workers, [&](std::size_t b, std::size_t e) {
        kernels::AtomScratch scratch;
        for (std::size_t i = b; i < e; ++i) {
          // Planar extension: phase x1*t + x2*phi(t).
          Complex v = kernels::atom_sum_point(atoms, plan2d.points[i][0], 0.0,
                                              plan2d.points[i][1], scratch);
          vals[i] = c * v;
        }
      });
      for (std::size_t i = 0; i < npts; ++i) full[i] += vals[i];
    }
    std::vector<double> buf(npts);
    for (std::size_t i = 0; i < npts; ++i)
      buf[i] = plan2d.weights[i] * wvals[i] * abs_pow_p(vals[i], p);
    piece_norms[std::size_t(k)] =
        kernels::nth_root(kernels::pairwise_sum(buf), p);
  }

  CurveRatioReport rep;
  rep.K = K;
  rep.p = p;
  rep.density_id = g.label;
  rep.seed = g.seed;
  rep.pieces = std::size_t(npieces);
  {
    std::vector<double> buf(plan2d.inner_count);
    for (std::size_t i = 0; i < plan2d.inner_count; ++i)
      buf[i] = plan2d.weights[i] * abs_pow_p(full[i], p);
    rep.lhs = kernels::nth_root(kernels::pairwise_sum(buf), p);
  }
  rep.per_piece_norms = std::move(piece_norms);
  rep.rhs = l2_aggregate(rep.per_piece_norms);
  if (!(rep.rhs > 0.0)) throw DomainError("degenerate curve ratio: rhs vanished");
  rep.ratio = rep.lhs / rep.rhs;
  return rep;
}

}  // namespace declab
