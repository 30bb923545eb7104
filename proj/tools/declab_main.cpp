// declab: numerical laboratory for dyadic frequency decompositions of the
// quartic surface, extension-operator evaluation, and decoupling-ratio
// experiments.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "declab/decoupling.hpp"
#include "declab/errors.hpp"
#include "declab/extension.hpp"
#include "declab/geometry.hpp"
#include "declab/kernels/sincos.hpp"
#include "declab/norms.hpp"
#include "declab/parallel.hpp"
#include "declab/partition.hpp"
#include "declab/rng.hpp"

namespace {

using namespace declab;

struct CommonOpts {
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 42;
  int workers = 0;  // 0 -> hardware
  std::string kernel = "auto";
};

void add_common(CLI::App* app, CommonOpts* c) {
  app->add_option("--out", c->out, "output path (default: stdout)");
  app->add_option("--format", c->format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--seed", c->seed, "PRNG seed (default 42)");
  app->add_option("--workers", c->workers,
                  "worker threads (results are worker-count independent)");
  app->add_option("--kernel", c->kernel, "auto|scalar|avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));
}

int workers_of(const CommonOpts& c) {
  return c.workers > 0 ? c.workers : default_workers();
}

void apply_kernel(const CommonOpts& c) {
  using kernels::Backend;
  if (c.kernel == "scalar") {
    kernels::set_backend(Backend::Scalar);
  } else if (c.kernel == "avx2") {
    if (!kernels::set_backend(Backend::Avx2))
      throw ConfigError("avx2 kernel requested but not supported by this CPU");
  }
}

void emit(const CommonOpts& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw ConfigError("cannot open output path: " + c.out);
  f << text;
}

EvalMode parse_mode(const std::string& m) {
  if (m == "expsum") return EvalMode::Expsum;
  if (m == "continuous") return EvalMode::Continuous;
  throw ConfigError("mode must be continuous or expsum");
}

std::int64_t parse_K(const std::string& k, std::int64_t R) {
  if (k == "auto") return auto_K(R);
  std::int64_t v = std::stoll(k);
  scale_log16(v);
  return v;
}

// ---------------------------------------------------------------- partition
int cmd_partition(std::int64_t R, const std::string& kind,
                  const std::string& K_str, const CommonOpts& c) {
  PartitionScheme scheme;
  if (kind == "f3r4") {
    scheme = build_f3_r4(R);
  } else if (kind == "f3r24") {
    scheme = build_f3_r24(R);
  } else {
    std::int64_t K = parse_K(K_str.empty() ? "auto" : K_str, R);
    scheme = kind == "omega0" ? omega0_caps(K) : omega1_slabs(K);
  }
  PartitionReport rep = verify_partition(scheme);
  nlohmann::ordered_json j;
  j["scheme"] = scheme_to_json(scheme);
  j["verify"] = partition_report_to_json(rep);
  emit(c, j.dump(2));
  return rep.covers && rep.disjoint ? 0 : 1;
}

// ---------------------------------------------------------------- curvature
int cmd_curvature(int n, const CommonOpts& c) {
  if (n < 1) throw ConfigError("grid resolution must be >= 1");
  std::ostringstream out;
  out.precision(17);
  out << "xi1,xi2,curvature\n";
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      double x = double(i) / n, y = double(j) / n;
      out << x << "," << y << "," << gaussian_curvature(x, y) << "\n";
    }
  emit(c, out.str());
  return 0;
}

// ------------------------------------------------------------ rescale-check
int cmd_rescale_check(std::int64_t K, std::int64_t R, std::int64_t map_K,
                      int npts, int ndens, const CommonOpts& c) {
  const int workers = workers_of(c);
  PhaseSpec quartic = PhaseSpec::quartic_surface();
  DyadicPoly perturbed = DyadicPoly::from(
      {Dyadic::from_int(0), Dyadic::from_int(0), Dyadic::from_int(6),
       Dyadic::from_int(4), Dyadic::from_int(1)});
  PhaseSpec f224 = PhaseSpec::surface(perturbed, DyadicPoly::quartic());

  std::vector<IdentityReport> checks;
  auto om0 = omega0_caps(K);
  checks.push_back(rescaling_identity_check(
      "omega0", rescale_omega0(om0.caps.front()), quartic, npts, ndens, c.seed,
      workers));
  auto om1 = omega1_slabs(K);
  checks.push_back(rescaling_identity_check(
      "omega1", rescale_omega1(om1.caps.back()), quartic, npts, ndens,
      c.seed + 1, workers));
  checks.push_back(rescaling_identity_check(
      "omega3", rescale_omega3(K), quartic, npts, ndens, c.seed + 2, workers));
  auto s24 = build_f3_r24(K);
  const Cap* nu0 = nullptr;
  for (const auto& cap : s24.caps)
    if (cap.p[1] >= 1) {
      nu0 = &cap;
      break;
    }
  checks.push_back(rescaling_identity_check("nu_D0", rescale_nu_D0(*nu0, f224),
                                            f224, npts, ndens, c.seed + 3,
                                            workers));
  checks.push_back(rescaling_identity_check("nu_D1", rescale_nu_D1(K, f224),
                                            f224, npts, ndens, c.seed + 4,
                                            workers));

  // Case (a)/(b) membership: every F3(R,4) cap inside an Omega1 slab maps
  // into a member of F3(R/map_K, 2, 4).
  std::size_t mapped_caps = 0, failures = 0;
  {
    auto slabs = omega1_slabs(map_K);
    auto f3 = build_f3_r4(R);
    auto target = build_f3_r24(R / map_K);
    for (const auto& slab : slabs.caps) {
      Rescaling r = rescale_omega1(slab);
      for (const auto& cap : f3.caps) {
        if (!r.source.contains(cap.rect)) continue;
        auto [img, member] = map_cap(cap.rect, r, target);
        ++mapped_caps;
        if (!member) ++failures;
      }
    }
  }

  bool all_pass = failures == 0;
  nlohmann::ordered_json j;
  j["K"] = K;
  j["R"] = R;
  j["map_K"] = map_K;
  j["points"] = npts;
  j["densities"] = ndens;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& chk : checks) {
    const bool pass =
        chk.max_err_continuous < 1e-8 && chk.max_err_expsum < 1e-10;
    all_pass = all_pass && pass;
    nlohmann::ordered_json cj;
    cj["constructor"] = chk.name;
    cj["max_rel_err_continuous"] = chk.max_err_continuous;
    cj["max_rel_err_expsum"] = chk.max_err_expsum;
    cj["pass"] = pass;
    arr.push_back(cj);
  }
  j["identities"] = std::move(arr);
  j["membership"] = {{"caps_checked", mapped_caps}, {"failures", failures}};
  j["pass"] = all_pass;
  emit(c, j.dump(2));
  return all_pass ? 0 : 1;
}

// ----------------------------------------------------------------- estimate
int cmd_estimate(std::int64_t R, int p, const std::string& mode, int trials,
                 std::size_t M, int comb_N, const CommonOpts& c) {
  EvalMode m = parse_mode(mode);
  auto er =
      estimate_constant(R, p, m, trials, c.seed, M, workers_of(c), comb_N);
  double bound = 4.0 * trivial_decoupling_bound(build_f3_r4(R), p);
  bool ok = true;
  for (const auto& row : er.rows) ok = ok && row.ratio <= bound;
  if (c.format == "csv") {
    std::ostringstream out;
    er.to_csv(out);
    emit(c, out.str());
  } else {
    auto j = er.to_json();
    j["trivial_bound_4sqrt"] = bound;
    j["trivial_bound_ok"] = ok;
    emit(c, j.dump(2));
  }
  return ok ? 0 : 1;
}

// --------------------------------------------------------------------- scan
int cmd_scan(const std::vector<std::int64_t>& R_list, int p,
             const std::string& mode, int trials, std::size_t M,
             double max_slope, const CommonOpts& c) {
  EvalMode m = parse_mode(mode);
  auto sr = growth_scan(R_list, p, m, trials, c.seed, M, workers_of(c));
  bool ok = sr.slope <= max_slope;
  if (c.format == "csv") {
    std::ostringstream out;
    sr.to_csv(out);
    emit(c, out.str());
  } else {
    auto j = sr.to_json();
    j["max_slope"] = max_slope;
    j["slope_ok"] = ok;
    emit(c, j.dump(2));
  }
  return ok ? 0 : 1;
}

// ------------------------------------------------------------------- oracle
int cmd_oracle(int N, int P1, int P2, int P3, bool quadrature,
               const CommonOpts& c) {
  std::uint64_t count = oracle_l4_count(N);
  nlohmann::ordered_json j;
  j["N"] = N;
  j["count"] = count;
  bool ok = true;
  if (N <= 6) {
    std::uint64_t brute = oracle_l4_count_bruteforce(N);
    j["bruteforce"] = brute;
    ok = ok && brute == count;
  }
  if (quadrature) {
    if (P1 <= 0) P1 = 1 << int(std::ceil(std::log2(2.0 * N)));
    if (P2 <= 0) P2 = P1;
    if (P3 <= 0) {
      double need = 4.0 * std::pow(double(N - 1), 4.0) + 1.0;
      P3 = 1 << int(std::ceil(std::log2(need + 1.0)));
    }
    double avg = oracle_l4_period_average(N, P1, P2, P3, workers_of(c));
    double rel = std::fabs(avg / double(count) - 1.0);
    j["quadrature"] = {{"P1", P1},
                       {"P2", P2},
                       {"P3", P3},
                       {"period_average", avg},
                       {"rel_diff", rel}};
    ok = ok && rel < 0.01;
  }
  j["pass"] = ok;
  emit(c, j.dump(2));
  return ok ? 0 : 1;
}

// --------------------------------------------------------------- recurrence
int cmd_recurrence(double a, double eps, double cpow, const std::string& K_str,
                   std::int64_t R, double d_base, bool two_thirds, double C,
                   const CommonOpts& c) {
  nlohmann::ordered_json j;
  bool ok = true;
  if (two_thirds) {
    auto res = two_thirds_iterate(C, eps, double(R), d_base);
    j["two_thirds"] = res.to_json();
    ok = res.certified;
  } else {
    KRule rule = K_str == "auto" ? KRule::auto_rule()
                                 : KRule::fixed_rule(std::stoll(K_str));
    auto res = recurrence_iterate(a, eps, rule, R, cpow, d_base);
    j = res.to_json();
    ok = res.certified || eps == 0.0;  // eps = 0 is a diagnostic run
  }
  emit(c, j.dump(2));
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "declab: dyadic decompositions, extension operators and decoupling "
      "ratios for the quartic surface"};
  app.require_subcommand(1);

  CommonOpts common;

  auto* sp = app.add_subcommand("partition", "build and verify a scheme");
  std::int64_t pR = 256;
  std::string pkind = "f3r4", pK;
  sp->add_option("--R", pR, "scale R = 2^(4l)");
  sp->add_option("--scheme", pkind, "f3r4|f3r24|omega0|omega1")
      ->check(CLI::IsMember({"f3r4", "f3r24", "omega0", "omega1"}));
  sp->add_option("--K", pK, "scale K = 2^(4s) or auto (omega schemes)");
  add_common(sp, &common);

  auto* sc = app.add_subcommand("curvature", "CSV grid of Gaussian curvature");
  int cn = 64;
  sc->add_option("--n", cn, "grid resolution (n+1 points per axis)");
  add_common(sc, &common);

  auto* sr = app.add_subcommand(
      "rescale-check", "pointwise rescaling identities and cap-image checks");
  std::int64_t rK = 256, rR = 256, rmapK = 16;
  int rpts = 32, rdens = 8;
  sr->add_option("--K", rK, "identity-check scale (default 256)");
  sr->add_option("--R", rR, "membership-check scale (default 256)");
  sr->add_option("--map-K", rmapK, "membership rescaling K (default 16)");
  sr->add_option("--points", rpts, "random spatial points (default 32)");
  sr->add_option("--densities", rdens, "random densities (default 8)");
  add_common(sr, &common);

  auto* se = app.add_subcommand("estimate", "decoupling constant estimate");
  std::int64_t eR = 256;
  int ep = 4, etrials = 8, eN = 0;
  std::size_t eM = 512;
  std::string emode = "expsum";
  se->add_option("--R", eR, "scale R = 2^(4l)");
  se->add_option("--p", ep, "Lebesgue exponent (2..4)");
  se->add_option("--mode", emode, "continuous|expsum");
  se->add_option("--trials", etrials, "density trials (default 8)");
  se->add_option("--M", eM, "plan points in the ball (default 512)");
  se->add_option("--N", eN, "comb lattice size (0 = auto)");
  add_common(se, &common);

  auto* ss = app.add_subcommand("scan", "growth scan over scales");
  std::vector<std::int64_t> sR = {256, 4096, 65536};
  int sp_ = 4, strials = 8;
  std::size_t sM = 512;
  std::string smode = "expsum";
  double sslope = 0.1;
  ss->add_option("--R-list", sR, "scales (>= 3 distinct)");
  ss->add_option("--p", sp_, "Lebesgue exponent");
  ss->add_option("--mode", smode, "continuous|expsum");
  ss->add_option("--trials", strials, "trials per scale");
  ss->add_option("--M", sM, "plan points");
  ss->add_option("--max-slope", sslope, "acceptance slope (default 0.1)");
  add_common(ss, &common);

  auto* so = app.add_subcommand("oracle", "L4 solution count and quadrature");
  int oN = 4, oP1 = 0, oP2 = 0, oP3 = 0;
  bool oquad = true;
  so->add_option("--N", oN, "lattice size (<= 64)");
  so->add_option("--P1", oP1, "x1 grid (0 = auto)");
  so->add_option("--P2", oP2, "x2 grid (0 = auto)");
  so->add_option("--P3", oP3, "x3 grid (0 = auto)");
  so->add_flag("--quadrature,!--no-quadrature", oquad,
               "compare the period average of |S|^4");
  add_common(so, &common);

  auto* sq = app.add_subcommand("recurrence", "induction-on-scales iteration");
  double qa = 1.0, qeps = 0.1, qc = 2.0, qbase = 1.0, qC = 2.0;
  std::string qK = "auto";
  std::int64_t qR = 65536;
  bool qtt = false;
  sq->add_option("--a", qa, "per-step constant a");
  sq->add_option("--eps", qeps, "epsilon in (0, 1/2]; 0 = diagnostic");
  sq->add_option("--c", qc, "K power c (default 2)");
  sq->add_option("--K", qK, "auto or fixed 2^(4s)");
  sq->add_option("--R", qR, "starting scale");
  sq->add_option("--d-base", qbase, "terminal constant D(1)");
  sq->add_flag("--two-thirds", qtt, "iterate K_p(R) <= C R^eps K_p(R^{2/3})");
  sq->add_option("--C", qC, "constant for the two-thirds variant");
  add_common(sq, &common);

  try {
    app.parse(argc, argv);
    apply_kernel(common);
    if (sp->parsed()) return cmd_partition(pR, pkind, pK, common);
    if (sc->parsed()) return cmd_curvature(cn, common);
    if (sr->parsed())
      return cmd_rescale_check(rK, rR, rmapK, rpts, rdens, common);
    if (se->parsed())
      return cmd_estimate(eR, ep, emode, etrials, eM, eN, common);
    if (ss->parsed())
      return cmd_scan(sR, sp_, smode, strials, sM, sslope, common);
    if (so->parsed()) return cmd_oracle(oN, oP1, oP2, oP3, oquad, common);
    if (sq->parsed())
      return cmd_recurrence(qa, qeps, qc, qK, qR, qbase, qtt, qC, common);
    return 2;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const ScaleError& e) {
    std::fprintf(stderr, "config error (scale format): %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "failure: %s\n", e.what());
    return 1;
  }
}
