#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "declab/extension.hpp"
#include "declab/norms.hpp"

namespace declab {

enum class EvalMode { Continuous, Expsum };
const char* eval_mode_name(EvalMode m);

struct EvalOptions {
  EvalMode mode = EvalMode::Expsum;
  int workers = 1;
  int comb_N = 0;  // 0 -> min(64, R^1/2)
};

// One decoupling-ratio measurement: lhs = |E_region g|_Lp(B_R) against the
// l2 aggregate of per-cap weighted norms.
struct DecouplingReport {
  std::int64_t R = 0, K = 0;
  int p = 2;
  std::string scheme_id, density_id, mode;
  std::uint64_t seed = 0;
  double lhs = 0.0, rhs = 0.0, ratio = 0.0;
  std::vector<double> per_cap_norms;
  double runtime_seconds = 0.0;  // in-memory diagnostic; never serialized

  nlohmann::ordered_json to_json(bool include_per_cap = false) const;
};

DecouplingReport ratio(const DensitySpec& g, const PartitionScheme& scheme,
                       const PhaseSpec& phase, int p, std::int64_t R,
                       const SamplingPlan& plan, const EvalOptions& opt);

// Cauchy-Schwarz cap-count bound; every measured ratio must stay below
// 4 * sqrt(#caps).
double trivial_decoupling_bound(const PartitionScheme& scheme, int p);

struct EstimateReport {
  std::int64_t R = 0, K = 0;
  int p = 2;
  std::string mode;
  std::uint64_t seed = 0;
  int trials = 0;
  std::size_t plan_points = 0;
  int comb_N = 0;
  double max_ratio = 0.0, median_ratio = 0.0;
  std::vector<DecouplingReport> rows;

  nlohmann::ordered_json to_json() const;
  void to_csv(std::ostream& out) const;
};

// Max ratio over a cycling density family (lower bound for the decoupling
// constant restricted to that family).
EstimateReport estimate_constant(std::int64_t R, int p, EvalMode mode,
                                 int trials, std::uint64_t seed, std::size_t M,
                                 int workers, int comb_N = 0);

struct ScanReport {
  std::vector<std::int64_t> R_list;
  int p = 2;
  std::string mode;
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<double> max_ratios;
  double slope = 0.0, intercept = 0.0;
  std::vector<double> residuals;
  std::vector<EstimateReport> estimates;

  nlohmann::ordered_json to_json() const;
  void to_csv(std::ostream& out) const;
};

// Least-squares fit of log(estimate) against log(R).
void fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys,
                double* slope, double* intercept,
                std::vector<double>* residuals);

ScanReport growth_scan(const std::vector<std::int64_t>& R_list, int p,
                       EvalMode mode, int trials, std::uint64_t seed,
                       std::size_t M, int workers);

// K(R) selection for the induction-on-scales iteration.
struct KRule {
  bool fixed = false;
  std::int64_t fixed_K = 16;

  static KRule auto_rule() { return {}; }
  static KRule fixed_rule(std::int64_t K) { return {true, K}; }
  std::int64_t operator()(std::int64_t R) const;
};

struct RecurrenceRow {
  std::int64_t R = 0, K = 0;
  double term = 0.0;
  bool contracting = false;  // K^c <= R^eps at this step
};

// Iterates D(R) <= a K^c R^eps + D(R/K) down to the unit scale and checks the
// accumulated bound against a_prime * R^(2 eps), with a_prime derived from
// the chain's worst K^c/R^eps and the geometric decay of the scales.
struct RecurrenceResult {
  std::vector<RecurrenceRow> rows;
  double d_base = 1.0;
  double bound = 0.0;
  double a_prime = 0.0;
  bool certified = false;
  std::string note;

  nlohmann::ordered_json to_json() const;
};

RecurrenceResult recurrence_iterate(double a, double eps, const KRule& rule,
                                    std::int64_t R, double c = 2.0,
                                    double d_base = 1.0);

// K_p(R) <= C R^eps K_p(R^{2/3}): iterate the exponent sequence 1, 2/3, 4/9,
// ... and certify the accumulated bound against C' R^{3 eps}.
struct TwoThirdsResult {
  int steps = 0;
  double exponent_sum = 0.0;  // sum of (2/3)^i over the chain, < 3
  double bound = 0.0;
  double c_prime = 0.0;
  bool certified = false;

  nlohmann::ordered_json to_json() const;
};

TwoThirdsResult two_thirds_iterate(double C, double eps, double R,
                                   double base_value = 1.0);

// 2D analogue for curves t -> (t, phi1(t)): rectangle pieces of the given
// width over the domain, weighted norms on a disk plan (exponent 200).
struct CurveRatioReport {
  std::int64_t K = 0;
  int p = 2;
  std::string density_id;
  std::uint64_t seed = 0;
  std::size_t pieces = 0;
  double lhs = 0.0, rhs = 0.0, ratio = 0.0;
  std::vector<double> per_piece_norms;
};

CurveRatioReport curve_ratio_2d(const PhaseSpec& curve, const DInterval& domain,
                                Dyadic piece_width, std::int64_t K, int p,
                                const SamplingPlan& plan2d,
                                const DensitySpec& g, int workers = 1);

// Piece width rules from the two curve families.
Dyadic curve_piece_width_gamma_lambda(Dyadic lambda, std::int64_t K);
Dyadic curve_piece_width_class(std::int64_t K);

// Pointwise modulus identity for one rescaling: matched-quadrature continuous
// error (relative to the amplitude scale) and exact-sum discrete error, over
// random spatial points x random densities.
struct IdentityReport {
  std::string name;
  double max_err_continuous = 0.0;
  double max_err_expsum = 0.0;
};

IdentityReport rescaling_identity_check(const std::string& name,
                                        const Rescaling& r,
                                        const PhaseSpec& source, int npoints,
                                        int ndensities, std::uint64_t seed,
                                        int workers);

}  // namespace declab
