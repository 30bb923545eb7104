#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <json.hpp>

#include "declab/extension.hpp"

namespace declab {

// Low-discrepancy stratified sample of the ball B(x0,R) plus a shell out to
// 4R covering the weight's effective support. Inner points are
// volume-uniform with equal measure weights summing to vol(B_R); the shell
// uses 16 geometric radial strata so the fast decay just outside the ball is
// resolved. Identical seed => identical plan; scaling R -> 2R rescales the
// plan affinely.
struct SamplingPlan {
  std::array<double, 3> center{0.0, 0.0, 0.0};
  double radius = 0.0;
  std::uint64_t seed = 0;
  int dim = 3;  // 3 = ball in R^3; 2 = disk (curve experiments, x3 = 0)
  std::size_t inner_count = 0;

  std::vector<Point3> points;   // inner first, then shell
  std::vector<double> weights;  // measure weights per point

  std::size_t size() const { return points.size(); }
};

SamplingPlan sample_ball(const std::array<double, 3>& x0, double R,
                         std::size_t M, std::uint64_t seed, int dim = 3);

// w(x) = (1 + dist(x, B_R)/R)^-exponent: identically 1 on the ball, decaying
// like the standard adapted weight outside it; exponent = 100 * dim.
struct WeightSpec {
  int exponent = 300;
  std::array<double, 3> center{0.0, 0.0, 0.0};
  double R = 1.0;

  static WeightSpec for_ball(const SamplingPlan& plan) {
    return {100 * plan.dim, plan.center, plan.radius};
  }

  double eval(const Point3& x) const;
};

// (sum_i w_i |v_i|^p)^(1/p) over the plan's inner (B_R) points.
double lp_norm(const Field& field, int p, const SamplingPlan& plan);

// Weighted norm over all plan points (ball + shell).
double weighted_lp_norm(const Field& field, int p, const SamplingPlan& plan,
                        const WeightSpec& w);

// Variant with explicit per-point weight values (rescaled-plan checks).
double weighted_lp_norm(const Field& field, int p, const SamplingPlan& plan,
                        std::span<const double> weight_values);

// Euclidean aggregation of per-cap norms; empty list -> 0.
double l2_aggregate(std::span<const double> norms);

void plan_to_csv(const SamplingPlan& plan, std::ostream& out);
nlohmann::ordered_json weight_to_json(const WeightSpec& w);

}  // namespace declab
