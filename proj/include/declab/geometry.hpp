#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include <json.hpp>

#include "declab/dyadic.hpp"
#include "declab/partition.hpp"

namespace declab {

// Polynomial with exact dyadic coefficients, degree <= 4.
struct DyadicPoly {
  std::array<Dyadic, 5> c{};

  static DyadicPoly zero() { return {}; }
  // c4 * t^4, used for the quartic surface axes.
  static DyadicPoly quartic() {
    DyadicPoly p;
    p.c[4] = Dyadic::from_int(1);
    return p;
  }
  static DyadicPoly from(std::initializer_list<Dyadic> coeffs);

  double eval(double t) const;
  Dyadic eval_exact(Dyadic t) const;
  DyadicPoly derivative() const;
  // Coefficients of p(a + u) as a polynomial in u; exact.
  DyadicPoly taylor_shift(Dyadic a) const;
  int degree() const;
  // Conservative bound for max |p'| over [lo, hi].
  double deriv1_bound(double lo, double hi) const;
};

bool operator==(const DyadicPoly& a, const DyadicPoly& b);

enum class PhaseMode { Surface2D, Curve1D };

// Separable surface phase phi1(xi1) + phi2(xi2), or a planar curve t ->
// (t, phi1(t)).
struct PhaseSpec {
  PhaseMode mode = PhaseMode::Surface2D;
  DyadicPoly phi1, phi2;

  static PhaseSpec quartic_surface() {
    return {PhaseMode::Surface2D, DyadicPoly::quartic(), DyadicPoly::quartic()};
  }
  static PhaseSpec surface(DyadicPoly p1, DyadicPoly p2) {
    return {PhaseMode::Surface2D, std::move(p1), std::move(p2)};
  }
  static PhaseSpec curve(DyadicPoly p1) {
    return {PhaseMode::Curve1D, std::move(p1), DyadicPoly::zero()};
  }

  double eval(double xi1, double xi2) const {
    return mode == PhaseMode::Surface2D ? phi1.eval(xi1) + phi2.eval(xi2)
                                        : phi1.eval(xi1);
  }
};

struct DerivBounds {
  double d2_min, d2_max;  // exact extremum analysis of p'' on the interval
  double d3_max_abs, d4_max_abs;
};

// Exact quadratic extremum analysis of p'' on [lo, hi].
DerivBounds derivative_bounds(const DyadicPoly& p, double lo, double hi);

// Degree gate + bounds on [0,1]; throws PhaseClassError for degree > 4.
DerivBounds phase_derivative_bounds(const std::vector<Dyadic>& coeffs);
inline DerivBounds phase_derivative_bounds(const DyadicPoly& p) {
  return derivative_bounds(p, 0.0, 1.0);
}

// Gaussian curvature of the graph of xi1^4 + xi2^4.
double gaussian_curvature(double xi1, double xi2);

// Affine per-axis frequency map xi = offset + scale * eta, [0,1]^2 -> cap.
struct AffineAxis {
  Dyadic scale, offset;
};

// Paired frequency/spatial change of variables with amplitude and target
// phase: |E_cap g (x)| = |E_target gt (spatial * x)| where
// gt = amplitude * (g o freq_map).
struct Rescaling {
  AffineAxis freq1, freq2;
  std::array<std::array<Dyadic, 3>, 3> spatial;
  Dyadic amplitude;          // freq1.scale * freq2.scale
  Dyadic jacobian_p_factor;  // 1 / det(spatial); L^p norm conversion constant
  PhaseSpec target_phase;
  DRect source;

  std::array<double, 3> map_point(const std::array<double, 3>& x) const;
  std::array<double, 2> freq_map(double eta1, double eta2) const;
};

// Core builder: cap rescaling for a separable source phase, x3 normalized by
// s. Target coefficients come from the Taylor expansion at the cap's own
// corner, so the pointwise identity is exact for every cap, not only the
// block corner.
Rescaling make_separable_rescaling(const DRect& cap, const PhaseSpec& source,
                                   Dyadic s);

Rescaling rescale_omega0(const Cap& tau);
Rescaling rescale_omega3(std::int64_t K);
Rescaling rescale_omega1(const Cap& slab);
Rescaling rescale_nu_D0(const Cap& nu, const PhaseSpec& source);
Rescaling rescale_nu_D1(std::int64_t K, const PhaseSpec& source);

// Image of theta under the inverse frequency map, plus exact membership of
// the image in the target scheme's cap list.
std::pair<DRect, bool> map_cap(const DRect& theta, const Rescaling& r,
                               const PartitionScheme& target);

nlohmann::ordered_json rescaling_to_json(const Rescaling& r);

}  // namespace declab
