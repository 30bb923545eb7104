#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "declab/geometry.hpp"
#include "declab/kernels/atomsum.hpp"
#include "declab/partition.hpp"

namespace declab {

using Point3 = std::array<double, 3>;
using Complex = std::complex<double>;

// Dirac comb on the N x N lattice (n/N, m/N), 0 <= n,m < N; coefficient
// table row-major (index n*N + m).
struct LatticeComb {
  int N = 1;
  std::vector<Complex> a;

  static LatticeComb ones(int N);
  Complex& at(int n, int m) { return a[std::size_t(n) * N + m]; }
  const Complex& at(int n, int m) const { return a[std::size_t(n) * N + m]; }

  static LatticeComb from_csv(std::istream& in);
  void to_csv(std::ostream& out) const;
};

enum class DensityKind {
  Constant,
  PerCapUnimodular,
  SingleCap,
  Bump,
  LatticeComb
};

// Test densities. PerCapUnimodular draws one unit-modulus constant per cap of
// the attached scheme from the seed; Bump is the C^1 window
// (1-s^2)^2 restricted to |s|<1 on each axis.
struct DensitySpec {
  DensityKind kind = DensityKind::Constant;
  Complex constant{1.0, 0.0};
  std::uint64_t seed = 0;
  std::shared_ptr<const PartitionScheme> scheme;
  double bump_cx = 0.5, bump_cy = 0.5, bump_w = 0.5;
  std::shared_ptr<const LatticeComb> comb;
  std::string label = "constant";

  std::size_t cap_index = 0;  // SingleCap support

  static DensitySpec make_constant(Complex c);
  static DensitySpec make_percap(std::uint64_t seed,
                                 std::shared_ptr<const PartitionScheme> s);
  static DensitySpec make_single_cap(std::size_t cap,
                                     std::shared_ptr<const PartitionScheme> s);
  static DensitySpec make_bump(double cx, double cy, double w);
  static DensitySpec make_comb(std::shared_ptr<const LatticeComb> comb);

  bool per_cap_constant() const {
    return kind == DensityKind::Constant ||
           kind == DensityKind::PerCapUnimodular ||
           kind == DensityKind::SingleCap;
  }
  // Value of the per-cap constant on cap i (Constant / PerCapUnimodular).
  Complex cap_value(std::size_t cap_index) const;
  // Pointwise evaluation (continuous kinds).
  Complex eval(double xi1, double xi2) const;
};

// Spatial samples of an extension field.
struct Field {
  std::vector<Point3> points;
  std::vector<Complex> values;
};

struct StepControl {
  bool auto_h = true;
  int log2_h = 0;  // h = 2^-log2_h when auto_h is false
};

// Smallest q such that h = 2^-q resolves the fastest oscillation over the
// points (h * rate <= 1/4) and divides both side lengths of Q.
int required_log2_h(const DRect& Q, const PhaseSpec& phase,
                    std::span<const Point3> points);

// Midpoint-rule approximation of the extension integral over Q. For a
// constant unimodular density the error obeys
//   |error| <= (pi^2/3) * (h * rate)^2 * area(Q),
// rate the per-axis oscillation rate |x_i| + |x3| max|phi_i'| that the
// precondition h * rate <= 1/4 controls. A too-coarse explicit h raises
// StepError carrying the required step.
Field evaluate_continuous(const DRect& Q, const DensitySpec& g,
                          const PhaseSpec& phase,
                          std::span<const Point3> points, StepControl step,
                          int workers = 1);

// Same quadrature with explicit per-axis node counts (matched-grid tests).
Field evaluate_continuous_n(const DRect& Q,
                            const std::function<Complex(double, double)>& g,
                            const PhaseSpec& phase,
                            std::span<const Point3> points, std::int64_t n1,
                            std::int64_t n2, int workers = 1);

// Exact finite exponential sum over the comb atoms; no quadrature error.
Field evaluate_expsum(const LatticeComb& comb, const PhaseSpec& phase,
                      std::span<const Point3> points, int workers = 1);

// Exact sum over an explicit atom list.
Field evaluate_atoms(const kernels::AtomSoA& atoms,
                     std::span<const Point3> points, int workers = 1);

// Midpoint nodes of I with weights h, lifted through the axis polynomial.
kernels::AtomSoA make_interval_atoms(const DInterval& I, const DyadicPoly& phi,
                                     std::int64_t n);

// Number of solutions of n1+n2=n3+n4, m1+m2=m3+m4,
// n1^4+n2^4+m1^4+m2^4 = n3^4+n4^4+m3^4+m4^4 over [0,N)^8, by hashing
// pair-sum triples. N <= 64.
std::uint64_t oracle_l4_count(int N);

// Same count by full 8-tuple enumeration; N <= 6.
std::uint64_t oracle_l4_count_bruteforce(int N);

// Midpoint period average (1/|box|) * integral of |S|^4 over
// [0,N]^2 x [0,N^4] on a P1 x P2 x P3 grid, S the a=1 comb sum. Equals the
// solution count once the grid resolves every frequency difference.
double oracle_l4_period_average(int N, int P1, int P2, int P3,
                                int workers = 1);

void field_to_csv(const Field& f, std::ostream& out);

}  // namespace declab
