#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "declab/kernels/reduce.hpp"
#include "declab/kernels/sincos.hpp"

namespace declab::kernels {

// Frequency atoms in structure-of-arrays form. One atom j contributes
//   a_j * e(x1*xi1_j + x2*xi2_j + x3*phi_j)
// to the field at the spatial point (x1,x2,x3). Quadrature nodes (a_j =
// density * cell measure), lattice-comb atoms (a_j = coefficient) and 1D
// oscillatory integrals (xi2_j = 0) all evaluate through this one kernel.
struct AtomSoA {
  std::vector<double> xi1, xi2, phi;
  std::vector<double> are, aim;

  std::size_t size() const { return xi1.size(); }
  void reserve(std::size_t n);
  void push(double x1, double x2, double ph, std::complex<double> a);
};

// Scratch reused across points (phase/term buffers sized to the atom count).
struct AtomScratch {
  std::vector<double> t, s, c, term_re, term_im;
  void resize(std::size_t n);
};

// Writes the per-atom complex terms for one point into scratch.term_re/im.
// Dispatches to the AVX2 variant when active; both variants are bit-identical
// (same explicit-FMA formulas, same sincos kernel).
void atom_terms(const AtomSoA& atoms, double x1, double x2, double x3,
                AtomScratch& scratch);

void atom_terms_scalar(const AtomSoA& atoms, double x1, double x2, double x3,
                       AtomScratch& scratch);
#if defined(__x86_64__) || defined(__i386__)
void atom_terms_avx2(const AtomSoA& atoms, double x1, double x2, double x3,
                     AtomScratch& scratch);
#endif

// Field value at one point: deterministic pairwise reduction of the terms.
inline std::complex<double> atom_sum_point(const AtomSoA& atoms, double x1,
                                           double x2, double x3,
                                           AtomScratch& scratch) {
  if (atoms.size() == 0) return {0.0, 0.0};
  atom_terms(atoms, x1, x2, x3, scratch);
  return pairwise_sum_complex(
      std::span<const double>(scratch.term_re.data(), atoms.size()),
      std::span<const double>(scratch.term_im.data(), atoms.size()));
}

}  // namespace declab::kernels
