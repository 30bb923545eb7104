#include <cmath>

#include "declab/kernels/atomsum.hpp"

namespace declab::kernels {

void AtomSoA::reserve(std::size_t n) {
  xi1.reserve(n);
  xi2.reserve(n);
  phi.reserve(n);
  are.reserve(n);
  aim.reserve(n);
}

void AtomSoA::push(double x1, double x2, double ph, std::complex<double> a) {
  xi1.push_back(x1);
  xi2.push_back(x2);
  phi.push_back(ph);
  are.push_back(a.real());
  aim.push_back(a.imag());
}

void AtomScratch::resize(std::size_t n) {
  if (t.size() < n) {
    t.resize(n);
    s.resize(n);
    c.resize(n);
    term_re.resize(n);
    term_im.resize(n);
  }
}

void atom_terms_scalar(const AtomSoA& atoms, double x1, double x2, double x3,
                       AtomScratch& scratch) {
  const std::size_t n = atoms.size();
  scratch.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    // t = x1*xi1 + (x2*xi2 + x3*phi), rounded exactly like the AVX2 fmadd
    // chain.
    scratch.t[j] = std::fma(atoms.xi1[j], x1,
                            std::fma(atoms.xi2[j], x2, atoms.phi[j] * x3));
  }
  sincos_turns_batch_scalar(scratch.t.data(), scratch.s.data(),
                            scratch.c.data(), n);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = scratch.s[j];
    const double c = scratch.c[j];
    // a * (c + i s): re = are*c - aim*s, im = are*s + aim*c.
    scratch.term_re[j] = std::fma(atoms.are[j], c, -(atoms.aim[j] * s));
    scratch.term_im[j] = std::fma(atoms.are[j], s, atoms.aim[j] * c);
  }
}

void atom_terms(const AtomSoA& atoms, double x1, double x2, double x3,
                AtomScratch& scratch) {
#if defined(__x86_64__) || defined(__i386__)
  if (active_backend() == Backend::Avx2) {
    atom_terms_avx2(atoms, x1, x2, x3, scratch);
    return;
  }
#endif
  atom_terms_scalar(atoms, x1, x2, x3, scratch);
}

}  // namespace declab::kernels
