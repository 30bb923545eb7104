#pragma once

#include <cstddef>

namespace declab::kernels {

// sin/cos of 2*pi*t ("turns"). Every oscillatory factor in this project is
// e(t) = exp(2*pi*i*t), so working in turns makes argument reduction exact:
// u = t - nearbyint(t) and the octant shift u - q/4 lose no bits. The scalar
// and AVX2 paths run the identical reduction + Horner sequence (explicit FMA)
// and therefore return bit-identical results.

struct SinCos {
  double s, c;
};

// Scalar reference.
SinCos sincos_turns(double t) noexcept;

enum class Backend { Scalar, Avx2 };

// Backend picked at startup from CPU features; override via set_backend.
Backend active_backend() noexcept;
bool backend_supported(Backend b) noexcept;
// Returns false (and leaves the state alone) if the backend is unsupported.
bool set_backend(Backend b) noexcept;
const char* backend_name(Backend b) noexcept;

// Batched sin/cos through the active backend.
void sincos_turns_batch(const double* t, double* s, double* c, std::size_t n);

// Internal entry points (exposed for equivalence tests).
void sincos_turns_batch_scalar(const double* t, double* s, double* c,
                               std::size_t n);
#if defined(__x86_64__) || defined(__i386__)
void sincos_turns_batch_avx2(const double* t, double* s, double* c,
                             std::size_t n);
#endif

}  // namespace declab::kernels
