#include "declab/kernels/sincos.hpp"

namespace declab::kernels {

namespace {

bool detect_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend& backend_state() {
  static Backend b = detect_avx2() ? Backend::Avx2 : Backend::Scalar;
  return b;
}

}  // namespace

Backend active_backend() noexcept { return backend_state(); }

bool backend_supported(Backend b) noexcept {
  if (b == Backend::Scalar) return true;
  return detect_avx2();
}

bool set_backend(Backend b) noexcept {
  if (!backend_supported(b)) return false;
  backend_state() = b;
  return true;
}

const char* backend_name(Backend b) noexcept {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

void sincos_turns_batch(const double* t, double* s, double* c, std::size_t n) {
#if defined(__x86_64__) || defined(__i386__)
  if (backend_state() == Backend::Avx2) {
    sincos_turns_batch_avx2(t, s, c, n);
    return;
  }
#endif
  sincos_turns_batch_scalar(t, s, c, n);
}

}  // namespace declab::kernels
