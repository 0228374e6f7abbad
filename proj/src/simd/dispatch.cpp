#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <type_traits>

#include "scat/error.hpp"
#include "simd/kernel_table.hpp"

namespace scat::simd {
namespace {

Backend best_backend() noexcept {
  if (backend_supported(Backend::avx2)) return Backend::avx2;
  if (backend_supported(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

Backend initial_backend() noexcept {
  if (const char* env = std::getenv("SCAT_SIMD")) {
    const std::string want(env);
    for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon}) {
      if (want == backend_name(b) && backend_supported(b)) return b;
    }
  }
  return best_backend();
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> b{initial_backend()};
  return b;
}

template <class T>
detail::KernelTable<T> make_table(Backend b) {
  if constexpr (std::is_same_v<T, float>) {
#if defined(SCAT_HAVE_AVX2)
    if (b == Backend::avx2) return detail::avx2_table_f32();
#endif
#if defined(SCAT_HAVE_NEON)
    if (b == Backend::neon) return detail::neon_table_f32();
#endif
    (void)b;
    return detail::scalar_table_f32();
  } else {
#if defined(SCAT_HAVE_AVX2)
    if (b == Backend::avx2) return detail::avx2_table_f64();
#endif
#if defined(SCAT_HAVE_NEON)
    if (b == Backend::neon) return detail::neon_table_f64();
#endif
    (void)b;
    return detail::scalar_table_f64();
  }
}

template <class T>
const detail::KernelTable<T>& table() {
  static const detail::KernelTable<T> tables[3] = {
      make_table<T>(Backend::scalar), make_table<T>(Backend::avx2), make_table<T>(Backend::neon)};
  return tables[static_cast<int>(current().load(std::memory_order_relaxed))];
}

}  // namespace

std::string_view backend_name(Backend b) noexcept {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "unknown";
}

bool backend_supported(Backend b) noexcept {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(SCAT_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::neon:
#if defined(SCAT_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Backend active_backend() noexcept { return current().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (!backend_supported(b)) {
    throw ValidationError("SIMD backend '" + std::string(backend_name(b)) + "' is not available");
  }
  current().store(b, std::memory_order_relaxed);
}

namespace {
void same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw ValidationError(std::string(what) + ": length mismatch");
}
}  // namespace

template <class T>
void axpy(T a, std::span<const T> x, std::span<T> y) {
  same_length(x.size(), y.size(), "axpy");
  table<T>().axpy(a, x.data(), y.data(), x.size());
}

template <class T>
T dot(std::span<const T> a, std::span<const T> b) {
  same_length(a.size(), b.size(), "dot");
  return table<T>().dot(a.data(), b.data(), a.size());
}

// Indices are trusted to lie inside `dense`; callers validate rows up front.
template <class T>
T sparse_dot(std::span<const T> dense, std::span<const std::uint32_t> idx, std::span<const float> val) {
  same_length(idx.size(), val.size(), "sparse_dot");
  return table<T>().sparse_dot(dense.data(), idx.data(), val.data(), idx.size());
}

template <class T>
void adam_update(std::span<T> param, std::span<const T> grad, std::span<T> m, std::span<T> v,
                 const AdamCoeffs<T>& c) {
  same_length(param.size(), grad.size(), "adam_update");
  same_length(param.size(), m.size(), "adam_update");
  same_length(param.size(), v.size(), "adam_update");
  table<T>().adam_update(param.data(), grad.data(), m.data(), v.data(), param.size(), c);
}

template <class T>
void momentum_update(std::span<T> param, std::span<const T> grad, std::span<T> vel, T lr, T mu,
                     T grad_scale) {
  same_length(param.size(), grad.size(), "momentum_update");
  same_length(param.size(), vel.size(), "momentum_update");
  table<T>().momentum_update(param.data(), grad.data(), vel.data(), param.size(), lr, mu, grad_scale);
}

#define SCAT_INSTANTIATE(T)                                                                        \
  template void axpy<T>(T, std::span<const T>, std::span<T>);                                      \
  template T dot<T>(std::span<const T>, std::span<const T>);                                       \
  template T sparse_dot<T>(std::span<const T>, std::span<const std::uint32_t>,                     \
                           std::span<const float>);                                                \
  template void adam_update<T>(std::span<T>, std::span<const T>, std::span<T>, std::span<T>,       \
                               const AdamCoeffs<T>&);                                              \
  template void momentum_update<T>(std::span<T>, std::span<const T>, std::span<T>, T, T, T);

SCAT_INSTANTIATE(float)
SCAT_INSTANTIATE(double)
#undef SCAT_INSTANTIATE

}  // namespace scat::simd
