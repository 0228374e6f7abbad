#pragma once

// Dense inner-loop kernels with a scalar reference implementation and
// vectorized variants (AVX2+FMA on x86-64, NEON on aarch64). The backend is
// picked once at startup from CPU features; SCAT_SIMD=scalar|avx2|neon
// overrides it.

#include <cstdint>
#include <span>
#include <string_view>

namespace scat::simd {

enum class Backend { scalar, avx2, neon };

std::string_view backend_name(Backend b) noexcept;
bool backend_supported(Backend b) noexcept;
Backend active_backend() noexcept;
/// Throws scat::ValidationError if the backend is not available on this CPU/build.
void set_backend(Backend b);

template <class T>
struct AdamCoeffs {
  T lr;
  T beta1;
  T beta2;
  T eps;
  T bias1;  // 1 - beta1^t
  T bias2;  // 1 - beta2^t
  T grad_scale;  // applied to g before the moment updates (batch mean)
};

/// y += a * x
template <class T>
void axpy(T a, std::span<const T> x, std::span<T> y);

template <class T>
T dot(std::span<const T> a, std::span<const T> b);

/// sum_k dense[idx[k]] * val[k]
template <class T>
T sparse_dot(std::span<const T> dense, std::span<const std::uint32_t> idx,
             std::span<const float> val);

template <class T>
void adam_update(std::span<T> param, std::span<const T> grad, std::span<T> m,
                 std::span<T> v, const AdamCoeffs<T>& c);

/// vel = mu * vel + grad_scale * g;  param -= lr * vel
template <class T>
void momentum_update(std::span<T> param, std::span<const T> grad,
                     std::span<T> vel, T lr, T mu, T grad_scale);

/// Explicit per-backend entry points, used by the equivalence tests.
namespace scalar {
template <class T> void axpy(T a, const T* x, T* y, std::size_t n);
template <class T> T dot(const T* a, const T* b, std::size_t n);
template <class T> T sparse_dot(const T* dense, const std::uint32_t* idx,
                                const float* val, std::size_t n);
template <class T> void adam_update(T* p, const T* g, T* m, T* v, std::size_t n,
                                    const AdamCoeffs<T>& c);
template <class T> void momentum_update(T* p, const T* g, T* vel, std::size_t n,
                                        T lr, T mu, T grad_scale);
}  // namespace scalar

}  // namespace scat::simd
