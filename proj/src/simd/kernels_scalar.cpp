#include <cmath>

#include "simd/kernel_table.hpp"

namespace scat::simd {
namespace scalar {

template <class T>
void axpy(T a, const T* x, T* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

template <class T>
T dot(const T* a, const T* b, std::size_t n) {
  T acc = 0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

template <class T>
T sparse_dot(const T* dense, const std::uint32_t* idx, const float* val, std::size_t n) {
  T acc = 0;
  for (std::size_t k = 0; k < n; ++k) acc += dense[idx[k]] * static_cast<T>(val[k]);
  return acc;
}

template <class T>
void adam_update(T* p, const T* g, T* m, T* v, std::size_t n, const AdamCoeffs<T>& c) {
  const T one = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const T gi = g[i] * c.grad_scale;
    m[i] = c.beta1 * m[i] + (one - c.beta1) * gi;
    v[i] = c.beta2 * v[i] + (one - c.beta2) * gi * gi;
    const T mhat = m[i] / c.bias1;
    const T vhat = v[i] / c.bias2;
    p[i] -= c.lr * mhat / (std::sqrt(vhat) + c.eps);
  }
}

template <class T>
void momentum_update(T* p, const T* g, T* vel, std::size_t n, T lr, T mu, T grad_scale) {
  for (std::size_t i = 0; i < n; ++i) {
    vel[i] = mu * vel[i] + grad_scale * g[i];
    p[i] -= lr * vel[i];
  }
}

#define SCAT_INSTANTIATE(T)                                                              \
  template void axpy<T>(T, const T*, T*, std::size_t);                                   \
  template T dot<T>(const T*, const T*, std::size_t);                                    \
  template T sparse_dot<T>(const T*, const std::uint32_t*, const float*, std::size_t);   \
  template void adam_update<T>(T*, const T*, T*, T*, std::size_t, const AdamCoeffs<T>&); \
  template void momentum_update<T>(T*, const T*, T*, std::size_t, T, T, T);

SCAT_INSTANTIATE(float)
SCAT_INSTANTIATE(double)
#undef SCAT_INSTANTIATE

}  // namespace scalar

namespace detail {

KernelTable<float> scalar_table_f32() {
  return {&scalar::axpy<float>, &scalar::dot<float>, &scalar::sparse_dot<float>,
          &scalar::adam_update<float>, &scalar::momentum_update<float>};
}

KernelTable<double> scalar_table_f64() {
  return {&scalar::axpy<double>, &scalar::dot<double>, &scalar::sparse_dot<double>,
          &scalar::adam_update<double>, &scalar::momentum_update<double>};
}

}  // namespace detail
}  // namespace scat::simd
