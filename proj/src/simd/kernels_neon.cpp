// NEON kernels for aarch64, where Advanced SIMD (including float64x2) is part
// of the baseline ISA. There is no gather instruction, so sparse_dot stays on
// the scalar path.

#include <arm_neon.h>

#include "simd/kernel_table.hpp"

namespace scat::simd::detail {
namespace {

void axpy_f32(float a, const float* x, float* y, std::size_t n) {
  const float32x4_t va = vdupq_n_f32(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) vst1q_f32(y + i, vfmaq_f32(vld1q_f32(y + i), va, vld1q_f32(x + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

float dot_f32(const float* a, const float* b, std::size_t n) {
  float32x4_t acc0 = vdupq_n_f32(0.0f), acc1 = vdupq_n_f32(0.0f);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = vfmaq_f32(acc0, vld1q_f32(a + i), vld1q_f32(b + i));
    acc1 = vfmaq_f32(acc1, vld1q_f32(a + i + 4), vld1q_f32(b + i + 4));
  }
  for (; i + 4 <= n; i += 4) acc0 = vfmaq_f32(acc0, vld1q_f32(a + i), vld1q_f32(b + i));
  float acc = vaddvq_f32(vaddq_f32(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void adam_f32(float* p, const float* g, float* m, float* v, std::size_t n,
              const AdamCoeffs<float>& c) {
  const float32x4_t b1 = vdupq_n_f32(c.beta1), b2 = vdupq_n_f32(c.beta2);
  const float32x4_t omb1 = vdupq_n_f32(1.0f - c.beta1), omb2 = vdupq_n_f32(1.0f - c.beta2);
  const float32x4_t bc1 = vdupq_n_f32(c.bias1), bc2 = vdupq_n_f32(c.bias2);
  const float32x4_t lr = vdupq_n_f32(c.lr), eps = vdupq_n_f32(c.eps), gs = vdupq_n_f32(c.grad_scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float32x4_t gi = vmulq_f32(vld1q_f32(g + i), gs);
    const float32x4_t mi = vaddq_f32(vmulq_f32(b1, vld1q_f32(m + i)), vmulq_f32(omb1, gi));
    const float32x4_t vi = vaddq_f32(vmulq_f32(b2, vld1q_f32(v + i)), vmulq_f32(vmulq_f32(omb2, gi), gi));
    vst1q_f32(m + i, mi);
    vst1q_f32(v + i, vi);
    const float32x4_t step = vdivq_f32(vmulq_f32(lr, vdivq_f32(mi, bc1)),
                                       vaddq_f32(vsqrtq_f32(vdivq_f32(vi, bc2)), eps));
    vst1q_f32(p + i, vsubq_f32(vld1q_f32(p + i), step));
  }
  if (i < n) scalar::adam_update<float>(p + i, g + i, m + i, v + i, n - i, c);
}

void momentum_f32(float* p, const float* g, float* vel, std::size_t n, float lr, float mu, float gs) {
  const float32x4_t vmu = vdupq_n_f32(mu), vlr = vdupq_n_f32(lr), vgs = vdupq_n_f32(gs);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float32x4_t ve = vaddq_f32(vmulq_f32(vmu, vld1q_f32(vel + i)), vmulq_f32(vgs, vld1q_f32(g + i)));
    vst1q_f32(vel + i, ve);
    vst1q_f32(p + i, vsubq_f32(vld1q_f32(p + i), vmulq_f32(vlr, ve)));
  }
  if (i < n) scalar::momentum_update<float>(p + i, g + i, vel + i, n - i, lr, mu, gs);
}

void axpy_f64(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

double dot_f64(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0), acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  for (; i + 2 <= n; i += 2) acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void adam_f64(double* p, const double* g, double* m, double* v, std::size_t n,
              const AdamCoeffs<double>& c) {
  const float64x2_t b1 = vdupq_n_f64(c.beta1), b2 = vdupq_n_f64(c.beta2);
  const float64x2_t omb1 = vdupq_n_f64(1.0 - c.beta1), omb2 = vdupq_n_f64(1.0 - c.beta2);
  const float64x2_t bc1 = vdupq_n_f64(c.bias1), bc2 = vdupq_n_f64(c.bias2);
  const float64x2_t lr = vdupq_n_f64(c.lr), eps = vdupq_n_f64(c.eps), gs = vdupq_n_f64(c.grad_scale);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t gi = vmulq_f64(vld1q_f64(g + i), gs);
    const float64x2_t mi = vaddq_f64(vmulq_f64(b1, vld1q_f64(m + i)), vmulq_f64(omb1, gi));
    const float64x2_t vi = vaddq_f64(vmulq_f64(b2, vld1q_f64(v + i)), vmulq_f64(vmulq_f64(omb2, gi), gi));
    vst1q_f64(m + i, mi);
    vst1q_f64(v + i, vi);
    const float64x2_t step = vdivq_f64(vmulq_f64(lr, vdivq_f64(mi, bc1)),
                                       vaddq_f64(vsqrtq_f64(vdivq_f64(vi, bc2)), eps));
    vst1q_f64(p + i, vsubq_f64(vld1q_f64(p + i), step));
  }
  if (i < n) scalar::adam_update<double>(p + i, g + i, m + i, v + i, n - i, c);
}

void momentum_f64(double* p, const double* g, double* vel, std::size_t n, double lr, double mu,
                  double gs) {
  const float64x2_t vmu = vdupq_n_f64(mu), vlr = vdupq_n_f64(lr), vgs = vdupq_n_f64(gs);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t ve = vaddq_f64(vmulq_f64(vmu, vld1q_f64(vel + i)), vmulq_f64(vgs, vld1q_f64(g + i)));
    vst1q_f64(vel + i, ve);
    vst1q_f64(p + i, vsubq_f64(vld1q_f64(p + i), vmulq_f64(vlr, ve)));
  }
  if (i < n) scalar::momentum_update<double>(p + i, g + i, vel + i, n - i, lr, mu, gs);
}

}  // namespace

KernelTable<float> neon_table_f32() {
  return {&axpy_f32, &dot_f32, &scalar::sparse_dot<float>, &adam_f32, &momentum_f32};
}

KernelTable<double> neon_table_f64() {
  return {&axpy_f64, &dot_f64, &scalar::sparse_dot<double>, &adam_f64, &momentum_f64};
}

}  // namespace scat::simd::detail
