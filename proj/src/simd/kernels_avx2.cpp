// AVX2 + FMA kernels. This translation unit is built with -mavx2 -mfma and is
// only entered after the dispatcher has confirmed both features at runtime.

#include <immintrin.h>

#include <cmath>

#include "simd/kernel_table.hpp"

namespace scat::simd::detail {
namespace {

inline float hsum(__m256 v) {
  __m128 lo = _mm256_castps256_ps128(v);
  __m128 hi = _mm256_extractf128_ps(v, 1);
  lo = _mm_add_ps(lo, hi);
  __m128 shuf = _mm_movehdup_ps(lo);
  __m128 sums = _mm_add_ps(lo, shuf);
  shuf = _mm_movehl_ps(shuf, sums);
  sums = _mm_add_ss(sums, shuf);
  return _mm_cvtss_f32(sums);
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d high64 = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, high64));
}

// ---- float ---------------------------------------------------------------

void axpy_f32(float a, const float* x, float* y, std::size_t n) {
  const __m256 va = _mm256_set1_ps(a);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(y + i, _mm256_fmadd_ps(va, _mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

float dot_f32(const float* a, const float* b, std::size_t n) {
  __m256 acc0 = _mm256_setzero_ps();
  __m256 acc1 = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
    acc1 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i + 8), _mm256_loadu_ps(b + i + 8), acc1);
  }
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
  }
  float acc = hsum(_mm256_add_ps(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

float sparse_dot_f32(const float* dense, const std::uint32_t* idx, const float* val, std::size_t n) {
  __m256 acc = _mm256_setzero_ps();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    const __m256i vi = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(idx + k));
    const __m256 g = _mm256_i32gather_ps(dense, vi, 4);
    acc = _mm256_fmadd_ps(g, _mm256_loadu_ps(val + k), acc);
  }
  float out = hsum(acc);
  for (; k < n; ++k) out += dense[idx[k]] * val[k];
  return out;
}

void adam_f32(float* p, const float* g, float* m, float* v, std::size_t n,
              const AdamCoeffs<float>& c) {
  const __m256 b1 = _mm256_set1_ps(c.beta1), b2 = _mm256_set1_ps(c.beta2);
  const __m256 omb1 = _mm256_set1_ps(1.0f - c.beta1), omb2 = _mm256_set1_ps(1.0f - c.beta2);
  const __m256 bc1 = _mm256_set1_ps(c.bias1), bc2 = _mm256_set1_ps(c.bias2);
  const __m256 lr = _mm256_set1_ps(c.lr), eps = _mm256_set1_ps(c.eps);
  const __m256 gs = _mm256_set1_ps(c.grad_scale);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 gi = _mm256_mul_ps(_mm256_loadu_ps(g + i), gs);
    const __m256 mi = _mm256_add_ps(_mm256_mul_ps(b1, _mm256_loadu_ps(m + i)), _mm256_mul_ps(omb1, gi));
    const __m256 vi = _mm256_add_ps(_mm256_mul_ps(b2, _mm256_loadu_ps(v + i)),
                                    _mm256_mul_ps(_mm256_mul_ps(omb2, gi), gi));
    _mm256_storeu_ps(m + i, mi);
    _mm256_storeu_ps(v + i, vi);
    const __m256 mhat = _mm256_div_ps(mi, bc1);
    const __m256 vhat = _mm256_div_ps(vi, bc2);
    const __m256 step = _mm256_div_ps(_mm256_mul_ps(lr, mhat), _mm256_add_ps(_mm256_sqrt_ps(vhat), eps));
    _mm256_storeu_ps(p + i, _mm256_sub_ps(_mm256_loadu_ps(p + i), step));
  }
  if (i < n) scalar::adam_update<float>(p + i, g + i, m + i, v + i, n - i, c);
}

void momentum_f32(float* p, const float* g, float* vel, std::size_t n, float lr, float mu, float gs) {
  const __m256 vmu = _mm256_set1_ps(mu), vlr = _mm256_set1_ps(lr), vgs = _mm256_set1_ps(gs);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 ve = _mm256_add_ps(_mm256_mul_ps(vmu, _mm256_loadu_ps(vel + i)),
                                    _mm256_mul_ps(vgs, _mm256_loadu_ps(g + i)));
    _mm256_storeu_ps(vel + i, ve);
    _mm256_storeu_ps(p + i, _mm256_sub_ps(_mm256_loadu_ps(p + i), _mm256_mul_ps(vlr, ve)));
  }
  if (i < n) scalar::momentum_update<float>(p + i, g + i, vel + i, n - i, lr, mu, gs);
}

// ---- double --------------------------------------------------------------

void axpy_f64(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

double dot_f64(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sparse_dot_f64(const double* dense, const std::uint32_t* idx, const float* val, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m128i vi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + k));
    const __m256d g = _mm256_i32gather_pd(dense, vi, 8);
    acc = _mm256_fmadd_pd(g, _mm256_cvtps_pd(_mm_loadu_ps(val + k)), acc);
  }
  double out = hsum(acc);
  for (; k < n; ++k) out += dense[idx[k]] * static_cast<double>(val[k]);
  return out;
}

void adam_f64(double* p, const double* g, double* m, double* v, std::size_t n,
              const AdamCoeffs<double>& c) {
  const __m256d b1 = _mm256_set1_pd(c.beta1), b2 = _mm256_set1_pd(c.beta2);
  const __m256d omb1 = _mm256_set1_pd(1.0 - c.beta1), omb2 = _mm256_set1_pd(1.0 - c.beta2);
  const __m256d bc1 = _mm256_set1_pd(c.bias1), bc2 = _mm256_set1_pd(c.bias2);
  const __m256d lr = _mm256_set1_pd(c.lr), eps = _mm256_set1_pd(c.eps);
  const __m256d gs = _mm256_set1_pd(c.grad_scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d gi = _mm256_mul_pd(_mm256_loadu_pd(g + i), gs);
    const __m256d mi = _mm256_add_pd(_mm256_mul_pd(b1, _mm256_loadu_pd(m + i)), _mm256_mul_pd(omb1, gi));
    const __m256d vi = _mm256_add_pd(_mm256_mul_pd(b2, _mm256_loadu_pd(v + i)),
                                     _mm256_mul_pd(_mm256_mul_pd(omb2, gi), gi));
    _mm256_storeu_pd(m + i, mi);
    _mm256_storeu_pd(v + i, vi);
    const __m256d mhat = _mm256_div_pd(mi, bc1);
    const __m256d vhat = _mm256_div_pd(vi, bc2);
    const __m256d step = _mm256_div_pd(_mm256_mul_pd(lr, mhat), _mm256_add_pd(_mm256_sqrt_pd(vhat), eps));
    _mm256_storeu_pd(p + i, _mm256_sub_pd(_mm256_loadu_pd(p + i), step));
  }
  if (i < n) scalar::adam_update<double>(p + i, g + i, m + i, v + i, n - i, c);
}

void momentum_f64(double* p, const double* g, double* vel, std::size_t n, double lr, double mu,
                  double gs) {
  const __m256d vmu = _mm256_set1_pd(mu), vlr = _mm256_set1_pd(lr), vgs = _mm256_set1_pd(gs);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ve = _mm256_add_pd(_mm256_mul_pd(vmu, _mm256_loadu_pd(vel + i)),
                                     _mm256_mul_pd(vgs, _mm256_loadu_pd(g + i)));
    _mm256_storeu_pd(vel + i, ve);
    _mm256_storeu_pd(p + i, _mm256_sub_pd(_mm256_loadu_pd(p + i), _mm256_mul_pd(vlr, ve)));
  }
  if (i < n) scalar::momentum_update<double>(p + i, g + i, vel + i, n - i, lr, mu, gs);
}

}  // namespace

KernelTable<float> avx2_table_f32() {
  return {&axpy_f32, &dot_f32, &sparse_dot_f32, &adam_f32, &momentum_f32};
}

KernelTable<double> avx2_table_f64() {
  return {&axpy_f64, &dot_f64, &sparse_dot_f64, &adam_f64, &momentum_f64};
}

}  // namespace scat::simd::detail
