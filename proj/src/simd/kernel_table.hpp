#pragma once

#include <cstddef>
#include <cstdint>

#include "scat/simd.hpp"

namespace scat::simd::detail {

template <class T>
struct KernelTable {
  void (*axpy)(T, const T*, T*, std::size_t);
  T (*dot)(const T*, const T*, std::size_t);
  T (*sparse_dot)(const T*, const std::uint32_t*, const float*, std::size_t);
  void (*adam_update)(T*, const T*, T*, T*, std::size_t, const AdamCoeffs<T>&);
  void (*momentum_update)(T*, const T*, T*, std::size_t, T, T, T);
};

KernelTable<float> scalar_table_f32();
KernelTable<double> scalar_table_f64();

#if defined(SCAT_HAVE_AVX2)
KernelTable<float> avx2_table_f32();
KernelTable<double> avx2_table_f64();
#endif

#if defined(SCAT_HAVE_NEON)
KernelTable<float> neon_table_f32();
KernelTable<double> neon_table_f64();
#endif

}  // namespace scat::simd::detail
