#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "scat/error.hpp"
#include "scat/simd.hpp"

using namespace scat::simd;

namespace {

// Restores the startup backend when a test switches it.
struct BackendGuard {
  Backend saved = active_backend();
  ~BackendGuard() { set_backend(saved); }
};

std::vector<Backend> supported() {
  std::vector<Backend> out;
  for (auto b : {Backend::scalar, Backend::avx2, Backend::neon})
    if (backend_supported(b)) out.push_back(b);
  return out;
}

template <class T>
std::vector<T> randv(std::size_t n, std::mt19937_64& rng, double lo = -1, double hi = 1) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<T> v(n);
  for (auto& x : v) x = static_cast<T>(u(rng));
  return v;
}

template <class T>
double tol() {
  return std::is_same_v<T, float> ? 1e-5 : 1e-12;
}

template <class T>
void check_close(const std::vector<T>& a, const std::vector<T>& b) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(std::abs(double(a[i]) - double(b[i])) <= tol<T>() * std::max(1.0, std::abs(double(a[i]))));
}

template <class T>
void equivalence(Backend backend) {
  BackendGuard guard;
  set_backend(backend);
  CHECK(active_backend() == backend);
  std::mt19937_64 rng(7);
  for (std::size_t n = 0; n <= 70; ++n) {
    INFO(backend_name(backend), " n=", n);
    const auto x = randv<T>(n, rng), y0 = randv<T>(n, rng);

    auto y_ref = y0, y = y0;
    scalar::axpy<T>(T(0.75), x.data(), y_ref.data(), n);
    axpy<T>(T(0.75), x, y);
    check_close(y_ref, y);

    const double d_ref = scalar::dot<T>(x.data(), y0.data(), n);
    const double d = dot<T>(x, y0);
    CHECK(std::abs(d - d_ref) <= tol<T>() * std::max(1.0, std::abs(d_ref)) * 4);

    std::vector<std::uint32_t> idx;
    std::vector<float> val;
    for (std::uint32_t i = 0; i < n; ++i)
      if (rng() % 3) idx.push_back(i), val.push_back(static_cast<float>(i % 7) / 7.0f);
    const double s_ref = scalar::sparse_dot<T>(x.data(), idx.data(), val.data(), idx.size());
    const double s = sparse_dot<T>(x, idx, val);
    CHECK(std::abs(s - s_ref) <= tol<T>() * std::max(1.0, std::abs(s_ref)) * 4);

    const AdamCoeffs<T> c{T(0.01), T(0.9), T(0.999), T(1e-8), T(0.271), T(0.00299), T(0.25)};
    auto p_ref = x, p = x;
    auto m_ref = randv<T>(n, rng), m = m_ref;
    auto v_ref = randv<T>(n, rng, 0, 1), v = v_ref;
    scalar::adam_update<T>(p_ref.data(), y0.data(), m_ref.data(), v_ref.data(), n, c);
    adam_update<T>(p, y0, m, v, c);
    check_close(p_ref, p);
    check_close(m_ref, m);
    check_close(v_ref, v);

    auto q_ref = x, q = x;
    auto vel_ref = randv<T>(n, rng), vel = vel_ref;
    scalar::momentum_update<T>(q_ref.data(), y0.data(), vel_ref.data(), n, T(0.1), T(0.9), T(0.5));
    momentum_update<T>(q, y0, vel, T(0.1), T(0.9), T(0.5));
    check_close(q_ref, q);
    check_close(vel_ref, vel);
  }
}

}  // namespace

TEST_CASE("scalar kernels on hand examples") {
  const std::vector<double> a{1, 2, 3}, b{4, -5, 6};
  CHECK(scalar::dot(a.data(), b.data(), 3) == 12.0);
  std::vector<double> y{1, 1, 1};
  scalar::axpy(2.0, a.data(), y.data(), 3);
  CHECK(y == std::vector<double>{3, 5, 7});
  const std::uint32_t idx[] = {0, 2};
  const float val[] = {0.5f, 2.0f};
  CHECK(scalar::sparse_dot(b.data(), idx, val, 2) == 14.0);
}

TEST_CASE("every supported backend matches the scalar kernels") {
  const auto backends = supported();
  CHECK(backends.front() == Backend::scalar);
  for (auto b : backends) {
    equivalence<float>(b);
    equivalence<double>(b);
  }
}

TEST_CASE("set_backend rejects unavailable backends") {
  BackendGuard guard;
  for (auto b : {Backend::avx2, Backend::neon}) {
    if (!backend_supported(b)) CHECK_THROWS_AS(set_backend(b), scat::ValidationError);
  }
  CHECK(backend_name(Backend::scalar) == "scalar");
}

TEST_CASE("span kernels check lengths") {
  std::vector<float> a(3), b(4);
  CHECK_THROWS_AS(axpy<float>(1.0f, a, b), scat::ValidationError);
  CHECK_THROWS_AS(dot<float>(a, b), scat::ValidationError);
}
