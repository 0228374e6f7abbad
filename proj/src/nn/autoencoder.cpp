#include "scat/autoencoder.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "scat/error.hpp"
#include "scat/simd.hpp"

namespace scat::nn {

template <class T>
ModelParams<T> ModelParams<T>::zeros(std::size_t h, std::size_t v, Variant variant, std::size_t k,
                                     double alpha) {
  ModelParams p;
  p.h = h;
  p.v = v;
  p.W.assign(h * v, T(0));
  p.b.assign(h, T(0));
  p.c.assign(v, T(0));
  p.variant = variant;
  p.k = k;
  p.alpha = alpha;
  return p;
}

template <class T>
void ModelParams<T>::validate() const {
  if (h < 1 || v < 1) throw ValidationError("model: h and v must be >= 1");
  if (W.size() != h * v || b.size() != h || c.size() != v) {
    throw ValidationError("model: parameter shapes do not match h=" + std::to_string(h) +
                          ", v=" + std::to_string(v));
  }
  if (variant != Variant::none && (k < 1 || k > h)) {
    throw ValidationError("model: k=" + std::to_string(k) + " outside [1, " + std::to_string(h) + "]");
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ValidationError("model: alpha must be finite and > 0");
  auto finite = [](const std::vector<T>& xs) {
    return std::all_of(xs.begin(), xs.end(), [](T x) { return std::isfinite(x); });
  };
  if (!finite(W) || !finite(b) || !finite(c)) throw NumericError("model: non-finite parameter");
}

template <class T>
ModelParams<T> init_params(std::size_t h, std::size_t v, Variant variant, std::size_t k, double alpha,
                           std::uint64_t seed) {
  auto p = ModelParams<T>::zeros(h, v, variant, k, alpha);
  const double limit = std::sqrt(6.0 / static_cast<double>(h + v));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (auto& w : p.W) w = static_cast<T>(dist(rng));
  p.validate();
  return p;
}

template <class T>
Gradients<T> Gradients<T>::zeros(std::size_t h, std::size_t v) {
  Gradients g;
  g.dW.assign(h * v, T(0));
  g.db.assign(h, T(0));
  g.dc.assign(v, T(0));
  return g;
}

template <class T>
void Gradients<T>::clear() {
  std::fill(dW.begin(), dW.end(), T(0));
  std::fill(db.begin(), db.end(), T(0));
  std::fill(dc.begin(), dc.end(), T(0));
  loss = 0.0;
}

template <class T>
void Gradients<T>::add(const Gradients& o) {
  simd::axpy<T>(T(1), o.dW, dW);
  simd::axpy<T>(T(1), o.db, db);
  simd::axpy<T>(T(1), o.dc, dc);
  loss += o.loss;
}

template <class T>
bool Gradients<T>::all_finite() const {
  auto finite = [](const std::vector<T>& xs) {
    return std::all_of(xs.begin(), xs.end(), [](T x) { return std::isfinite(x); });
  };
  return std::isfinite(loss) && finite(dW) && finite(db) && finite(dc);
}

namespace {

template <class T>
void check_row(const SparseRow& x, std::size_t v) {
  if (x.index.size() != x.weight.size()) throw ValidationError("input row: index/weight length mismatch");
  if (!x.index.empty() && x.index.back() >= v) {
    throw ValidationError("input row: index " + std::to_string(x.index.back()) + " >= v=" + std::to_string(v));
  }
}

template <class T>
T sigmoid(T a) {
  return T(1) / (T(1) + std::exp(-a));
}

}  // namespace

template <class T>
void encode_preact(const SparseRow& x, const ModelParams<T>& p, std::span<T> z) {
  check_row<T>(x, p.v);
  if (z.size() != p.h) throw ValidationError("encode: output width does not match h");
  for (std::size_t j = 0; j < p.h; ++j) {
    z[j] = std::tanh(p.b[j] + simd::sparse_dot<T>(p.row(j), x.index, x.weight));
  }
}

template <class T>
std::vector<T> encode_preact(const SparseRow& x, const ModelParams<T>& p) {
  std::vector<T> z(p.h);
  encode_preact<T>(x, p, z);
  return z;
}

template <class T>
std::optional<CompetitionOutcome> compete(const ModelParams<T>& p, std::span<const T> z, std::span<T> zhat,
                                          Mode mode, bool competition_at_inference) {
  const bool active = p.variant != Variant::none && (mode == Mode::train || competition_at_inference);
  if (!active) {
    std::copy(z.begin(), z.end(), zhat.begin());
    return std::nullopt;
  }
  switch (p.variant) {
    case Variant::scat: return scat_layer<T>(p.k, z, zhat);
    case Variant::ksparse: return ksparse_layer<T>(p.k, z, zhat, mode == Mode::train, p.alpha);
    case Variant::kate: return kate_layer<T>(p.k, p.alpha, z, zhat);
    case Variant::none: break;
  }
  std::copy(z.begin(), z.end(), zhat.begin());
  return std::nullopt;
}

template <class T>
void decode(std::span<const T> zhat, const ModelParams<T>& p, std::span<T> xhat) {
  if (zhat.size() != p.h || xhat.size() != p.v) throw ValidationError("decode: shape mismatch");
  std::copy(p.c.begin(), p.c.end(), xhat.begin());
  for (std::size_t j = 0; j < p.h; ++j) {
    if (zhat[j] != T(0)) simd::axpy<T>(zhat[j], p.row(j), xhat);
  }
  for (auto& a : xhat) a = sigmoid(a);
}

template <class T>
std::vector<T> decode(const std::vector<T>& zhat, const ModelParams<T>& p) {
  std::vector<T> xhat(p.v);
  decode<T>(zhat, p, xhat);
  return xhat;
}

template <class T>
double cross_entropy(const SparseRow& x, std::span<const T> xhat) {
  if (!x.index.empty() && x.index.back() >= xhat.size()) {
    throw ValidationError("cross_entropy: input index outside reconstruction");
  }
  constexpr double lo = kCrossEntropyClamp;
  constexpr double hi = 1.0 - kCrossEntropyClamp;
  double loss = 0.0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < xhat.size(); ++i) {
    const double q = std::clamp(static_cast<double>(xhat[i]), lo, hi);
    double xi = 0.0;
    if (k < x.index.size() && x.index[k] == i) xi = x.weight[k++];
    loss -= xi * std::log(q) + (1.0 - xi) * std::log(1.0 - q);
  }
  return loss;
}

template <class T>
ForwardTrace<T> forward(const SparseRow& x, const ModelParams<T>& p, Mode mode, bool competition_at_inference) {
  ForwardTrace<T> t;
  t.x = x;
  t.z.resize(p.h);
  t.zhat.resize(p.h);
  t.xhat.resize(p.v);
  encode_preact<T>(x, p, t.z);
  t.outcome = compete<T>(p, t.z, t.zhat, mode, competition_at_inference);
  decode<T>(t.zhat, p, t.xhat);
  t.loss = cross_entropy<T>(x, t.xhat);
  return t;
}

template <class T>
ForwardTrace<T> forward_frozen(const SparseRow& x, const ModelParams<T>& p, const CompetitionOutcome& frozen) {
  ForwardTrace<T> t;
  t.x = x;
  t.z.resize(p.h);
  t.zhat.resize(p.h);
  t.xhat.resize(p.v);
  encode_preact<T>(x, p, t.z);
  apply_frozen<T>(t.z, frozen, t.zhat);
  t.outcome = frozen;
  decode<T>(t.zhat, p, t.xhat);
  t.loss = cross_entropy<T>(x, t.xhat);
  return t;
}

template <class T>
void backward_accumulate(const ForwardTrace<T>& t, const ModelParams<T>& p, Gradients<T>& acc) {
  if (t.z.size() != p.h || t.zhat.size() != p.h || t.xhat.size() != p.v) {
    throw ValidationError("backward: trace does not match model shape");
  }
  if (acc.dW.size() != p.W.size() || acc.db.size() != p.h || acc.dc.size() != p.v) {
    throw ValidationError("backward: gradient buffer does not match model shape");
  }

  // Output error of summed BCE through the sigmoid.
  std::vector<T> delta_out(t.xhat);
  for (std::size_t k = 0; k < t.x.index.size(); ++k) delta_out[t.x.index[k]] -= static_cast<T>(t.x.weight[k]);
  simd::axpy<T>(T(1), delta_out, acc.dc);

  std::vector<T> grad_zhat(p.h);
  for (std::size_t j = 0; j < p.h; ++j) grad_zhat[j] = simd::dot<T>(p.row(j), delta_out);

  std::vector<T> grad_z(p.h);
  if (t.outcome) {
    competition_backward<T>(grad_zhat, *t.outcome, grad_z);
  } else {
    grad_z = grad_zhat;
  }

  for (std::size_t j = 0; j < p.h; ++j) {
    const T delta_hid = grad_z[j] * (T(1) - t.z[j] * t.z[j]);
    acc.db[j] += delta_hid;
    auto dW_row = std::span<T>(acc.dW.data() + j * p.v, p.v);
    // Decoder role of the tied weight.
    if (t.zhat[j] != T(0)) simd::axpy<T>(t.zhat[j], delta_out, dW_row);
    // Encoder role.
    if (delta_hid != T(0)) {
      for (std::size_t k = 0; k < t.x.index.size(); ++k) {
        dW_row[t.x.index[k]] += delta_hid * static_cast<T>(t.x.weight[k]);
      }
    }
  }
  acc.loss += t.loss;
}

template <class T>
Gradients<T> backward(const ForwardTrace<T>& t, const ModelParams<T>& p) {
  auto g = Gradients<T>::zeros(p.h, p.v);
  backward_accumulate<T>(t, p, g);
  return g;
}

#define SCAT_INSTANTIATE(T)                                                                                \
  template struct ModelParams<T>;                                                                          \
  template struct Gradients<T>;                                                                            \
  template ModelParams<T> init_params<T>(std::size_t, std::size_t, Variant, std::size_t, double,          \
                                         std::uint64_t);                                                   \
  template void encode_preact<T>(const SparseRow&, const ModelParams<T>&, std::span<T>);                   \
  template std::vector<T> encode_preact<T>(const SparseRow&, const ModelParams<T>&);                       \
  template std::optional<CompetitionOutcome> compete<T>(const ModelParams<T>&, std::span<const T>,         \
                                                        std::span<T>, Mode, bool);                         \
  template void decode<T>(std::span<const T>, const ModelParams<T>&, std::span<T>);                        \
  template std::vector<T> decode<T>(const std::vector<T>&, const ModelParams<T>&);                         \
  template double cross_entropy<T>(const SparseRow&, std::span<const T>);                                  \
  template ForwardTrace<T> forward<T>(const SparseRow&, const ModelParams<T>&, Mode, bool);                \
  template ForwardTrace<T> forward_frozen<T>(const SparseRow&, const ModelParams<T>&,                      \
                                             const CompetitionOutcome&);                                   \
  template void backward_accumulate<T>(const ForwardTrace<T>&, const ModelParams<T>&, Gradients<T>&);      \
  template Gradients<T> backward<T>(const ForwardTrace<T>&, const ModelParams<T>&);

SCAT_INSTANTIATE(float)
SCAT_INSTANTIATE(double)
#undef SCAT_INSTANTIATE

}  // namespace scat::nn
