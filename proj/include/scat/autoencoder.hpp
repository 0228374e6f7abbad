#pragma once

// Single-hidden-layer autoencoder with tied weights:
//   z  = tanh(W x + b)
//   ẑ  = competition(z)
//   x̂  = sigmoid(Wᵀ ẑ + c)
// trained on summed binary cross-entropy. T is float for training and double
// for gradient checking.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "scat/competition.hpp"
#include "scat/corpus.hpp"

namespace scat::nn {

using corpus::SparseRow;

template <class T>
struct ModelParams {
  std::size_t h = 0;
  std::size_t v = 0;
  std::vector<T> W;  // h x v, row-major; the decoder uses its transpose
  std::vector<T> b;  // h
  std::vector<T> c;  // v
  Variant variant = Variant::scat;
  std::size_t k = 1;
  double alpha = 1.0;

  static ModelParams zeros(std::size_t h, std::size_t v, Variant variant, std::size_t k, double alpha);

  std::span<T> row(std::size_t j) { return {W.data() + j * v, v}; }
  std::span<const T> row(std::size_t j) const { return {W.data() + j * v, v}; }

  /// Throws ValidationError when shapes, k or alpha are invalid, NumericError
  /// when an entry is not finite.
  void validate() const;

  template <class U>
  ModelParams<U> cast() const {
    ModelParams<U> out{h, v, {W.begin(), W.end()}, {b.begin(), b.end()}, {c.begin(), c.end()},
                       variant, k, alpha};
    return out;
  }

  bool operator==(const ModelParams&) const = default;
};

/// Uniform in ±sqrt(6 / (h + v)) for W, zero biases.
template <class T>
ModelParams<T> init_params(std::size_t h, std::size_t v, Variant variant, std::size_t k, double alpha,
                           std::uint64_t seed);

enum class Mode { train, infer };

template <class T>
struct ForwardTrace {
  SparseRow x;
  std::vector<T> z;     // after tanh
  std::vector<T> zhat;  // after competition
  std::vector<T> xhat;
  std::optional<CompetitionOutcome> outcome;
  double loss = 0.0;
};

template <class T>
struct Gradients {
  std::vector<T> dW;
  std::vector<T> db;
  std::vector<T> dc;
  double loss = 0.0;

  static Gradients zeros(std::size_t h, std::size_t v);
  void clear();
  void add(const Gradients& other);
  bool all_finite() const;
};

template <class T>
void encode_preact(const SparseRow& x, const ModelParams<T>& p, std::span<T> z);
template <class T>
std::vector<T> encode_preact(const SparseRow& x, const ModelParams<T>& p);

/// Applies the model's competitive layer. Returns nullopt when competition is
/// off (variant none, or inference without competition_at_inference).
template <class T>
std::optional<CompetitionOutcome> compete(const ModelParams<T>& p, std::span<const T> z, std::span<T> zhat,
                                          Mode mode, bool competition_at_inference);

template <class T>
void decode(std::span<const T> zhat, const ModelParams<T>& p, std::span<T> xhat);
template <class T>
std::vector<T> decode(const std::vector<T>& zhat, const ModelParams<T>& p);

inline constexpr double kCrossEntropyClamp = 1e-7;

/// Summed binary cross-entropy over all v dimensions (absent entries are 0).
template <class T>
double cross_entropy(const SparseRow& x, std::span<const T> xhat);

template <class T>
ForwardTrace<T> forward(const SparseRow& x, const ModelParams<T>& p, Mode mode,
                        bool competition_at_inference = false);

/// Forward pass with a fixed competition partition and energy, taken from a
/// previous forward on the same input. Used by the frozen gradient check.
template <class T>
ForwardTrace<T> forward_frozen(const SparseRow& x, const ModelParams<T>& p, const CompetitionOutcome& frozen);

/// Adds this sample's gradient and loss to `acc`.
template <class T>
void backward_accumulate(const ForwardTrace<T>& trace, const ModelParams<T>& p, Gradients<T>& acc);

template <class T>
Gradients<T> backward(const ForwardTrace<T>& trace, const ModelParams<T>& p);

}  // namespace scat::nn
