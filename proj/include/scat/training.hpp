#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "scat/autoencoder.hpp"
#include "scat/corpus.hpp"

namespace scat::train {

enum class OptimizerKind { adam, sgd_momentum };

std::string_view to_string(OptimizerKind k) noexcept;
OptimizerKind optimizer_from_string(std::string_view s);

struct TrainConfig {
  std::size_t epochs = 50;
  std::size_t batch_size = 100;
  OptimizerKind optimizer = OptimizerKind::adam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  double momentum = 0.9;
  std::uint64_t seed = 0;
  bool shuffle = true;
  std::optional<std::size_t> early_stop_patience = 5;
  double validation_fraction = 0.1;
  bool deterministic = false;
  std::size_t threads = 0;  // 0: hardware concurrency; forced to 1 when deterministic

  void validate() const;
};

struct TrainReport {
  double initial_train_loss = 0.0;       // mean per document, before the first update
  std::vector<double> train_loss;        // per epoch, mean per document
  std::vector<double> validation_loss;   // per epoch; empty without a validation split
  std::size_t epochs_run = 0;
  std::size_t best_epoch = 0;            // 1-based; epoch whose parameters were kept
  double wall_seconds = 0.0;
  std::uint64_t params_checksum = 0;
};

template <class T>
class Optimizer {
 public:
  Optimizer(const TrainConfig& cfg, const nn::ModelParams<T>& params);

  /// Applies one update using grads * grad_scale. Throws NumericError if the
  /// gradient or the updated parameters are not finite.
  void step(nn::ModelParams<T>& params, const nn::Gradients<T>& grads, T grad_scale = T(1));

  std::size_t steps() const noexcept { return steps_; }

 private:
  OptimizerKind kind_;
  T lr_;
  T beta1_;
  T beta2_;
  T eps_;
  T momentum_;
  std::size_t steps_ = 0;
  // Adam first moments or momentum velocity.
  std::vector<T> m_W_, m_b_, m_c_;
  // Adam second moments.
  std::vector<T> v_W_, v_b_, v_c_;
};

struct FitResult {
  nn::ModelParams<float> params;
  TrainReport report;
};

/// Minibatch training. `log`, when given, receives one
/// "epoch<TAB>train_loss<TAB>val_loss" line per epoch.
FitResult fit(const corpus::DocMatrix& data, nn::ModelParams<float> params, const TrainConfig& cfg,
              std::ostream* log = nullptr);

/// Mean per-document loss with the training-mode forward pass.
double mean_loss(const corpus::DocMatrix& data, const nn::ModelParams<float>& params);

std::uint64_t checksum(const nn::ModelParams<float>& params);

enum class GradCheckMode { full, frozen_competition };

/// Central finite differences over every entry of W, b and c. Returns the
/// largest |analytic - numeric| / max(|analytic|, |numeric|, 1e-12).
double grad_check(const nn::ModelParams<double>& params, const corpus::SparseRow& x, GradCheckMode mode,
                  double eps);

/// A random small model (all parameters random, including biases) and a random
/// input row whose largest weight is 1, for gradient checking.
struct GradCheckProblem {
  nn::ModelParams<double> params;
  corpus::SparseRow x;
};

GradCheckProblem make_grad_check_problem(std::size_t v, std::size_t h, nn::Variant variant, std::size_t k,
                                         double alpha, std::uint64_t seed);

GradCheckMode default_grad_check_mode(nn::Variant variant) noexcept;

/// ceil(num_topics / 2).
std::size_t default_k(std::size_t num_topics);

}  // namespace scat::train
