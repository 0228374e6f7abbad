#include <algorithm>
#include <cmath>
#include <string>

#include "scat/error.hpp"
#include "scat/simd.hpp"
#include "scat/training.hpp"

namespace scat::train {

std::string_view to_string(OptimizerKind k) noexcept {
  return k == OptimizerKind::adam ? "adam" : "sgd_momentum";
}

OptimizerKind optimizer_from_string(std::string_view s) {
  if (s == "adam") return OptimizerKind::adam;
  if (s == "sgd_momentum" || s == "sgd") return OptimizerKind::sgd_momentum;
  throw ValidationError("unknown optimizer: " + std::string(s));
}

void TrainConfig::validate() const {
  if (epochs < 1) throw ValidationError("epochs must be >= 1");
  if (batch_size < 1) throw ValidationError("batch_size must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ValidationError("learning_rate must be > 0");
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
    throw ValidationError("validation_fraction must lie in [0, 1)");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ValidationError("adam betas must lie in [0, 1)");
  }
  if (!(momentum >= 0.0 && momentum < 1.0)) throw ValidationError("momentum must lie in [0, 1)");
}

template <class T>
Optimizer<T>::Optimizer(const TrainConfig& cfg, const nn::ModelParams<T>& p)
    : kind_(cfg.optimizer),
      lr_(static_cast<T>(cfg.learning_rate)),
      beta1_(static_cast<T>(cfg.beta1)),
      beta2_(static_cast<T>(cfg.beta2)),
      eps_(static_cast<T>(cfg.adam_eps)),
      momentum_(static_cast<T>(cfg.momentum)),
      m_W_(p.W.size(), T(0)),
      m_b_(p.b.size(), T(0)),
      m_c_(p.c.size(), T(0)) {
  if (kind_ == OptimizerKind::adam) {
    v_W_.assign(p.W.size(), T(0));
    v_b_.assign(p.b.size(), T(0));
    v_c_.assign(p.c.size(), T(0));
  }
}

template <class T>
void Optimizer<T>::step(nn::ModelParams<T>& p, const nn::Gradients<T>& g, T grad_scale) {
  if (g.dW.size() != p.W.size() || g.db.size() != p.b.size() || g.dc.size() != p.c.size()) {
    throw ValidationError("optimizer: gradient shape does not match parameters");
  }
  if (!g.all_finite()) throw NumericError("optimizer: non-finite gradient");
  ++steps_;

  if (kind_ == OptimizerKind::adam) {
    const double t = static_cast<double>(steps_);
    const simd::AdamCoeffs<T> c{lr_,
                                beta1_,
                                beta2_,
                                eps_,
                                static_cast<T>(1.0 - std::pow(static_cast<double>(beta1_), t)),
                                static_cast<T>(1.0 - std::pow(static_cast<double>(beta2_), t)),
                                grad_scale};
    simd::adam_update<T>(p.W, g.dW, m_W_, v_W_, c);
    simd::adam_update<T>(p.b, g.db, m_b_, v_b_, c);
    simd::adam_update<T>(p.c, g.dc, m_c_, v_c_, c);
  } else {
    simd::momentum_update<T>(p.W, g.dW, m_W_, lr_, momentum_, grad_scale);
    simd::momentum_update<T>(p.b, g.db, m_b_, lr_, momentum_, grad_scale);
    simd::momentum_update<T>(p.c, g.dc, m_c_, lr_, momentum_, grad_scale);
  }

  auto finite = [](const std::vector<T>& xs) {
    return std::all_of(xs.begin(), xs.end(), [](T x) { return std::isfinite(x); });
  };
  if (!finite(p.W) || !finite(p.b) || !finite(p.c)) throw NumericError("optimizer: non-finite update");
}

template class Optimizer<float>;
template class Optimizer<double>;

std::size_t default_k(std::size_t num_topics) {
  if (num_topics < 2) throw ValidationError("default_k: need at least 2 topics");
  return (num_topics + 1) / 2;
}

}  // namespace scat::train
