#include <algorithm>
#include <cmath>
#include <random>

#include "scat/error.hpp"
#include "scat/training.hpp"

namespace scat::train {

double grad_check(const nn::ModelParams<double>& params, const corpus::SparseRow& x, GradCheckMode mode,
                  double eps) {
  params.validate();
  if (!(eps >= 1e-6 && eps <= 1e-3)) throw ValidationError("grad_check: eps must lie in [1e-6, 1e-3]");
  if (mode == GradCheckMode::full && params.variant != nn::Variant::none) {
    throw ValidationError("grad_check: full mode needs variant none; use frozen_competition");
  }

  const auto trace = nn::forward<double>(x, params, nn::Mode::train);
  const auto analytic = nn::backward<double>(trace, params);

  auto loss_at = [&](const nn::ModelParams<double>& p) {
    if (trace.outcome) return nn::forward_frozen<double>(x, p, *trace.outcome).loss;
    return nn::forward<double>(x, p, nn::Mode::train).loss;
  };

  nn::ModelParams<double> probe = params;
  double worst = 0.0;
  auto sweep = [&](std::vector<double>& values, const std::vector<double>& grads) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + eps;
      const double up = loss_at(probe);
      values[i] = saved - eps;
      const double down = loss_at(probe);
      values[i] = saved;
      const double numeric = (up - down) / (2.0 * eps);
      const double denom = std::max({std::abs(grads[i]), std::abs(numeric), 1e-12});
      worst = std::max(worst, std::abs(grads[i] - numeric) / denom);
    }
  };
  sweep(probe.W, analytic.dW);
  sweep(probe.b, analytic.db);
  sweep(probe.c, analytic.dc);
  return worst;
}

}  // namespace scat::train

namespace scat::train {

GradCheckMode default_grad_check_mode(nn::Variant variant) noexcept {
  return variant == nn::Variant::none ? GradCheckMode::full : GradCheckMode::frozen_competition;
}

GradCheckProblem make_grad_check_problem(std::size_t v, std::size_t h, nn::Variant variant, std::size_t k,
                                         double alpha, std::uint64_t seed) {
  if (v < 1 || h < 1) throw ValidationError("grad check problem: v and h must be >= 1");
  GradCheckProblem prob{nn::init_params<double>(h, v, variant, k, alpha, seed), {}};
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> bias(-0.5, 0.5);
  for (auto& b : prob.params.b) b = bias(rng);
  for (auto& c : prob.params.c) c = bias(rng);

  std::size_t top = 0;
  float top_w = -1.0f;
  for (std::uint32_t i = 0; i < v; ++i) {
    if (unit(rng) < 0.5) continue;
    const float w = static_cast<float>(unit(rng));
    prob.x.index.push_back(i);
    prob.x.weight.push_back(w);
    if (w > top_w) {
      top_w = w;
      top = prob.x.weight.size() - 1;
    }
  }
  if (!prob.x.weight.empty()) prob.x.weight[top] = 1.0f;
  return prob;
}

}  // namespace scat::train
