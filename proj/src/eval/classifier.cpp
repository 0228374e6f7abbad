#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "scat/error.hpp"
#include "scat/evaluation.hpp"

namespace scat::eval {

std::size_t Classifier::predict(std::span<const float> f) const {
  if (f.size() != num_features) throw ValidationError("classifier: feature width mismatch");
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < num_classes; ++c) {
    double s = bias[c];
    for (std::size_t j = 0; j < num_features; ++j) s += static_cast<double>(weights[c * num_features + j]) * f[j];
    if (s > best_score) {
      best_score = s;
      best = c;
    }
  }
  return best;
}

Classifier train_classifier(const Matrix& features, const std::vector<std::int32_t>& labels,
                            const ClassifierConfig& cfg) {
  const std::size_t n = features.rows;
  const std::size_t d = features.cols;
  if (labels.size() != n) throw ValidationError("train_classifier: label count does not match rows");
  if (n == 0) throw ValidationError("train_classifier: no training rows");
  if (std::any_of(labels.begin(), labels.end(), [](std::int32_t y) { return y < 0; })) {
    throw ValidationError("train_classifier: unlabeled rows");
  }
  const std::size_t C = static_cast<std::size_t>(*std::max_element(labels.begin(), labels.end())) + 1;
  std::vector<std::size_t> counts(C, 0);
  for (auto y : labels) ++counts[static_cast<std::size_t>(y)];
  if (C < 2) throw ValidationError("train_classifier: need at least two classes");
  if (std::any_of(counts.begin(), counts.end(), [](std::size_t c) { return c == 0; })) {
    throw ValidationError("train_classifier: some class has no training rows");
  }

  // Canonical row order makes the summed gradient independent of input order.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (labels[a] != labels[b]) return labels[a] < labels[b];
    const auto ra = features.row(a);
    const auto rb = features.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });

  const std::size_t P = C * d + C;  // weights then biases
  std::vector<double> theta(P, 0.0), grad(P), m(P, 0.0), v(P, 0.0);
  std::vector<double> logits(C);
  const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

  for (std::size_t step = 1; step <= cfg.epochs; ++step) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t r : order) {
      const auto f = features.row(r);
      double mx = -std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < C; ++c) {
        double s = theta[C * d + c];
        const double* w = &theta[c * d];
        for (std::size_t j = 0; j < d; ++j) s += w[j] * f[j];
        logits[c] = s;
        mx = std::max(mx, s);
      }
      double z = 0.0;
      for (auto& s : logits) z += (s = std::exp(s - mx));
      for (std::size_t c = 0; c < C; ++c) {
        const double delta = logits[c] / z - (static_cast<std::size_t>(labels[r]) == c ? 1.0 : 0.0);
        double* gw = &grad[c * d];
        for (std::size_t j = 0; j < d; ++j) gw[j] += delta * f[j];
        grad[C * d + c] += delta;
      }
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
    for (std::size_t i = 0; i < P; ++i) {
      const double g = grad[i] * inv_n;
      m[i] = beta1 * m[i] + (1.0 - beta1) * g;
      v[i] = beta2 * v[i] + (1.0 - beta2) * g * g;
      theta[i] -= cfg.learning_rate * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps);
    }
  }

  Classifier clf;
  clf.num_classes = C;
  clf.num_features = d;
  clf.weights.assign(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(C * d));
  clf.bias.assign(theta.begin() + static_cast<std::ptrdiff_t>(C * d), theta.end());
  return clf;
}

}  // namespace scat::eval
