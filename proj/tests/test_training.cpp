#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "scat/error.hpp"
#include "scat/training.hpp"

using namespace scat;
using namespace scat::train;
using corpus::DocMatrix;
using corpus::SparseRow;

namespace {

nn::ModelParams<double> flat_params(std::size_t n, double value) {
  auto p = nn::ModelParams<double>::zeros(1, n, nn::Variant::none, 1, 1.0);
  std::fill(p.W.begin(), p.W.end(), value);
  p.b[0] = value;
  std::fill(p.c.begin(), p.c.end(), value);
  return p;
}

nn::Gradients<double> flat_grads(std::size_t n, double g) {
  auto gr = nn::Gradients<double>::zeros(1, n);
  std::fill(gr.dW.begin(), gr.dW.end(), g);
  gr.db[0] = g;
  std::fill(gr.dc.begin(), gr.dc.end(), g);
  return gr;
}

// Two disjoint word blocks; each document draws a handful of words from one block.
DocMatrix two_topic_corpus(std::size_t per_topic, std::uint64_t seed) {
  DocMatrix m;
  m.cols = 20;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> word(0, 9);
  std::uniform_real_distribution<float> w(0.3f, 1.0f);
  for (std::size_t d = 0; d < 2 * per_topic; ++d) {
    const int topic = static_cast<int>(d % 2);
    std::vector<float> dense(20, 0.0f);
    for (int t = 0; t < 5; ++t) dense[static_cast<std::size_t>(topic * 10 + word(rng))] = w(rng);
    SparseRow r;
    for (std::uint32_t i = 0; i < 20; ++i)
      if (dense[i] > 0) r.index.push_back(i), r.weight.push_back(dense[i]);
    m.push_back(std::move(r), topic, "doc" + std::to_string(d));
  }
  return m;
}

}  // namespace

TEST_CASE("optimizer: zero gradient leaves parameters unchanged") {
  for (auto kind : {OptimizerKind::sgd_momentum, OptimizerKind::adam}) {
    TrainConfig cfg;
    cfg.optimizer = kind;
    auto p = flat_params(3, 0.25);
    const auto before = p;
    Optimizer<double> opt(cfg, p);
    opt.step(p, flat_grads(3, 0.0));
    CHECK(p == before);
  }
}

TEST_CASE("optimizer: first Adam step is lr * g / (|g| + eps)") {
  TrainConfig cfg;
  cfg.learning_rate = 0.01;
  auto p = nn::ModelParams<double>::zeros(1, 3, nn::Variant::none, 1, 1.0);
  auto g = nn::Gradients<double>::zeros(1, 3);
  g.dW = {0.5, -2.0, 1e-3};
  g.db = {3.0};
  g.dc = {-0.1, 0.0, 7.0};
  Optimizer<double> opt(cfg, p);
  opt.step(p, g);
  for (std::size_t i = 0; i < 3; ++i) {
    const double expect = -0.01 * g.dW[i] / (std::abs(g.dW[i]) + 1e-8);
    CHECK(p.W[i] == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK(p.c[1] == 0.0);
  CHECK(p.b[0] == doctest::Approx(-0.01).epsilon(1e-9));
}

TEST_CASE("optimizer: momentum unrolls to lr * g * (1 + mu) on the second step") {
  TrainConfig cfg;
  cfg.optimizer = OptimizerKind::sgd_momentum;
  cfg.learning_rate = 0.1;
  cfg.momentum = 0.9;
  auto p = flat_params(2, 1.0);
  Optimizer<double> opt(cfg, p);
  const auto g = flat_grads(2, 0.5);
  opt.step(p, g);
  const auto mid = p;
  opt.step(p, g);
  CHECK(mid.W[0] - p.W[0] == doctest::Approx(0.1 * 0.5 * 1.9).epsilon(1e-12));
  CHECK(opt.steps() == 2);
}

TEST_CASE("optimizer: rejects non-finite gradients") {
  TrainConfig cfg;
  auto p = flat_params(2, 0.0);
  Optimizer<double> opt(cfg, p);
  auto g = flat_grads(2, 0.1);
  g.dc[1] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(opt.step(p, g), NumericError);
}

TEST_CASE("a small gradient step decreases the loss") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto prob = make_grad_check_problem(12, 5, nn::Variant::none, 1, 1.0, seed);
    auto p = prob.params;
    const auto t = nn::forward<double>(prob.x, p, nn::Mode::train);
    const auto g = nn::backward<double>(t, p);
    TrainConfig cfg;
    cfg.optimizer = OptimizerKind::sgd_momentum;
    cfg.momentum = 0.0;
    cfg.learning_rate = 1e-3;
    Optimizer<double> opt(cfg, p);
    opt.step(p, g);
    CHECK(nn::forward<double>(prob.x, p, nn::Mode::train).loss < t.loss);
  }
}

TEST_CASE("grad_check passes in both modes") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto none = make_grad_check_problem(10, 4, nn::Variant::none, 2, 1.0, seed);
    CHECK(grad_check(none.params, none.x, GradCheckMode::full, 1e-4) < 1e-4);
    for (auto variant : {nn::Variant::scat, nn::Variant::ksparse, nn::Variant::kate}) {
      const auto prob = make_grad_check_problem(10, 6, variant, 3, 1.0, seed);
      INFO(nn::to_string(variant), " seed ", seed);
      CHECK(grad_check(prob.params, prob.x, GradCheckMode::frozen_competition, 1e-4) < 1e-4);
    }
  }
}

TEST_CASE("grad_check with an all-zero input") {
  auto prob = make_grad_check_problem(10, 4, nn::Variant::none, 2, 1.0, 3);
  prob.x = {};
  CHECK(grad_check(prob.params, prob.x, GradCheckMode::full, 1e-4) < 1e-4);
  // With x = 0 the only dW contribution is the decoder side zhat_j * delta_i.
  const auto t = nn::forward<double>(prob.x, prob.params, nn::Mode::train);
  const auto g = nn::backward<double>(t, prob.params);
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t i = 0; i < 10; ++i)
      CHECK(g.dW[j * 10 + i] == doctest::Approx(t.zhat[j] * (t.xhat[i] - 0.0)).epsilon(1e-14));
}

TEST_CASE("grad_check argument errors") {
  const auto prob = make_grad_check_problem(6, 3, nn::Variant::scat, 2, 1.0, 1);
  CHECK_THROWS_AS(grad_check(prob.params, prob.x, GradCheckMode::full, 1e-4), ValidationError);
  CHECK_THROWS_AS(grad_check(prob.params, prob.x, GradCheckMode::frozen_competition, 0.1), ValidationError);
  CHECK(default_grad_check_mode(nn::Variant::none) == GradCheckMode::full);
  CHECK(default_grad_check_mode(nn::Variant::kate) == GradCheckMode::frozen_competition);
}

TEST_CASE("default_k") {
  CHECK(default_k(50) == 25);
  CHECK(default_k(20) == 10);
  CHECK(default_k(5) == 3);
  CHECK(default_k(2) == 1);
  CHECK_THROWS_AS(default_k(1), ValidationError);
  CHECK_THROWS_AS(default_k(0), ValidationError);
}

TEST_CASE("fit overfits a single document") {
  DocMatrix m;
  m.cols = 8;
  m.push_back({{1, 4, 6}, {1.0f, 0.5f, 0.25f}}, 0, "only");
  TrainConfig cfg;
  cfg.epochs = 200;
  cfg.batch_size = 1;
  cfg.learning_rate = 0.01;
  cfg.validation_fraction = 0.0;
  cfg.deterministic = true;
  const auto r = fit(m, nn::init_params<float>(4, 8, nn::Variant::none, 1, 1.0, 1), cfg);
  REQUIRE(r.report.train_loss.size() == 200);
  CHECK(r.report.train_loss.back() < r.report.initial_train_loss);
  CHECK(r.report.train_loss.back() < 0.5 * r.report.initial_train_loss);
  CHECK(r.report.validation_loss.empty());
  CHECK(r.report.best_epoch == 200);
}

TEST_CASE("deterministic fits are bit-identical") {
  const auto data = two_topic_corpus(40, 3);
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.batch_size = 16;
  cfg.seed = 11;
  cfg.deterministic = true;
  const auto init = nn::init_params<float>(8, 20, nn::Variant::scat, 4, 1.0, 5);
  const auto a = fit(data, init, cfg);
  const auto b = fit(data, init, cfg);
  CHECK(a.params == b.params);
  CHECK(a.report.params_checksum == b.report.params_checksum);
  CHECK(a.report.train_loss == b.report.train_loss);
}

TEST_CASE("multi-threaded fit tracks the serial result") {
  const auto data = two_topic_corpus(60, 4);
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.batch_size = 40;
  cfg.threads = 4;
  const auto init = nn::init_params<float>(8, 20, nn::Variant::scat, 4, 1.0, 5);
  const auto par = fit(data, init, cfg);
  cfg.deterministic = true;
  const auto ser = fit(data, init, cfg);
  for (std::size_t e = 0; e < 3; ++e)
    CHECK(par.report.train_loss[e] == doctest::Approx(ser.report.train_loss[e]).epsilon(1e-4));
}

TEST_CASE("fit logs one line per epoch and reduces loss on two topics") {
  const auto data = two_topic_corpus(50, 8);
  TrainConfig cfg;
  cfg.epochs = 30;
  cfg.batch_size = 10;
  cfg.learning_rate = 0.01;
  cfg.deterministic = true;
  std::ostringstream log;
  const auto r = fit(data, nn::init_params<float>(8, 20, nn::Variant::scat, 4, 1.0, 2), cfg, &log);
  CHECK(r.report.epochs_run >= 1);
  CHECK(r.report.train_loss.size() == r.report.epochs_run);
  CHECK(r.report.validation_loss.size() == r.report.epochs_run);
  CHECK(r.report.train_loss.back() < r.report.initial_train_loss);
  std::size_t lines = 0;
  for (char ch : log.str()) lines += ch == '\n';
  CHECK(lines == r.report.epochs_run);
}

TEST_CASE("early stopping keeps the best validation epoch") {
  const auto data = two_topic_corpus(30, 12);
  TrainConfig cfg;
  cfg.epochs = 60;
  cfg.batch_size = 4;
  cfg.learning_rate = 0.05;  // aggressive, so validation loss turns around
  cfg.validation_fraction = 0.3;
  cfg.early_stop_patience = 2;
  cfg.deterministic = true;
  const auto r = fit(data, nn::init_params<float>(8, 20, nn::Variant::none, 1, 1.0, 2), cfg);
  const auto& val = r.report.validation_loss;
  REQUIRE(!val.empty());
  REQUIRE(r.report.best_epoch >= 1);
  const double best = *std::min_element(val.begin(), val.end());
  CHECK(val[r.report.best_epoch - 1] == best);
  CHECK(r.report.epochs_run <= r.report.best_epoch + 2);
  CHECK(r.report.params_checksum == checksum(r.params));
}

TEST_CASE("fit rejects bad inputs") {
  const auto data = two_topic_corpus(5, 1);
  TrainConfig cfg;
  cfg.epochs = 1;
  CHECK_THROWS_AS(fit(data, nn::init_params<float>(4, 19, nn::Variant::none, 1, 1.0, 1), cfg), ValidationError);
  auto bad = nn::init_params<float>(4, 20, nn::Variant::none, 1, 1.0, 1);
  bad.c[0] = std::numeric_limits<float>::infinity();
  CHECK_THROWS_AS(fit(data, bad, cfg), NumericError);
  cfg.batch_size = 0;
  CHECK_THROWS_AS(fit(data, nn::init_params<float>(4, 20, nn::Variant::none, 1, 1.0, 1), cfg), ValidationError);
}

TEST_CASE("diverging training raises a numeric error") {
  const auto data = two_topic_corpus(10, 2);
  TrainConfig cfg;
  cfg.epochs = 50;
  cfg.optimizer = OptimizerKind::sgd_momentum;
  cfg.learning_rate = 3e38;
  cfg.validation_fraction = 0.0;
  CHECK_THROWS_AS(fit(data, nn::init_params<float>(4, 20, nn::Variant::none, 1, 1.0, 1), cfg), NumericError);
}
