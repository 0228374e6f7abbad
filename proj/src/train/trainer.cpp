#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <exception>
#include <iomanip>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <thread>

#include "scat/error.hpp"
#include "scat/training.hpp"

namespace scat::train {

using corpus::DocMatrix;
using nn::Gradients;
using nn::ModelParams;

namespace {

std::size_t resolve_threads(const TrainConfig& cfg) {
  if (cfg.deterministic) return 1;
  if (cfg.threads > 0) return cfg.threads;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void accumulate_range(const DocMatrix& data, std::span<const std::size_t> rows, const ModelParams<float>& p,
                      Gradients<float>& acc) {
  acc.clear();
  for (std::size_t r : rows) {
    const auto trace = nn::forward<float>(data.rows[r], p, nn::Mode::train);
    nn::backward_accumulate<float>(trace, p, acc);
  }
}

// Sums per-sample gradients of `rows` into workers[0]. With several workers
// each handles a contiguous chunk and the partial sums are added in worker
// order.
void batch_gradient(const DocMatrix& data, std::span<const std::size_t> rows, const ModelParams<float>& p,
                    std::vector<Gradients<float>>& workers) {
  const std::size_t n_workers = std::min(workers.size(), rows.size());
  if (n_workers <= 1) {
    accumulate_range(data, rows, p, workers[0]);
    return;
  }
  const std::size_t chunk = (rows.size() + n_workers - 1) / n_workers;
  std::vector<std::exception_ptr> errors(n_workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) {
      const std::size_t lo = std::min(rows.size(), w * chunk);
      const std::size_t hi = std::min(rows.size(), lo + chunk);
      pool.emplace_back([&, w, lo, hi] {
        try {
          accumulate_range(data, rows.subspan(lo, hi - lo), p, workers[w]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (std::size_t w = 1; w < n_workers; ++w) workers[0].add(workers[w]);
}

double mean_loss_over(const DocMatrix& data, std::span<const std::size_t> rows, const ModelParams<float>& p) {
  if (rows.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t r : rows) total += nn::forward<float>(data.rows[r], p, nn::Mode::train).loss;
  return total / static_cast<double>(rows.size());
}

std::string format_loss(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

}  // namespace

std::uint64_t checksum(const ModelParams<float>& p) {
  std::uint64_t hash = 1469598103934665603ull;
  auto mix = [&](const std::vector<float>& xs) {
    for (float x : xs) {
      std::uint32_t bits;
      std::memcpy(&bits, &x, sizeof bits);
      for (int s = 0; s < 32; s += 8) {
        hash ^= (bits >> s) & 0xffu;
        hash *= 1099511628211ull;
      }
    }
  };
  mix(p.W);
  mix(p.b);
  mix(p.c);
  return hash;
}

double mean_loss(const DocMatrix& data, const ModelParams<float>& p) {
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return mean_loss_over(data, rows, p);
}

FitResult fit(const DocMatrix& data, ModelParams<float> params, const TrainConfig& cfg, std::ostream* log) {
  const auto started = std::chrono::steady_clock::now();
  cfg.validate();
  params.validate();
  if (data.cols != params.v) {
    throw ValidationError("fit: corpus has " + std::to_string(data.cols) + " columns, model expects v=" +
                          std::to_string(params.v));
  }
  if (data.size() == 0) throw ValidationError("fit: empty corpus");

  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);

  const auto n_val = static_cast<std::size_t>(std::floor(cfg.validation_fraction * static_cast<double>(data.size())));
  if (n_val >= data.size()) throw ValidationError("fit: validation split leaves no training documents");
  std::vector<std::size_t> val_rows(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
  std::vector<std::size_t> train_rows(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
  std::sort(val_rows.begin(), val_rows.end());
  std::sort(train_rows.begin(), train_rows.end());

  const bool early_stopping = cfg.early_stop_patience.has_value() && !val_rows.empty();

  FitResult result{params, {}};
  TrainReport& report = result.report;
  report.initial_train_loss = mean_loss_over(data, train_rows, params);

  Optimizer<float> opt(cfg, params);
  std::vector<Gradients<float>> workers(resolve_threads(cfg), Gradients<float>::zeros(params.h, params.v));

  double best_val = std::numeric_limits<double>::infinity();
  ModelParams<float> best_params = params;
  std::size_t since_best = 0;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    if (cfg.shuffle) std::shuffle(train_rows.begin(), train_rows.end(), rng);

    double epoch_loss = 0.0;
    std::size_t batch_no = 0;
    for (std::size_t lo = 0; lo < train_rows.size(); lo += cfg.batch_size, ++batch_no) {
      const std::size_t hi = std::min(train_rows.size(), lo + cfg.batch_size);
      const std::span<const std::size_t> batch(train_rows.data() + lo, hi - lo);
      batch_gradient(data, batch, params, workers);
      const auto& g = workers[0];
      if (!std::isfinite(g.loss)) {
        throw NumericError("non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                           std::to_string(batch_no));
      }
      epoch_loss += g.loss;
      try {
        opt.step(params, g, 1.0f / static_cast<float>(batch.size()));
      } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) + " at epoch " + std::to_string(epoch) + ", batch " +
                           std::to_string(batch_no));
      }
    }
    epoch_loss /= static_cast<double>(train_rows.size());
    report.train_loss.push_back(epoch_loss);
    report.epochs_run = epoch;

    double val_loss = std::numeric_limits<double>::quiet_NaN();
    if (!val_rows.empty()) {
      val_loss = mean_loss_over(data, val_rows, params);
      report.validation_loss.push_back(val_loss);
    }
    if (log) {
      *log << epoch << '\t' << format_loss(epoch_loss) << '\t' << (val_rows.empty() ? "-" : format_loss(val_loss))
           << '\n';
      log->flush();
    }

    if (early_stopping) {
      if (val_loss < best_val) {
        best_val = val_loss;
        best_params = params;
        report.best_epoch = epoch;
        since_best = 0;
      } else if (++since_best >= *cfg.early_stop_patience) {
        break;
      }
    }
  }

  if (early_stopping) {
    params = std::move(best_params);
  } else {
    report.best_epoch = report.epochs_run;
  }
  result.params = std::move(params);
  report.params_checksum = checksum(result.params);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace scat::train
