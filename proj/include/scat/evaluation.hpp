#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "scat/autoencoder.hpp"
#include "scat/corpus.hpp"

namespace scat::eval {

/// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<float> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0f) {}

  std::span<float> row(std::size_t i) { return {data.data() + i * cols, cols}; }
  std::span<const float> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
  bool operator==(const Matrix&) const = default;
};

/// Row i is tanh(W x_i + b), optionally passed through the model's competitive layer.
Matrix encode_matrix(const corpus::DocMatrix& data, const nn::ModelParams<float>& params,
                     bool competition_at_inference);

using Topic = std::vector<std::pair<std::string, float>>;
using TopicList = std::vector<Topic>;

/// Topic j lists the top_n words i with the largest W[j][i], ties to the lower index.
TopicList extract_topics(const nn::ModelParams<float>& params, const std::vector<std::string>& vocab,
                         std::size_t top_n);

struct ClassifierConfig {
  std::size_t epochs = 500;  // full-batch steps
  double learning_rate = 0.05;
  std::uint64_t seed = 0;  // reserved; full-batch training from zero init draws no randomness
};

struct Classifier {
  std::size_t num_classes = 0;
  std::size_t num_features = 0;
  std::vector<float> weights;  // num_classes x num_features
  std::vector<float> bias;

  std::size_t predict(std::span<const float> features) const;
};

/// Multinomial logistic regression on mean softmax cross-entropy.
Classifier train_classifier(const Matrix& features, const std::vector<std::int32_t>& labels,
                            const ClassifierConfig& cfg = {});

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct EvalReport {
  std::vector<ClassMetrics> per_class;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
  std::vector<std::string> class_names;             // optional, for display

  nlohmann::json to_json() const;
};

EvalReport report_from_predictions(const std::vector<std::int32_t>& truth, const std::vector<std::size_t>& predicted,
                                   std::size_t num_classes);

EvalReport evaluate(const Classifier& clf, const Matrix& features, const std::vector<std::int32_t>& labels);

/// Tab-separated: header "doc_id label f0 .. f{h-1}", then one row per document
/// with 6 significant digits.
void export_embeddings(const Matrix& features, const std::vector<std::int32_t>& labels,
                       const std::vector<std::string>& doc_ids, const std::filesystem::path& path);

}  // namespace scat::eval
