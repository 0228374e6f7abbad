#include <algorithm>
#include <string>

#include "scat/error.hpp"
#include "scat/evaluation.hpp"

namespace scat::eval {

Matrix encode_matrix(const corpus::DocMatrix& data, const nn::ModelParams<float>& params,
                     bool competition_at_inference) {
  if (data.cols != params.v) {
    throw ValidationError("encode: corpus has " + std::to_string(data.cols) + " columns, model expects v=" +
                          std::to_string(params.v));
  }
  Matrix out(data.size(), params.h);
  std::vector<float> z(params.h);
  for (std::size_t i = 0; i < data.size(); ++i) {
    nn::encode_preact<float>(data.rows[i], params, z);
    nn::compete<float>(params, z, out.row(i), nn::Mode::infer, competition_at_inference);
  }
  return out;
}

TopicList extract_topics(const nn::ModelParams<float>& params, const std::vector<std::string>& vocab,
                         std::size_t top_n) {
  if (top_n < 1) throw ValidationError("extract_topics: top_n must be >= 1");
  if (top_n > params.v) throw ValidationError("extract_topics: top_n exceeds vocabulary size");
  if (vocab.size() != params.v) throw ValidationError("extract_topics: vocabulary does not match model");

  TopicList topics(params.h);
  std::vector<std::uint32_t> order(params.v);
  for (std::size_t j = 0; j < params.h; ++j) {
    const auto w = params.row(j);
    for (std::uint32_t i = 0; i < params.v; ++i) order[i] = i;
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top_n), order.end(),
                      [&](std::uint32_t a, std::uint32_t b) {
                        if (w[a] != w[b]) return w[a] > w[b];
                        return a < b;
                      });
    topics[j].reserve(top_n);
    for (std::size_t r = 0; r < top_n; ++r) topics[j].emplace_back(vocab[order[r]], w[order[r]]);
  }
  return topics;
}

}  // namespace scat::eval
