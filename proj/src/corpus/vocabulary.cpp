#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

#include "scat/corpus.hpp"
#include "scat/error.hpp"

namespace scat::corpus {

std::string_view to_string(Weighting w) noexcept {
  return w == Weighting::binary ? "binary" : "log_normalized_tf";
}

Weighting weighting_from_string(std::string_view s) {
  if (s == "log_normalized_tf") return Weighting::log_normalized_tf;
  if (s == "binary") return Weighting::binary;
  throw ValidationError("unknown weighting: " + std::string(s));
}

void CorpusConfig::validate() const {
  if (max_vocab < 1) throw ValidationError("max_vocab must be >= 1");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ValidationError("test_fraction must lie in (0, 1)");
  }
}

namespace {

bool canonical_before(std::uint32_t df_a, const std::string& a, std::uint32_t df_b,
                      const std::string& b) {
  if (df_a != df_b) return df_a > df_b;
  return a < b;
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> tokens, std::vector<std::uint32_t> doc_freq)
    : tokens_(std::move(tokens)), doc_freq_(std::move(doc_freq)) {
  if (tokens_.size() != doc_freq_.size()) {
    throw ValidationError("vocabulary: token and doc_freq lengths differ");
  }
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<std::uint32_t>(i)).second) {
      throw ValidationError("vocabulary: duplicate token '" + tokens_[i] + "'");
    }
    if (i > 0 && !canonical_before(doc_freq_[i - 1], tokens_[i - 1], doc_freq_[i], tokens_[i])) {
      throw ValidationError("vocabulary: tokens not in (doc_freq desc, token asc) order");
    }
  }
}

std::optional<std::uint32_t> Vocabulary::index_of(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void DocMatrix::push_back(SparseRow row, std::int32_t label, std::string doc_id) {
  rows.push_back(std::move(row));
  labels.push_back(label);
  doc_ids.push_back(std::move(doc_id));
}

void DocMatrix::validate() const {
  if (labels.size() != rows.size() || doc_ids.size() != rows.size()) {
    throw ValidationError("doc matrix: rows, labels and doc_ids lengths differ");
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.index.size() != row.weight.size()) {
      throw ValidationError("doc matrix: row " + std::to_string(r) + " index/weight length mismatch");
    }
    for (std::size_t k = 0; k < row.index.size(); ++k) {
      if (row.index[k] >= cols) {
        throw ValidationError("doc matrix: row " + std::to_string(r) + " index out of range");
      }
      if (k > 0 && row.index[k] <= row.index[k - 1]) {
        throw ValidationError("doc matrix: row " + std::to_string(r) + " indices not increasing");
      }
      const float w = row.weight[k];
      if (!(w >= 0.0f && w <= 1.0f)) {
        throw ValidationError("doc matrix: row " + std::to_string(r) + " weight outside [0,1]");
      }
    }
  }
}

Vocabulary build_vocab(const std::vector<TokenList>& docs, const CorpusConfig& cfg) {
  cfg.validate();
  if (docs.empty()) throw ValidationError("build_vocab: no documents");

  std::map<std::string, std::uint32_t> df;
  for (const auto& doc : docs) {
    std::unordered_set<std::string_view> seen(doc.begin(), doc.end());
    for (auto tok : seen) ++df[std::string(tok)];
  }

  std::vector<std::pair<std::string, std::uint32_t>> kept;
  for (auto& [tok, count] : df) {
    if (count < cfg.min_doc_freq) continue;
    if (cfg.stopwords && cfg.stopwords->contains(tok)) continue;
    kept.emplace_back(tok, count);
  }
  if (kept.empty()) throw ValidationError("build_vocab: every token was filtered out");

  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return canonical_before(a.second, a.first, b.second, b.first);
  });
  if (kept.size() > cfg.max_vocab) kept.resize(cfg.max_vocab);

  std::vector<std::string> tokens;
  std::vector<std::uint32_t> freqs;
  tokens.reserve(kept.size());
  freqs.reserve(kept.size());
  for (auto& [tok, count] : kept) {
    tokens.push_back(std::move(tok));
    freqs.push_back(count);
  }
  return Vocabulary(std::move(tokens), std::move(freqs));
}

SparseRow vectorize(const TokenList& doc, const Vocabulary& vocab, Weighting weighting) {
  if (vocab.empty()) throw ValidationError("vectorize: empty vocabulary");
  std::map<std::uint32_t, std::uint32_t> tf;
  for (const auto& tok : doc) {
    if (auto idx = vocab.index_of(tok)) ++tf[*idx];
  }
  SparseRow row;
  if (tf.empty()) return row;

  std::uint32_t max_tf = 0;
  for (const auto& [idx, count] : tf) max_tf = std::max(max_tf, count);
  const double denom = std::log1p(static_cast<double>(max_tf));

  row.index.reserve(tf.size());
  row.weight.reserve(tf.size());
  for (const auto& [idx, count] : tf) {
    row.index.push_back(idx);
    if (weighting == Weighting::binary || count == max_tf) {
      row.weight.push_back(1.0f);
    } else {
      row.weight.push_back(static_cast<float>(std::log1p(static_cast<double>(count)) / denom));
    }
  }
  return row;
}

}  // namespace scat::corpus
