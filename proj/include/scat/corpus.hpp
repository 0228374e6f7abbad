#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace scat::corpus {

enum class Weighting { log_normalized_tf, binary };

std::string_view to_string(Weighting w) noexcept;
/// Throws ValidationError on an unknown name.
Weighting weighting_from_string(std::string_view s);

struct CorpusConfig {
  std::size_t max_vocab = 2000;
  std::size_t min_doc_freq = 3;
  std::optional<std::set<std::string>> stopwords;
  Weighting weighting = Weighting::log_normalized_tf;
  std::uint64_t split_seed = 0;
  double test_fraction = 0.2;

  void validate() const;
};

/// Tokens ordered by descending document frequency, ties lexicographic.
class Vocabulary {
 public:
  Vocabulary() = default;
  /// Takes tokens already in canonical order; throws ValidationError on
  /// duplicates, a length mismatch, or an ordering violation.
  Vocabulary(std::vector<std::string> tokens, std::vector<std::uint32_t> doc_freq);

  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  const std::vector<std::uint32_t>& doc_freq() const noexcept { return doc_freq_; }
  const std::string& token(std::size_t i) const { return tokens_.at(i); }
  std::optional<std::uint32_t> index_of(std::string_view token) const;

  bool operator==(const Vocabulary& o) const { return tokens_ == o.tokens_ && doc_freq_ == o.doc_freq_; }

 private:
  std::vector<std::string> tokens_;
  std::vector<std::uint32_t> doc_freq_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

/// One document: strictly increasing indices, weights in [0,1].
struct SparseRow {
  std::vector<std::uint32_t> index;
  std::vector<float> weight;

  std::size_t nnz() const noexcept { return index.size(); }
  bool empty() const noexcept { return index.empty(); }
  bool operator==(const SparseRow&) const = default;
};

inline constexpr std::int32_t kNoLabel = -1;

struct DocMatrix {
  std::size_t cols = 0;
  std::vector<SparseRow> rows;
  std::vector<std::int32_t> labels;  // kNoLabel when unlabeled
  std::vector<std::string> doc_ids;

  std::size_t size() const noexcept { return rows.size(); }
  void push_back(SparseRow row, std::int32_t label, std::string doc_id);
  /// Checks the row invariants (index order and range, weights in [0,1]).
  void validate() const;
  bool operator==(const DocMatrix&) const = default;
};

/// Lowercased maximal runs of ASCII letters of length >= 2.
std::vector<std::string> tokenize(std::string_view text);

using TokenList = std::vector<std::string>;

Vocabulary build_vocab(const std::vector<TokenList>& docs, const CorpusConfig& cfg);

SparseRow vectorize(const TokenList& doc, const Vocabulary& vocab, Weighting weighting);

/// Reads one token per line; blank lines and surrounding whitespace ignored.
std::set<std::string> read_stopwords(const std::filesystem::path& path);

struct LoadedCorpus {
  DocMatrix train;
  DocMatrix test;
  std::vector<std::string> class_names;
  Vocabulary vocab;
  std::size_t skipped_files = 0;
  bool bydate_layout = false;
};

/// Loads a one-directory-per-class corpus. Accepts either the bydate layout
/// (`*-train/` and `*-test/` siblings, used as-is) or a flat layout that is
/// split with cfg.split_seed / cfg.test_fraction.
LoadedCorpus load_20newsgroups(const std::filesystem::path& path, const CorpusConfig& cfg);

/// Drops everything up to and including the first blank line.
std::string_view strip_message_header(std::string_view message);

// ---- archive ("CAE1") ----------------------------------------------------

struct CorpusArchive {
  DocMatrix docs;
  Vocabulary vocab;
  std::vector<std::string> class_names;
  CorpusConfig config;
};

void write_archive(const std::filesystem::path& path, const CorpusArchive& archive);
CorpusArchive read_archive(const std::filesystem::path& path);
std::string encode_archive(const CorpusArchive& archive);
CorpusArchive decode_archive(std::string_view bytes);

}  // namespace scat::corpus
