#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "scat/corpus.hpp"
#include "scat/error.hpp"

namespace fs = std::filesystem;

namespace scat::corpus {
namespace {

struct RawDoc {
  std::string doc_id;
  std::int32_t label;
  TokenList tokens;
};

std::vector<fs::path> sorted_entries(const fs::path& dir, bool want_dirs) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (want_dirs ? entry.is_directory() : entry.is_regular_file()) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Reads every message under root/<class>/ with labels from `class_names`.
// Unreadable files are counted, not fatal.
std::vector<RawDoc> read_split(const fs::path& root, const std::vector<std::string>& class_names,
                               const std::string& id_prefix, std::size_t& skipped) {
  std::vector<RawDoc> docs;
  for (std::size_t label = 0; label < class_names.size(); ++label) {
    const fs::path class_dir = root / class_names[label];
    if (!fs::is_directory(class_dir)) {
      throw IoError("missing class directory: " + class_dir.string());
    }
    const auto files = sorted_entries(class_dir, false);
    if (files.empty()) throw ValidationError("empty class directory: " + class_dir.string());
    for (const auto& file : files) {
      std::ifstream in(file, std::ios::binary);
      std::ostringstream ss;
      if (!in || !(ss << in.rdbuf())) {
        ++skipped;
        continue;
      }
      const std::string text = ss.str();
      docs.push_back({id_prefix + class_names[label] + "/" + file.filename().string(),
                      static_cast<std::int32_t>(label), tokenize(strip_message_header(text))});
    }
  }
  std::sort(docs.begin(), docs.end(), [](const RawDoc& a, const RawDoc& b) { return a.doc_id < b.doc_id; });
  return docs;
}

std::vector<std::string> class_dirs(const fs::path& root) {
  std::vector<std::string> names;
  for (const auto& p : sorted_entries(root, true)) names.push_back(p.filename().string());
  return names;
}

DocMatrix to_matrix(const std::vector<RawDoc>& docs, const Vocabulary& vocab, Weighting w) {
  DocMatrix m;
  m.cols = vocab.size();
  for (const auto& d : docs) m.push_back(vectorize(d.tokens, vocab, w), d.label, d.doc_id);
  return m;
}

}  // namespace

LoadedCorpus load_20newsgroups(const fs::path& path, const CorpusConfig& cfg) {
  cfg.validate();
  if (!fs::is_directory(path)) throw IoError("corpus directory not found: " + path.string());

  LoadedCorpus out;
  std::vector<RawDoc> train_docs;
  std::vector<RawDoc> test_docs;

  std::optional<fs::path> train_root;
  std::optional<fs::path> test_root;
  for (const auto& dir : sorted_entries(path, true)) {
    const std::string name = dir.filename().string();
    if (ends_with(name, "-train")) train_root = dir;
    if (ends_with(name, "-test")) test_root = dir;
  }

  if (train_root && test_root) {
    out.bydate_layout = true;
    out.class_names = class_dirs(*train_root);
    if (out.class_names.empty()) throw ValidationError("no class directories in " + train_root->string());
    train_docs = read_split(*train_root, out.class_names, "train/", out.skipped_files);
    test_docs = read_split(*test_root, out.class_names, "test/", out.skipped_files);
  } else {
    out.class_names = class_dirs(path);
    if (out.class_names.empty()) throw ValidationError("no class directories in " + path.string());
    auto all = read_split(path, out.class_names, "", out.skipped_files);
    if (all.size() < 2) throw ValidationError("need at least two documents to split");

    std::vector<std::size_t> order(all.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 rng(cfg.split_seed);
    std::shuffle(order.begin(), order.end(), rng);

    auto n_test = static_cast<std::size_t>(std::llround(cfg.test_fraction * static_cast<double>(all.size())));
    n_test = std::clamp<std::size_t>(n_test, 1, all.size() - 1);
    std::vector<bool> is_test(all.size(), false);
    for (std::size_t i = 0; i < n_test; ++i) is_test[order[i]] = true;
    for (std::size_t i = 0; i < all.size(); ++i) {
      (is_test[i] ? test_docs : train_docs).push_back(std::move(all[i]));
    }
  }

  if (train_docs.empty()) throw ValidationError("training split is empty");

  std::vector<TokenList> train_tokens;
  train_tokens.reserve(train_docs.size());
  for (const auto& d : train_docs) train_tokens.push_back(d.tokens);
  out.vocab = build_vocab(train_tokens, cfg);

  out.train = to_matrix(train_docs, out.vocab, cfg.weighting);
  out.test = to_matrix(test_docs, out.vocab, cfg.weighting);
  return out;
}

}  // namespace scat::corpus
