// Corpus archive layout (all little-endian):
//   "CAE1"
//   uint64 metadata length, then that many bytes of JSON
//   uint64 row count
//   per row: int32 label, uint32 entry count, entries of (uint32 index, float32 weight)


#include <json.hpp>

#include "io/binary.hpp"
#include "scat/corpus.hpp"
#include "scat/error.hpp"

namespace scat::corpus {
namespace {

constexpr std::string_view kMagic = "CAE1";

nlohmann::json config_to_json(const CorpusConfig& cfg) {
  nlohmann::json j;
  j["max_vocab"] = cfg.max_vocab;
  j["min_doc_freq"] = cfg.min_doc_freq;
  j["stopwords"] = cfg.stopwords ? nlohmann::json(*cfg.stopwords) : nlohmann::json(nullptr);
  j["weighting"] = std::string(to_string(cfg.weighting));
  j["split_seed"] = cfg.split_seed;
  j["test_fraction"] = cfg.test_fraction;
  return j;
}

CorpusConfig config_from_json(const nlohmann::json& j) {
  CorpusConfig cfg;
  cfg.max_vocab = j.at("max_vocab").get<std::size_t>();
  cfg.min_doc_freq = j.at("min_doc_freq").get<std::size_t>();
  if (!j.at("stopwords").is_null()) cfg.stopwords = j.at("stopwords").get<std::set<std::string>>();
  cfg.weighting = weighting_from_string(j.at("weighting").get<std::string>());
  cfg.split_seed = j.at("split_seed").get<std::uint64_t>();
  cfg.test_fraction = j.at("test_fraction").get<double>();
  return cfg;
}

}  // namespace

std::string encode_archive(const CorpusArchive& a) {
  const DocMatrix& m = a.docs;
  m.validate();

  nlohmann::json meta;
  meta["cols"] = m.cols;
  meta["vocab"] = a.vocab.tokens();
  meta["doc_freq"] = a.vocab.doc_freq();
  meta["class_names"] = a.class_names;
  meta["doc_ids"] = m.doc_ids;
  meta["config"] = config_to_json(a.config);
  const std::string meta_text = meta.dump();

  io::ByteWriter w;
  w.put_raw(kMagic);
  w.put<std::uint64_t>(meta_text.size());
  w.put_raw(meta_text);
  w.put<std::uint64_t>(m.rows.size());
  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    const auto& row = m.rows[r];
    w.put<std::int32_t>(m.labels[r]);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(row.nnz()));
    for (std::size_t k = 0; k < row.nnz(); ++k) {
      w.put<std::uint32_t>(row.index[k]);
      w.put<float>(row.weight[k]);
    }
  }
  return w.take();
}

CorpusArchive decode_archive(std::string_view bytes) {
  io::ByteReader r(bytes, "corpus archive");
  if (r.remaining() < kMagic.size() || r.get_raw(kMagic.size()) != kMagic) {
    throw FormatError("not a corpus archive (bad magic)");
  }
  const auto meta_len = r.get<std::uint64_t>();
  if (meta_len > r.remaining()) throw FormatError("corpus archive: metadata length exceeds file");

  CorpusArchive a;
  try {
    const auto meta = nlohmann::json::parse(r.get_raw(static_cast<std::size_t>(meta_len)));
    a.vocab = Vocabulary(meta.at("vocab").get<std::vector<std::string>>(),
                         meta.at("doc_freq").get<std::vector<std::uint32_t>>());
    a.class_names = meta.at("class_names").get<std::vector<std::string>>();
    a.docs.cols = meta.at("cols").get<std::size_t>();
    a.docs.doc_ids = meta.at("doc_ids").get<std::vector<std::string>>();
    a.config = config_from_json(meta.at("config"));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("corpus archive: bad metadata: ") + e.what());
  }

  const auto n_rows = r.get<std::uint64_t>();
  if (n_rows != a.docs.doc_ids.size()) throw FormatError("corpus archive: row count does not match doc_ids");
  a.docs.rows.resize(n_rows);
  a.docs.labels.resize(n_rows);
  for (std::size_t i = 0; i < n_rows; ++i) {
    a.docs.labels[i] = r.get<std::int32_t>();
    const auto nnz = r.get<std::uint32_t>();
    if (nnz > r.remaining() / 8) throw FormatError("corpus archive: truncated payload");
    auto& row = a.docs.rows[i];
    row.index.resize(nnz);
    row.weight.resize(nnz);
    for (std::uint32_t k = 0; k < nnz; ++k) {
      row.index[k] = r.get<std::uint32_t>();
      row.weight[k] = r.get<float>();
    }
  }
  if (r.remaining() != 0) throw FormatError("corpus archive: trailing bytes");
  try {
    a.docs.validate();
  } catch (const ValidationError& e) {
    throw FormatError(std::string("corpus archive: ") + e.what());
  }
  return a;
}

void write_archive(const std::filesystem::path& path, const CorpusArchive& archive) {
  io::write_file(path.string(), encode_archive(archive));
}

CorpusArchive read_archive(const std::filesystem::path& path) {
  return decode_archive(io::read_file(path.string()));
}

}  // namespace scat::corpus
