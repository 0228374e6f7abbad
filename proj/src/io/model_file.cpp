#include "scat/model_file.hpp"

#include <json.hpp>

#include "io/binary.hpp"
#include "scat/error.hpp"

namespace scat::io {
namespace {
constexpr std::string_view kMagic = "SCAT";
}

std::string encode_model(const ModelFile& m) {
  const auto& p = m.params;
  p.validate();
  if (m.vocab.size() != p.v) throw ValidationError("model file: vocabulary size does not match v");

  nlohmann::json manifest;
  manifest["h"] = p.h;
  manifest["v"] = p.v;
  manifest["k"] = p.k;
  manifest["variant"] = std::string(nn::to_string(p.variant));
  manifest["alpha"] = p.alpha;
  manifest["weighting"] = std::string(corpus::to_string(m.weighting));
  manifest["vocab"] = m.vocab;
  manifest["class_names"] = m.class_names;
  const std::string text = manifest.dump();

  ByteWriter w;
  w.put_raw(kMagic);
  w.put<std::uint32_t>(kModelFormatVersion);
  w.put<std::uint64_t>(text.size());
  w.put_raw(text);
  w.put_array(p.W.data(), p.W.size());
  w.put_array(p.b.data(), p.b.size());
  w.put_array(p.c.data(), p.c.size());
  return w.take();
}

ModelFile decode_model(std::string_view bytes) {
  ByteReader r(bytes, "model file");
  if (r.remaining() < kMagic.size() || r.get_raw(kMagic.size()) != kMagic) {
    throw FormatError("not a model file (bad magic)");
  }
  const auto version = r.get<std::uint32_t>();
  if (version != kModelFormatVersion) {
    throw FormatError("unsupported model format version " + std::to_string(version) + " (expected " +
                      std::to_string(kModelFormatVersion) + ")");
  }
  const auto len = r.get<std::uint64_t>();
  if (len > r.remaining()) throw FormatError("model file: manifest length exceeds file");

  ModelFile m;
  auto& p = m.params;
  try {
    const auto j = nlohmann::json::parse(r.get_raw(static_cast<std::size_t>(len)));
    p.h = j.at("h").get<std::size_t>();
    p.v = j.at("v").get<std::size_t>();
    p.k = j.at("k").get<std::size_t>();
    p.variant = nn::variant_from_string(j.at("variant").get<std::string>());
    p.alpha = j.at("alpha").get<double>();
    m.weighting = corpus::weighting_from_string(j.at("weighting").get<std::string>());
    m.vocab = j.at("vocab").get<std::vector<std::string>>();
    m.class_names = j.at("class_names").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("model file: bad manifest: ") + e.what());
  } catch (const ValidationError& e) {
    throw FormatError(std::string("model file: ") + e.what());
  }

  if (p.h == 0 || p.v == 0 || p.h > r.remaining() / sizeof(float) / p.v) {
    throw FormatError("model file: parameter sections do not match manifest dimensions");
  }
  const std::size_t expected = (p.h * p.v + p.h + p.v) * sizeof(float);
  if (r.remaining() != expected) {
    throw FormatError("model file: parameter sections do not match manifest dimensions");
  }
  p.W.resize(p.h * p.v);
  p.b.resize(p.h);
  p.c.resize(p.v);
  r.get_array(p.W.data(), p.W.size());
  r.get_array(p.b.data(), p.b.size());
  r.get_array(p.c.data(), p.c.size());

  if (m.vocab.size() != p.v) throw FormatError("model file: vocabulary size does not match v");
  try {
    p.validate();
  } catch (const Error& e) {
    throw FormatError(std::string("model file: ") + e.what());
  }
  return m;
}

void save_model(const std::filesystem::path& path, const ModelFile& model) {
  write_file(path.string(), encode_model(model));
}

ModelFile load_model(const std::filesystem::path& path) { return decode_model(read_file(path.string())); }

}  // namespace scat::io
