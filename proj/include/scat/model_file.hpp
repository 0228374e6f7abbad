#pragma once

// Model file layout (little-endian):
//   "SCAT", uint32 format version
//   uint64 manifest length, JSON manifest
//     {h, v, k, variant, alpha, weighting, vocab, class_names}
//   float32 W (h*v, row-major), float32 b (h), float32 c (v)

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "scat/autoencoder.hpp"
#include "scat/corpus.hpp"

namespace scat::io {

inline constexpr std::uint32_t kModelFormatVersion = 1;

struct ModelFile {
  nn::ModelParams<float> params;
  corpus::Weighting weighting = corpus::Weighting::log_normalized_tf;
  std::vector<std::string> vocab;
  std::vector<std::string> class_names;

  bool operator==(const ModelFile&) const = default;
};

std::string encode_model(const ModelFile& model);
/// Throws FormatError on wrong magic, unsupported version, or size mismatch.
ModelFile decode_model(std::string_view bytes);

void save_model(const std::filesystem::path& path, const ModelFile& model);
ModelFile load_model(const std::filesystem::path& path);

}  // namespace scat::io
