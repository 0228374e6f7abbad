#pragma once

// Scratch directories and tiny on-disk corpora for tests.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

namespace fixtures {

namespace fs = std::filesystem;

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            ("scat_" + tag + "_" + std::to_string(rd()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string message(const std::string& body) {
  return "From: someone@example.com\nSubject: filler header words\n\n" + body + "\n";
}

// Per class, `per_class` messages built from that class's word list plus a
// couple of shared words.
inline void write_class_corpus(const fs::path& root, const std::vector<std::string>& classes,
                               const std::vector<std::vector<std::string>>& words, std::size_t per_class,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    std::uniform_int_distribution<std::size_t> pick(0, words[c].size() - 1);
    for (std::size_t d = 0; d < per_class; ++d) {
      std::string body = "common shared ";
      for (int t = 0; t < 8; ++t) body += words[c][pick(rng)] + " ";
      write_text(root / classes[c] / std::to_string(1000 + d), message(body));
    }
  }
}

inline const std::vector<std::vector<std::string>>& toy_words() {
  static const std::vector<std::vector<std::string>> w{
      {"god", "bible", "jesus", "church", "faith", "heaven"},
      {"hockey", "team", "game", "season", "players", "league"}};
  return w;
}

}  // namespace fixtures
