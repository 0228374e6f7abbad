#include <fstream>

#include "scat/corpus.hpp"
#include "scat/error.hpp"

namespace scat::corpus {
namespace {

constexpr bool is_ascii_alpha(unsigned char c) noexcept {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

constexpr char ascii_lower(unsigned char c) noexcept {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
}

}  // namespace

// Non-ASCII bytes (UTF-8 continuation or latin-1) act as separators. Digit runs
// never enter a token, so purely numeric runs drop out on their own.
std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (cur.size() >= 2) out.push_back(cur);
    cur.clear();
  };
  for (unsigned char c : text) {
    if (is_ascii_alpha(c)) {
      cur.push_back(ascii_lower(c));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

std::string_view strip_message_header(std::string_view message) {
  std::size_t pos = 0;
  while (pos < message.size()) {
    std::size_t eol = message.find('\n', pos);
    if (eol == std::string_view::npos) return {};
    std::string_view line = message.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) return message.substr(eol + 1);
    pos = eol + 1;
  }
  return {};
}

std::set<std::string> read_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open stopword file: " + path.string());
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    std::string w = line.substr(first, last - first + 1);
    for (auto& ch : w) ch = ascii_lower(static_cast<unsigned char>(ch));
    words.insert(std::move(w));
  }
  return words;
}

}  // namespace scat::corpus
