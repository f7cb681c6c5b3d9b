#pragma once

// Text normalization, tokenization and stemming for short Turkish texts.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "emotopic/csv.hpp"
#include "emotopic/error.hpp"

namespace emotopic {

using TermSet = std::set<std::string, std::less<>>;

namespace detail {

struct DecodedPoint {
  char32_t cp;
  std::size_t length;  // bytes consumed
  bool valid;
};

inline DecodedPoint decode_utf8(std::string_view s, std::size_t i) {
  auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
  unsigned char b0 = byte(i);
  if (b0 < 0x80) return {b0, 1, true};
  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {b0, 1, false};
  }
  if (i + len > s.size()) return {b0, 1, false};
  for (std::size_t k = 1; k < len; ++k) {
    unsigned char b = byte(i + k);
    if ((b & 0xC0) != 0x80) return {b0, 1, false};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len, true};
}

constexpr bool is_space_cp(char32_t c) {
  return c == ' ' || (c >= 0x09 && c <= 0x0D) || c == 0xA0 ||
         (c >= 0x2000 && c <= 0x200B) || c == 0x202F || c == 0x205F ||
         c == 0x3000 || c == 0xFEFF;
}

constexpr bool is_punct_cp(char32_t c) {
  if (c < 0x80)
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
           (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
  return c == 0xA1 || c == 0xA7 || c == 0xAB || c == 0xB6 || c == 0xB7 ||
         c == 0xBB || c == 0xBF || (c >= 0x2010 && c <= 0x2027) ||
         (c >= 0x2030 && c <= 0x205E);
}

// The six Turkish diacritic pairs, both cases. Returns 0 when unmapped.
constexpr char fold_turkish(char32_t c) {
  switch (c) {
    case 0x00C7: case 0x00E7: return 'c';
    case 0x011E: case 0x011F: return 'g';
    case 0x0130: case 0x0131: return 'i';
    case 0x00D6: case 0x00F6: return 'o';
    case 0x015E: case 0x015F: return 's';
    case 0x00DC: case 0x00FC: return 'u';
    default: return 0;
  }
}

}  // namespace detail

/// Lowercases ASCII, folds Turkish diacritics to ASCII, turns punctuation into
/// token boundaries, and collapses whitespace. Other code points (and invalid
/// UTF-8 bytes) are copied through unchanged.
inline std::string normalize(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  auto emit = [&](std::string_view piece) {
    if (pending_space && !out.empty()) out += ' ';
    pending_space = false;
    out += piece;
  };
  for (std::size_t i = 0; i < text.size();) {
    auto d = detail::decode_utf8(text, i);
    std::string_view raw = text.substr(i, d.length);
    i += d.length;
    if (!d.valid) {
      emit(raw);
      continue;
    }
    if (detail::is_space_cp(d.cp) || detail::is_punct_cp(d.cp)) {
      pending_space = true;
    } else if (char folded = detail::fold_turkish(d.cp)) {
      emit(std::string_view(&folded, 1));
    } else if (d.cp >= 'A' && d.cp <= 'Z') {
      char lower = static_cast<char>(d.cp - 'A' + 'a');
      emit(std::string_view(&lower, 1));
    } else {
      emit(raw);
    }
  }
  return out;
}

class Stemmer {
 public:
  virtual ~Stemmer() = default;
  virtual std::string stem(std::string_view token) const = 0;
  virtual std::string_view name() const = 0;
};

class IdentityStemmer final : public Stemmer {
 public:
  std::string stem(std::string_view token) const override { return std::string(token); }
  std::string_view name() const override { return "identity"; }
};

/// Strips the single longest matching suffix. A token equal to a suffix
/// stems to the empty string (and is then dropped by tokenize_filter).
class SuffixStemmer final : public Stemmer {
 public:
  explicit SuffixStemmer(std::vector<std::string> suffixes) : suffixes_(std::move(suffixes)) {
    std::erase_if(suffixes_, [](const std::string& s) { return s.empty(); });
    std::sort(suffixes_.begin(), suffixes_.end(), [](const auto& a, const auto& b) {
      return a.size() != b.size() ? a.size() > b.size() : a < b;
    });
    suffixes_.erase(std::unique(suffixes_.begin(), suffixes_.end()), suffixes_.end());
  }

  std::string stem(std::string_view token) const override {
    for (const auto& suffix : suffixes_)
      if (token.ends_with(suffix)) return std::string(token.substr(0, token.size() - suffix.size()));
    return std::string(token);
  }

  std::string_view name() const override { return "suffix"; }
  const std::vector<std::string>& suffixes() const noexcept { return suffixes_; }

 private:
  std::vector<std::string> suffixes_;
};

/// One entry per line; blank lines and lines starting with '#' are skipped.
inline std::vector<std::string> parse_word_list(std::string_view content) {
  std::vector<std::string> words;
  std::istringstream in{std::string(content)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t");
    line = line.substr(first, last - first + 1);
    if (line.starts_with('#')) continue;
    if (line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    words.push_back(std::move(line));
  }
  return words;
}

inline TermSet load_term_set(const std::string& path) {
  auto words = parse_word_list(read_file(path));
  return TermSet(words.begin(), words.end());
}

inline std::unique_ptr<SuffixStemmer> load_suffix_stemmer(const std::string& path) {
  return std::make_unique<SuffixStemmer>(parse_word_list(read_file(path)));
}

inline std::vector<std::string> tokenize_filter(std::string_view normalized,
                                                const TermSet& stopwords,
                                                const TermSet& noise_words,
                                                const Stemmer& stemmer) {
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  while (pos < normalized.size()) {
    auto end = normalized.find(' ', pos);
    if (end == std::string_view::npos) end = normalized.size();
    std::string_view tok = normalized.substr(pos, end - pos);
    pos = end + 1;
    if (tok.empty() || stopwords.contains(tok) || noise_words.contains(tok)) continue;
    std::string stemmed = stemmer.stem(tok);
    if (!stemmed.empty()) tokens.push_back(std::move(stemmed));
  }
  return tokens;
}

}  // namespace emotopic
