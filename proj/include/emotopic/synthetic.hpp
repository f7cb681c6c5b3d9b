#pragma once

// Deterministic labeled corpora with one disjoint keyword set per class plus
// a pool of shared noise terms drawn with Zipf-like frequencies.

#include <cstdint>
#include <string>
#include <vector>

#include "emotopic/corpus.hpp"
#include "emotopic/random.hpp"

namespace emotopic {

struct SyntheticClass {
  std::string label;
  std::string stem;  // raw (possibly accented) keyword stem
};

struct SyntheticSpec {
  std::vector<SyntheticClass> classes{{"angry", "kızgın"}, {"happy", "mutlu"}, {"sad", "üzgün"}};
  std::size_t docs_per_class = 100;
  std::size_t keywords_per_class = 20;
  std::size_t noise_terms = 30;
  std::string noise_stem = "gürültü";
  std::size_t keywords_per_doc = 4;
  std::size_t noise_per_doc = 4;
  /// Adds capitalization, punctuation, stopwords ("ve", "bir", "çok", "bu")
  /// and inflection suffixes ("lar", "ler", "yum") to the raw text.
  bool decorate = false;
  std::uint64_t seed = 7;
};

/// Two-letter code for index i (distinct for i < 400).
inline std::string synthetic_code(std::size_t i) {
  static constexpr std::string_view kLetters = "abcdefghjkmnoprstvyz";
  return {kLetters[(i / kLetters.size()) % kLetters.size()], kLetters[i % kLetters.size()]};
}

inline std::string synthetic_keyword(const SyntheticSpec& spec, std::size_t cls, std::size_t i) {
  return spec.classes.at(cls).stem + synthetic_code(i);
}

inline std::string synthetic_noise(const SyntheticSpec& spec, std::size_t i) {
  return spec.noise_stem + synthetic_code(i);
}

/// Documents are emitted class by class, interleaved round-robin.
inline std::vector<RawDocument> make_synthetic(const SyntheticSpec& spec) {
  Xorshift64Star rng(spec.seed);
  std::vector<double> zipf_cdf;
  double total = 0.0;
  for (std::size_t i = 0; i < spec.noise_terms; ++i) {
    total += 1.0 / static_cast<double>(i + 1);
    zipf_cdf.push_back(total);
  }
  auto draw_noise = [&] {
    const double u = rng.uniform() * total;
    for (std::size_t i = 0; i < zipf_cdf.size(); ++i)
      if (u < zipf_cdf[i]) return i;
    return zipf_cdf.size() - 1;
  };
  static const std::vector<std::string> stop{"ve", "bir", "çok", "bu"};
  static const std::vector<std::string> punct{"!", ",", "...", "?", "!!"};
  static const std::vector<std::string> inflect{"lar", "ler", "yum"};

  std::vector<RawDocument> docs;
  for (std::size_t n = 0; n < spec.docs_per_class; ++n) {
    for (std::size_t c = 0; c < spec.classes.size(); ++c) {
      std::vector<std::string> words;
      for (std::size_t i = 0; i < spec.keywords_per_doc; ++i)
        words.push_back(synthetic_keyword(spec, c, rng.below(spec.keywords_per_class)));
      for (std::size_t i = 0; i < spec.noise_per_doc && spec.noise_terms > 0; ++i)
        words.push_back(synthetic_noise(spec, draw_noise()));
      rng.shuffle(std::span(words));

      std::string text;
      for (std::size_t i = 0; i < words.size(); ++i) {
        std::string w = words[i];
        if (spec.decorate) {
          if (rng.uniform() < 0.2) w += inflect[rng.below(inflect.size())];
          if (rng.uniform() < 0.15 && static_cast<unsigned char>(w[0]) < 0x80)
            w[0] = static_cast<char>(w[0] - 'a' + 'A');
          if (rng.uniform() < 0.25) text += stop[rng.below(stop.size())] + " ";
        }
        text += w;
        if (spec.decorate && rng.uniform() < 0.2) text += punct[rng.below(punct.size())];
        if (i + 1 < words.size()) text += ' ';
      }
      docs.push_back({docs.size(), std::move(text), spec.classes[c].label});
    }
  }
  return docs;
}

}  // namespace emotopic
