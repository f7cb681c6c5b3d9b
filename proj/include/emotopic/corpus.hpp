#pragma once

// Labeled documents as token-id sequences over a shared vocabulary, plus the
// bag-of-words matrices consumed by the topic models.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "emotopic/error.hpp"
#include "emotopic/random.hpp"
#include "emotopic/text.hpp"

namespace emotopic {

using TermId = std::uint32_t;
using ClassId = std::uint32_t;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct RawDocument {
  std::size_t id = 0;
  std::string text;
  std::optional<std::string> label;
};

class Vocabulary {
 public:
  Vocabulary() = default;

  /// `terms` must be unique; `df` is parallel to `terms`.
  Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> df)
      : terms_(std::move(terms)), df_(std::move(df)) {
    index_.reserve(terms_.size());
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      auto [it, inserted] = index_.emplace(terms_[i], static_cast<TermId>(i));
      if (!inserted) throw Error(Errc::invalid_params, "duplicate vocabulary term '" + terms_[i] + "'");
    }
    if (df_.size() != terms_.size()) df_.resize(terms_.size(), 0);
  }

  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }
  const std::string& term(TermId id) const { return terms_.at(id); }
  std::size_t df(TermId id) const { return df_.at(id); }
  std::span<const std::string> terms() const noexcept { return terms_; }
  std::span<const std::size_t> document_frequencies() const noexcept { return df_; }

  std::optional<TermId> find(std::string_view term) const {
    auto it = index_.find(std::string(term));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// FNV-1a over the newline-joined term list; identifies a vocabulary in
  /// persisted models.
  std::uint64_t hash() const noexcept {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const auto& t : terms_) {
      for (unsigned char c : t) {
        h ^= c;
        h *= 0x100000001B3ULL;
      }
      h ^= static_cast<unsigned char>('\n');
      h *= 0x100000001B3ULL;
    }
    return h;
  }

 private:
  std::vector<std::string> terms_;
  std::vector<std::size_t> df_;
  std::unordered_map<std::string, TermId> index_;
};

using VocabularyPtr = std::shared_ptr<const Vocabulary>;

struct Corpus {
  VocabularyPtr vocab = std::make_shared<Vocabulary>();
  std::vector<std::vector<TermId>> docs;
  std::vector<std::size_t> doc_ids;      // RawDocument ids, parallel to docs
  std::vector<ClassId> labels;           // empty when unlabeled
  std::vector<std::string> class_names;  // sorted
  std::vector<std::size_t> empty_docs;   // positions left with no tokens

  std::size_t size() const noexcept { return docs.size(); }
  bool labeled() const noexcept { return !class_names.empty() && labels.size() == docs.size(); }

  std::size_t token_count() const noexcept {
    std::size_t n = 0;
    for (const auto& d : docs) n += d.size();
    return n;
  }

  std::vector<std::size_t> class_counts() const {
    std::vector<std::size_t> counts(class_names.size(), 0);
    for (auto c : labels) ++counts[c];
    return counts;
  }

  std::vector<std::string> tokens_of(std::size_t d) const {
    std::vector<std::string> out;
    out.reserve(docs[d].size());
    for (auto t : docs[d]) out.push_back(vocab->term(t));
    return out;
  }
};

struct PreprocessConfig {
  TermSet stopwords;
  TermSet noise_words;
  std::shared_ptr<const Stemmer> stemmer = std::make_shared<IdentityStemmer>();
};

namespace detail {

inline void refresh_empty_docs(Corpus& c) {
  c.empty_docs.clear();
  for (std::size_t d = 0; d < c.docs.size(); ++d)
    if (c.docs[d].empty()) c.empty_docs.push_back(d);
}

inline std::vector<std::size_t> document_frequency(const std::vector<std::vector<TermId>>& docs,
                                                   std::size_t vocab_size) {
  std::vector<std::size_t> df(vocab_size, 0);
  std::vector<std::size_t> last_seen(vocab_size, static_cast<std::size_t>(-1));
  for (std::size_t d = 0; d < docs.size(); ++d)
    for (auto t : docs[d])
      if (last_seen[t] != d) {
        last_seen[t] = d;
        ++df[t];
      }
  return df;
}

}  // namespace detail

/// Builds a corpus from already-tokenized documents. Terms are numbered in
/// first-occurrence order. Class names are the sorted distinct labels.
inline Corpus corpus_from_tokens(const std::vector<std::vector<std::string>>& token_docs,
                                 std::vector<std::size_t> doc_ids = {},
                                 const std::vector<std::optional<std::string>>& labels = {}) {
  Corpus c;
  std::vector<std::string> terms;
  std::unordered_map<std::string, TermId> index;
  c.docs.reserve(token_docs.size());
  for (const auto& toks : token_docs) {
    std::vector<TermId> ids;
    ids.reserve(toks.size());
    for (const auto& t : toks) {
      auto [it, inserted] = index.emplace(t, static_cast<TermId>(terms.size()));
      if (inserted) terms.push_back(t);
      ids.push_back(it->second);
    }
    c.docs.push_back(std::move(ids));
  }
  auto df = detail::document_frequency(c.docs, terms.size());
  c.vocab = std::make_shared<Vocabulary>(std::move(terms), std::move(df));

  if (doc_ids.empty()) {
    doc_ids.resize(token_docs.size());
    for (std::size_t i = 0; i < doc_ids.size(); ++i) doc_ids[i] = i;
  }
  c.doc_ids = std::move(doc_ids);

  if (!labels.empty()) {
    std::size_t present = std::count_if(labels.begin(), labels.end(),
                                        [](const auto& l) { return l.has_value(); });
    if (present != 0 && present != labels.size())
      throw Error(Errc::mixed_labels, "some documents are labeled and some are not");
    if (present != 0) {
      std::vector<std::string> names;
      for (const auto& l : labels) names.push_back(*l);
      std::sort(names.begin(), names.end());
      names.erase(std::unique(names.begin(), names.end()), names.end());
      c.class_names = names;
      for (const auto& l : labels)
        c.labels.push_back(static_cast<ClassId>(
            std::lower_bound(names.begin(), names.end(), *l) - names.begin()));
    }
  }
  detail::refresh_empty_docs(c);
  return c;
}

/// Normalizes, filters and stems every document. Documents that end up empty
/// are kept (with no tokens) and listed in Corpus::empty_docs.
inline Corpus build_corpus(std::span<const RawDocument> raw, const PreprocessConfig& config) {
  std::vector<std::vector<std::string>> token_docs;
  std::vector<std::size_t> ids;
  std::vector<std::optional<std::string>> labels;
  token_docs.reserve(raw.size());
  for (const auto& doc : raw) {
    token_docs.push_back(tokenize_filter(normalize(doc.text), config.stopwords,
                                         config.noise_words, *config.stemmer));
    ids.push_back(doc.id);
    labels.push_back(doc.label);
  }
  Corpus c = corpus_from_tokens(token_docs, std::move(ids), labels);
  if (c.token_count() == 0)
    throw Error(Errc::empty_corpus, "no document has a token left after preprocessing");
  return c;
}

/// Sub-corpus over the documents at `positions`, with a vocabulary rebuilt
/// from those documents only. Class names are preserved.
inline Corpus subset(const Corpus& c, std::span<const std::size_t> positions) {
  std::vector<std::vector<std::string>> toks;
  std::vector<std::size_t> ids;
  toks.reserve(positions.size());
  for (auto p : positions) {
    toks.push_back(c.tokens_of(p));
    ids.push_back(c.doc_ids[p]);
  }
  Corpus out = corpus_from_tokens(toks, std::move(ids));
  out.class_names = c.class_names;
  if (c.labeled())
    for (auto p : positions) out.labels.push_back(c.labels[p]);
  return out;
}

/// Keeps only `retained` term ids (in their existing order); documents keep
/// the surviving tokens in order. Document frequencies are recomputed.
inline Corpus restrict_vocabulary(const Corpus& c, std::span<const TermId> retained) {
  std::vector<TermId> keep(retained.begin(), retained.end());
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  constexpr auto kDropped = static_cast<TermId>(-1);
  std::vector<TermId> remap(c.vocab->size(), kDropped);
  std::vector<std::string> terms;
  for (auto t : keep) {
    if (t >= c.vocab->size()) throw Error(Errc::index_out_of_range, "retained term id out of range");
    remap[t] = static_cast<TermId>(terms.size());
    terms.push_back(c.vocab->term(t));
  }
  Corpus out;
  out.docs.reserve(c.docs.size());
  for (const auto& doc : c.docs) {
    std::vector<TermId> ids;
    for (auto t : doc)
      if (remap[t] != kDropped) ids.push_back(remap[t]);
    out.docs.push_back(std::move(ids));
  }
  auto df = detail::document_frequency(out.docs, terms.size());
  out.vocab = std::make_shared<Vocabulary>(std::move(terms), std::move(df));
  out.doc_ids = c.doc_ids;
  out.labels = c.labels;
  out.class_names = c.class_names;
  detail::refresh_empty_docs(out);
  return out;
}

/// Re-expresses `c` over another vocabulary, dropping out-of-vocabulary
/// tokens. The result shares `target` (whose df refers to the corpus that
/// produced it).
inline Corpus project_onto(const Corpus& c, const VocabularyPtr& target) {
  if (c.vocab == target) return c;
  std::vector<std::optional<TermId>> remap(c.vocab->size());
  for (TermId t = 0; t < c.vocab->size(); ++t) remap[t] = target->find(c.vocab->term(t));
  Corpus out;
  out.vocab = target;
  out.docs.reserve(c.docs.size());
  for (const auto& doc : c.docs) {
    std::vector<TermId> ids;
    for (auto t : doc)
      if (remap[t]) ids.push_back(*remap[t]);
    out.docs.push_back(std::move(ids));
  }
  out.doc_ids = c.doc_ids;
  out.labels = c.labels;
  out.class_names = c.class_names;
  detail::refresh_empty_docs(out);
  return out;
}

enum class MatrixMode { counts, tfidf };

constexpr std::string_view matrix_mode_name(MatrixMode m) {
  return m == MatrixMode::counts ? "counts" : "tfidf";
}

struct TermMatrix {
  RowMatrix values;  // D x V, docs by terms
  MatrixMode mode = MatrixMode::counts;
  VocabularyPtr vocab;
};

/// counts: occurrences of t in d. tfidf: raw count * ln(D / df(t)), with df
/// taken over this corpus.
inline TermMatrix to_term_matrix(const Corpus& c, MatrixMode mode) {
  if (c.docs.empty() || c.vocab->empty())
    throw Error(Errc::empty_corpus, "cannot build a term matrix from an empty corpus");
  const auto D = static_cast<Eigen::Index>(c.docs.size());
  const auto V = static_cast<Eigen::Index>(c.vocab->size());
  TermMatrix m{RowMatrix::Zero(D, V), mode, c.vocab};
  for (Eigen::Index d = 0; d < D; ++d)
    for (auto t : c.docs[static_cast<std::size_t>(d)]) m.values(d, t) += 1.0;
  if (mode == MatrixMode::tfidf) {
    auto df = detail::document_frequency(c.docs, c.vocab->size());
    for (Eigen::Index t = 0; t < V; ++t) {
      auto n = df[static_cast<std::size_t>(t)];
      double idf = n == 0 ? 0.0 : std::log(static_cast<double>(D) / static_cast<double>(n));
      m.values.col(t) *= idf;
    }
  }
  return m;
}

/// Stratified split: within each class, documents are shuffled with `seed`
/// and the first round(fraction * n_class) go to training. Both sides keep
/// corpus order and get their own vocabulary.
inline std::pair<Corpus, Corpus> split_train_test(const Corpus& c, double train_fraction,
                                                  std::uint64_t seed) {
  if (!c.labeled()) throw Error(Errc::unlabeled_corpus, "split_train_test needs class labels");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw Error(Errc::invalid_params, "train fraction must lie strictly between 0 and 1");
  Xorshift64Star rng(seed);
  std::vector<std::vector<std::size_t>> by_class(c.class_names.size());
  for (std::size_t d = 0; d < c.docs.size(); ++d) by_class[c.labels[d]].push_back(d);
  std::vector<std::size_t> train, test;
  for (auto& members : by_class) {
    rng.shuffle(std::span(members));
    auto n_train = static_cast<std::size_t>(
        std::floor(train_fraction * static_cast<double>(members.size()) + 0.5));
    train.insert(train.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_train));
    test.insert(test.end(), members.begin() + static_cast<std::ptrdiff_t>(n_train), members.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {subset(c, train), subset(c, test)};
}

}  // namespace emotopic
