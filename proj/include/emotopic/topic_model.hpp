#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "emotopic/corpus.hpp"
#include "emotopic/error.hpp"

namespace emotopic {

struct LdaParams {
  std::size_t topics = 10;
  std::optional<double> alpha;  // unset: 50 / topics
  double beta = 0.01;
  std::size_t iterations = 1000;
  std::size_t burn_in = 200;
  std::uint64_t seed = 1;

  double effective_alpha() const {
    return alpha ? *alpha : 50.0 / static_cast<double>(topics);
  }

  void validate() const {
    if (topics < 1) throw Error(Errc::invalid_params, "LDA needs at least one topic");
    if (!(effective_alpha() > 0.0)) throw Error(Errc::invalid_params, "alpha must be > 0");
    if (!(beta > 0.0)) throw Error(Errc::invalid_params, "beta must be > 0");
    if (iterations <= burn_in)
      throw Error(Errc::invalid_params, "iterations must exceed burn_in");
  }
};

struct NmfParams {
  std::size_t rank = 10;
  std::size_t iterations = 500;
  double tol = 1e-6;
  std::uint64_t seed = 1;
  double init_scale = 1.0;

  void validate() const {
    if (rank < 1) throw Error(Errc::invalid_params, "NMF rank must be >= 1");
    if (iterations < 1) throw Error(Errc::invalid_params, "NMF needs at least one iteration");
    if (!(tol >= 0.0)) throw Error(Errc::invalid_params, "NMF tolerance must be >= 0");
    if (!(init_scale > 0.0)) throw Error(Errc::invalid_params, "NMF init_scale must be > 0");
  }
};

/// Topic-word weights (phi, K x V) and document-topic weights (theta, D x K)
/// from any of the back-ends. LDA rows are probability vectors; NMF models
/// are row-normalized on conversion (see as_topic_model).
struct TopicModel {
  RowMatrix phi;
  RowMatrix theta;
  std::string method_tag;  // "lda", "nlda-stage-<i>", "nmf"
  VocabularyPtr vocab;
  std::variant<LdaParams, NmfParams> params;
  std::vector<std::size_t> degenerate_topics;
  std::vector<std::size_t> degenerate_docs;

  std::size_t topics() const noexcept { return static_cast<std::size_t>(phi.rows()); }
  std::size_t vocab_size() const noexcept { return static_cast<std::size_t>(phi.cols()); }
};

struct WeightedTerm {
  TermId term;
  double weight;
  friend bool operator==(const WeightedTerm&, const WeightedTerm&) = default;
};

/// Highest-weight terms of a topic, descending; ties go to the lower term id.
/// `n` larger than the vocabulary returns every term.
inline std::vector<WeightedTerm> top_words(const TopicModel& model, std::size_t topic,
                                           std::size_t n) {
  if (topic >= model.topics())
    throw Error(Errc::index_out_of_range, "topic " + std::to_string(topic) + " out of range");
  if (n < 1) throw Error(Errc::invalid_params, "top_words needs n >= 1");
  const std::size_t V = model.vocab_size();
  std::vector<TermId> ids(V);
  std::iota(ids.begin(), ids.end(), TermId{0});
  auto row = model.phi.row(static_cast<Eigen::Index>(topic));
  auto by_weight = [&](TermId a, TermId b) {
    return row(a) != row(b) ? row(a) > row(b) : a < b;
  };
  n = std::min(n, V);
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n), ids.end(), by_weight);
  std::vector<WeightedTerm> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back({ids[i], row(ids[i])});
  return out;
}

}  // namespace emotopic
