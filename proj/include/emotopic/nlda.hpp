#pragma once

// n-stage LDA: after each fit, drop every term whose weight falls below its
// topic's mean weight in all topics, rebuild the dictionary, and refit.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "emotopic/lda.hpp"

namespace emotopic {

enum class PruneScope { all, top_m };

struct PruneOptions {
  PruneScope scope = PruneScope::all;
  std::size_t top_m = 100;
};

/// Arithmetic mean, accumulated in extended precision so that a list of
/// identical weights has exactly that weight as its mean.
inline double topic_threshold(std::span<const double> weights) {
  if (weights.empty()) throw Error(Errc::empty_topic, "threshold of an empty topic");
  long double sum = 0.0L;
  for (double w : weights) sum += w;
  return static_cast<double>(sum / static_cast<long double>(weights.size()));
}

struct PruneResult {
  std::vector<double> thresholds;  // per topic
  std::vector<TermId> retained;    // ascending ids of the pruned model's vocabulary
};

namespace detail {

// The weights a topic's threshold is computed over, as (term, weight).
inline std::vector<WeightedTerm> considered_weights(const TopicModel& model, std::size_t k,
                                                    const PruneOptions& opts) {
  if (opts.scope == PruneScope::top_m) return top_words(model, k, opts.top_m);
  std::vector<WeightedTerm> all;
  all.reserve(model.vocab_size());
  for (std::size_t w = 0; w < model.vocab_size(); ++w)
    all.push_back({static_cast<TermId>(w), model.phi(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(w))});
  return all;
}

}  // namespace detail

/// A term survives iff its weight is >= the threshold of at least one topic
/// (among the weights that topic considers).
inline PruneResult prune_vocabulary(const TopicModel& model, const PruneOptions& opts = {}) {
  PruneResult result;
  std::vector<bool> keep(model.vocab_size(), false);
  std::vector<double> weights;
  for (std::size_t k = 0; k < model.topics(); ++k) {
    auto considered = detail::considered_weights(model, k, opts);
    weights.clear();
    for (const auto& wt : considered) weights.push_back(wt.weight);
    const double threshold = topic_threshold(weights);
    result.thresholds.push_back(threshold);
    for (const auto& wt : considered)
      if (wt.weight >= threshold) keep[wt.term] = true;
  }
  for (std::size_t w = 0; w < keep.size(); ++w)
    if (keep[w]) result.retained.push_back(static_cast<TermId>(w));
  if (result.retained.empty()) throw Error(Errc::empty_prune, "pruning removed every term");
  return result;
}

struct TrackedWeight {
  std::string term;
  std::optional<double> max_phi;  // empty once the term has been pruned
};

struct StageReport {
  std::size_t stage = 0;         // 1-based
  std::size_t vocab_before = 0;  // dictionary size entering this stage
  std::size_t vocab_after = 0;   // dictionary size of this stage's model
  std::vector<double> thresholds;  // of this stage's model; they prune the next stage
  std::vector<std::string> retained_terms;
  std::vector<TrackedWeight> tracked;
};

struct NldaResult {
  TopicModel final_model;
  std::vector<StageReport> stage_reports;
  Corpus final_corpus;
};

/// Raised when a stage cannot continue; carries the reports of the stages
/// that completed.
class NldaAborted : public Error {
 public:
  NldaAborted(const Error& cause, std::vector<StageReport> partial)
      : Error(cause.code(), cause.what()), partial_(std::move(partial)) {}
  const std::vector<StageReport>& partial_reports() const noexcept { return partial_; }

 private:
  std::vector<StageReport> partial_;
};

/// Stage 1 is a classical fit with `params`; every later stage prunes the
/// previous model, reprojects the corpus and refits cold with seed + (stage - 1).
inline NldaResult run_nlda(const Corpus& corpus, const LdaParams& params, std::size_t stages,
                           const PruneOptions& opts = {},
                           std::span<const std::string> tracked_terms = {}) {
  if (stages < 1) throw Error(Errc::invalid_params, "n-stage LDA needs at least one stage");
  params.validate();
  std::vector<StageReport> reports;
  Corpus current = corpus;
  std::optional<TopicModel> model;
  for (std::size_t s = 1; s <= stages; ++s) {
    const std::size_t before = current.vocab->size();
    if (model) {
      try {
        auto pruned = prune_vocabulary(*model, opts);
        if (pruned.retained.size() < params.topics)
          throw Error(Errc::vocabulary_collapse,
                      "stage " + std::to_string(s) + " keeps " + std::to_string(pruned.retained.size()) +
                          " terms, fewer than " + std::to_string(params.topics) + " topics");
        current = restrict_vocabulary(current, pruned.retained);
      } catch (const Error& e) {
        throw NldaAborted(e, std::move(reports));
      }
    }
    LdaParams stage_params = params;
    stage_params.seed = params.seed + (s - 1);
    model = fit_lda(current, stage_params, "nlda-stage-" + std::to_string(s));

    StageReport r;
    r.stage = s;
    r.vocab_before = before;
    r.vocab_after = current.vocab->size();
    for (std::size_t k = 0; k < model->topics(); ++k) {
      std::vector<double> w;
      for (const auto& wt : detail::considered_weights(*model, k, opts)) w.push_back(wt.weight);
      r.thresholds.push_back(topic_threshold(w));
    }
    r.retained_terms.assign(current.vocab->terms().begin(), current.vocab->terms().end());
    for (const auto& term : tracked_terms) {
      TrackedWeight tw{term, std::nullopt};
      if (auto id = current.vocab->find(term)) tw.max_phi = model->phi.col(*id).maxCoeff();
      r.tracked.push_back(std::move(tw));
    }
    reports.push_back(std::move(r));
  }
  return {std::move(*model), std::move(reports), std::move(current)};
}

}  // namespace emotopic
