#pragma once

// Latent Dirichlet allocation fitted by collapsed Gibbs sampling, UMass
// topic coherence, and coherence-driven selection of the topic count.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "emotopic/corpus.hpp"
#include "emotopic/random.hpp"
#include "emotopic/topic_model.hpp"

namespace emotopic {

/// Topic assignments and the count tables they induce. Tables are flat,
/// row-major: n_dk is D x K, n_kw is K x V.
struct GibbsState {
  std::size_t topics = 0;
  std::size_t vocab_size = 0;
  std::vector<std::vector<std::uint32_t>> z;
  std::vector<std::uint32_t> n_dk;
  std::vector<std::uint32_t> n_kw;
  std::vector<std::uint32_t> n_k;

  std::uint32_t doc_topic(std::size_t d, std::size_t k) const { return n_dk[d * topics + k]; }
  std::uint32_t topic_word(std::size_t k, std::size_t w) const { return n_kw[k * vocab_size + w]; }
};

class GibbsSampler {
 public:
  GibbsSampler(const Corpus& corpus, const LdaParams& params)
      : corpus_(corpus), params_(params), alpha_(params.effective_alpha()), rng_(params.seed) {
    params_.validate();
    if (corpus.token_count() == 0)
      throw Error(Errc::empty_corpus, "LDA needs at least one token");
    const std::size_t K = params_.topics;
    const std::size_t V = corpus.vocab->size();
    const std::size_t D = corpus.docs.size();
    state_.topics = K;
    state_.vocab_size = V;
    state_.z.resize(D);
    state_.n_dk.assign(D * K, 0);
    state_.n_kw.assign(K * V, 0);
    state_.n_k.assign(K, 0);
    for (std::size_t d = 0; d < D; ++d) {
      const auto& doc = corpus.docs[d];
      state_.z[d].resize(doc.size());
      for (std::size_t i = 0; i < doc.size(); ++i) {
        auto k = static_cast<std::uint32_t>(rng_.below(K));
        state_.z[d][i] = k;
        ++state_.n_dk[d * K + k];
        ++state_.n_kw[k * V + doc[i]];
        ++state_.n_k[k];
      }
    }
    sum_dk_.assign(D * K, 0);
    sum_kw_.assign(K * V, 0);
    weights_.resize(K);
  }

  /// Resamples every token once, documents and positions in order.
  void sweep() {
    const std::size_t K = state_.topics;
    const std::size_t V = state_.vocab_size;
    const double beta = params_.beta;
    const double v_beta = static_cast<double>(V) * beta;
    for (std::size_t d = 0; d < corpus_.docs.size(); ++d) {
      const auto& doc = corpus_.docs[d];
      auto* n_dk = &state_.n_dk[d * K];
      for (std::size_t i = 0; i < doc.size(); ++i) {
        const TermId w = doc[i];
        std::uint32_t old_k = state_.z[d][i];
        --n_dk[old_k];
        --state_.n_kw[old_k * V + w];
        --state_.n_k[old_k];

        double total = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
          total += (n_dk[k] + alpha_) * (state_.n_kw[k * V + w] + beta) / (state_.n_k[k] + v_beta);
          weights_[k] = total;
        }
        const double u = rng_.uniform() * total;
        std::uint32_t new_k = static_cast<std::uint32_t>(K - 1);
        for (std::size_t k = 0; k < K; ++k)
          if (u < weights_[k]) {
            new_k = static_cast<std::uint32_t>(k);
            break;
          }

        state_.z[d][i] = new_k;
        ++n_dk[new_k];
        ++state_.n_kw[new_k * V + w];
        ++state_.n_k[new_k];
      }
    }
    ++sweeps_;
  }

  /// Adds the current counts to the running estimate.
  void accumulate() {
    for (std::size_t i = 0; i < sum_dk_.size(); ++i) sum_dk_[i] += state_.n_dk[i];
    for (std::size_t i = 0; i < sum_kw_.size(); ++i) sum_kw_[i] += state_.n_kw[i];
    ++samples_;
  }

  const GibbsState& state() const noexcept { return state_; }
  std::size_t sweeps() const noexcept { return sweeps_; }
  std::size_t samples() const noexcept { return samples_; }

  /// phi(k,w) = (avg n_kw + beta) / (avg n_k + V beta),
  /// theta(d,k) = (avg n_dk + alpha) / (len_d + K alpha).
  /// Falls back to the current state when nothing was accumulated.
  TopicModel estimate(std::string method_tag = "lda") const {
    const std::size_t K = state_.topics;
    const std::size_t V = state_.vocab_size;
    const std::size_t D = corpus_.docs.size();
    const bool averaged = samples_ > 0;
    const double S = averaged ? static_cast<double>(samples_) : 1.0;
    auto kw = [&](std::size_t k, std::size_t w) {
      return averaged ? static_cast<double>(sum_kw_[k * V + w]) : static_cast<double>(state_.n_kw[k * V + w]);
    };
    auto dk = [&](std::size_t d, std::size_t k) {
      return averaged ? static_cast<double>(sum_dk_[d * K + k]) : static_cast<double>(state_.n_dk[d * K + k]);
    };
    TopicModel m;
    m.phi.resize(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(V));
    m.theta.resize(static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(K));
    const double beta = params_.beta;
    for (std::size_t k = 0; k < K; ++k) {
      double row_total = 0.0;
      for (std::size_t w = 0; w < V; ++w) row_total += kw(k, w);
      const double denom = row_total / S + static_cast<double>(V) * beta;
      for (std::size_t w = 0; w < V; ++w)
        m.phi(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(w)) = (kw(k, w) / S + beta) / denom;
    }
    for (std::size_t d = 0; d < D; ++d) {
      const double denom = static_cast<double>(corpus_.docs[d].size()) + static_cast<double>(K) * alpha_;
      for (std::size_t k = 0; k < K; ++k)
        m.theta(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(k)) = (dk(d, k) / S + alpha_) / denom;
    }
    m.method_tag = std::move(method_tag);
    m.vocab = corpus_.vocab;
    m.params = params_;
    return m;
  }

 private:
  const Corpus& corpus_;
  LdaParams params_;
  double alpha_;
  Xorshift64Star rng_;
  GibbsState state_;
  std::vector<std::uint64_t> sum_dk_;
  std::vector<std::uint64_t> sum_kw_;
  std::vector<double> weights_;
  std::size_t sweeps_ = 0;
  std::size_t samples_ = 0;
};

/// Runs `iterations` sweeps and averages the counts of every sweep after
/// `burn_in`.
inline TopicModel fit_lda(const Corpus& corpus, const LdaParams& params,
                          std::string method_tag = "lda") {
  GibbsSampler sampler(corpus, params);
  for (std::size_t s = 1; s <= params.iterations; ++s) {
    sampler.sweep();
    if (s > params.burn_in) sampler.accumulate();
  }
  return sampler.estimate(std::move(method_tag));
}

struct CoherenceResult {
  std::vector<double> per_topic;
  double mean = 0.0;
};

/// UMass coherence over each topic's `top_n` words w_1..w_n (by descending
/// phi): sum_{i>=2} sum_{j<i} ln((D(w_i, w_j) + 1) / D(w_j)), with document
/// counts taken from `corpus` (projected onto the model's vocabulary).
inline CoherenceResult coherence(const TopicModel& model, const Corpus& corpus,
                                 std::size_t top_n = 10) {
  if (top_n < 2) throw Error(Errc::invalid_params, "coherence needs top_n >= 2");
  const Corpus projected = project_onto(corpus, model.vocab);

  // Sorted, de-duplicated document lists per term, built lazily.
  std::vector<std::vector<std::uint32_t>> postings(model.vocab_size());
  std::vector<bool> wanted(model.vocab_size(), false);
  std::vector<std::vector<WeightedTerm>> tops;
  for (std::size_t k = 0; k < model.topics(); ++k) {
    tops.push_back(top_words(model, k, top_n));
    for (const auto& wt : tops.back()) wanted[wt.term] = true;
  }
  for (std::size_t d = 0; d < projected.docs.size(); ++d)
    for (auto t : projected.docs[d])
      if (wanted[t] && (postings[t].empty() || postings[t].back() != d))
        postings[t].push_back(static_cast<std::uint32_t>(d));

  auto co_count = [&](TermId a, TermId b) {
    const auto& pa = postings[a];
    const auto& pb = postings[b];
    std::size_t n = 0;
    for (std::size_t i = 0, j = 0; i < pa.size() && j < pb.size();) {
      if (pa[i] < pb[j]) ++i;
      else if (pb[j] < pa[i]) ++j;
      else { ++n; ++i; ++j; }
    }
    return n;
  };

  CoherenceResult result;
  for (std::size_t k = 0; k < tops.size(); ++k) {
    const auto& top = tops[k];
    double c = 0.0;
    for (std::size_t i = 1; i < top.size(); ++i)
      for (std::size_t j = 0; j < i; ++j) {
        const auto dj = postings[top[j].term].size();
        if (dj == 0)
          throw Error(Errc::degenerate_topic, "topic " + std::to_string(k) + " ranks a term absent from the corpus");
        c += std::log((static_cast<double>(co_count(top[i].term, top[j].term)) + 1.0) /
                      static_cast<double>(dj));
      }
    result.per_topic.push_back(c);
  }
  double sum = 0.0;
  for (double c : result.per_topic) sum += c;
  result.mean = result.per_topic.empty() ? 0.0 : sum / static_cast<double>(result.per_topic.size());
  return result;
}

struct CoherenceScan {
  std::vector<std::size_t> grid;
  std::vector<double> scores;
  std::size_t chosen_k = 0;
};

/// Argmax over scores; exact ties go to the smaller K.
inline std::size_t choose_topic_count(std::span<const std::size_t> grid, std::span<const double> scores) {
  if (grid.empty() || grid.size() != scores.size())
    throw Error(Errc::invalid_params, "topic-count grid and scores must be non-empty and aligned");
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (scores[i] > scores[best] || (scores[i] == scores[best] && grid[i] < grid[best])) best = i;
  return grid[best];
}

/// Fits one model per candidate K (same seed) and keeps the K with the
/// highest mean coherence.
inline CoherenceScan select_topic_count(const Corpus& corpus, std::span<const std::size_t> grid,
                                        const LdaParams& params_base, std::size_t top_n = 10) {
  if (grid.empty()) throw Error(Errc::invalid_params, "topic-count grid is empty");
  for (auto k : grid)
    if (k < 2) throw Error(Errc::invalid_params, "topic-count grid entries must be >= 2");
  CoherenceScan scan;
  scan.grid.assign(grid.begin(), grid.end());
  for (auto k : grid) {
    LdaParams p = params_base;
    p.topics = k;
    scan.scores.push_back(coherence(fit_lda(corpus, p), corpus, top_n).mean);
  }
  scan.chosen_k = choose_topic_count(scan.grid, scan.scores);
  return scan;
}

}  // namespace emotopic
