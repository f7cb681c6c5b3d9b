#pragma once

// Bagged CART trees with Gini splits.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "emotopic/ml/features.hpp"
#include "emotopic/random.hpp"

namespace emotopic {

struct ForestParams {
  std::size_t trees = 100;
  std::size_t max_depth = 0;           // 0: unlimited
  std::size_t min_leaf = 1;
  std::size_t features_per_split = 0;  // 0: ceil(sqrt(features))
  std::uint64_t seed = 1;

  void validate() const {
    if (trees < 1) throw Error(Errc::invalid_params, "random forest needs at least one tree");
    if (min_leaf < 1) throw Error(Errc::invalid_params, "min_leaf must be >= 1");
  }

  std::size_t split_features(std::size_t features) const {
    std::size_t m = features_per_split;
    if (m == 0) m = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(features))));
    return std::clamp<std::size_t>(m, 1, std::max<std::size_t>(features, 1));
  }
};

struct TreeNode {
  static constexpr std::uint32_t kLeaf = static_cast<std::uint32_t>(-1);
  std::uint32_t feature = kLeaf;
  double threshold = 0.0;  // go left when x[feature] <= threshold
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  ClassId label = 0;

  bool is_leaf() const noexcept { return feature == kLeaf; }
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  ClassId predict(std::span<const double> x) const {
    std::uint32_t i = 0;
    while (!nodes[i].is_leaf()) i = x[nodes[i].feature] <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
    return nodes[i].label;
  }
};

/// n draws with replacement.
inline std::vector<std::size_t> bootstrap_sample(std::size_t n, Xorshift64Star& rng) {
  std::vector<std::size_t> idx(n);
  for (auto& i : idx) i = rng.below(n);
  return idx;
}

namespace detail {

inline double gini(std::span<const std::size_t> counts, std::size_t total) {
  if (total == 0) return 0.0;
  double s = 1.0;
  for (auto c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    s -= p * p;
  }
  return s;
}

inline ClassId majority(std::span<const std::size_t> counts) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c)
    if (counts[c] > counts[best]) best = c;
  return static_cast<ClassId>(best);
}

class CartBuilder {
 public:
  CartBuilder(const FeatureTable& t, const ForestParams& p, Xorshift64Star& rng)
      : t_(t), p_(p), rng_(rng), classes_(t.class_names.size()) {}

  DecisionTree build(std::vector<std::size_t> sample) {
    tree_.nodes.clear();
    grow(std::move(sample), 0);
    return std::move(tree_);
  }

 private:
  std::uint32_t grow(std::vector<std::size_t> sample, std::size_t depth) {
    const auto id = static_cast<std::uint32_t>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    std::vector<std::size_t> counts(classes_, 0);
    for (auto r : sample) ++counts[t_.labels[r]];
    tree_.nodes[id].label = majority(counts);

    const double parent = gini(counts, sample.size());
    const bool depth_limited = p_.max_depth != 0 && depth >= p_.max_depth;
    if (parent == 0.0 || depth_limited || sample.size() < 2 * p_.min_leaf) return id;

    const std::size_t F = t_.features();
    std::vector<std::uint32_t> candidates(F);
    std::iota(candidates.begin(), candidates.end(), 0u);
    const std::size_t m = p_.split_features(F);
    if (m < F) {
      // Partial Fisher-Yates from the front, then ascending order.
      for (std::size_t i = 0; i < m; ++i) std::swap(candidates[i], candidates[i + rng_.below(F - i)]);
      candidates.resize(m);
      std::sort(candidates.begin(), candidates.end());
    }

    double best_impurity = parent;
    std::uint32_t best_feature = TreeNode::kLeaf;
    double best_threshold = 0.0;
    const double n = static_cast<double>(sample.size());
    std::vector<std::size_t> order = sample;
    for (auto f : candidates) {
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return t_.rows[a][f] < t_.rows[b][f]; });
      std::vector<std::size_t> left(classes_, 0), right = counts;
      for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        const auto lab = t_.labels[order[i]];
        ++left[lab];
        --right[lab];
        const double v = t_.rows[order[i]][f];
        const double next = t_.rows[order[i + 1]][f];
        if (v == next) continue;
        const std::size_t nl = i + 1, nr = order.size() - nl;
        if (nl < p_.min_leaf || nr < p_.min_leaf) continue;
        const double impurity = (static_cast<double>(nl) * gini(left, nl) + static_cast<double>(nr) * gini(right, nr)) / n;
        if (impurity < best_impurity - 1e-12) {
          best_impurity = impurity;
          best_feature = f;
          best_threshold = 0.5 * (v + next);
        }
      }
    }
    if (best_feature == TreeNode::kLeaf) return id;

    std::vector<std::size_t> l, r;
    for (auto s : sample) (t_.rows[s][best_feature] <= best_threshold ? l : r).push_back(s);
    if (l.empty() || r.empty()) return id;
    sample.clear();
    sample.shrink_to_fit();
    const auto left_id = grow(std::move(l), depth + 1);
    const auto right_id = grow(std::move(r), depth + 1);
    auto& node = tree_.nodes[id];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = left_id;
    node.right = right_id;
    return id;
  }

  const FeatureTable& t_;
  const ForestParams& p_;
  Xorshift64Star& rng_;
  std::size_t classes_;
  DecisionTree tree_;
};

}  // namespace detail

/// A CART tree over the rows in `sample` (duplicates allowed). Splits at
/// midpoints between consecutive distinct values; the best weighted Gini
/// wins, ties to the lower feature index and then the lower threshold.
inline DecisionTree train_cart(const FeatureTable& t, std::vector<std::size_t> sample,
                               const ForestParams& params, Xorshift64Star& rng) {
  return detail::CartBuilder(t, params, rng).build(std::move(sample));
}

struct RandomForest {
  std::vector<DecisionTree> trees;
  std::size_t classes = 0;

  /// Majority vote, ties to the earlier class.
  ClassId predict(std::span<const double> x) const {
    std::vector<std::size_t> votes(classes, 0);
    for (const auto& tree : trees) ++votes[tree.predict(x)];
    return detail::majority(votes);
  }
};

/// Tree i draws its bootstrap, then its split features, from
/// Xorshift64Star(derive_seed(seed, "tree", i)).
inline RandomForest train_rf(const FeatureTable& t, const ForestParams& params) {
  params.validate();
  if (t.rows.empty()) throw Error(Errc::empty_table, "random forest needs training rows");
  RandomForest forest;
  forest.classes = t.class_names.size();
  for (std::size_t i = 0; i < params.trees; ++i) {
    Xorshift64Star rng(derive_seed(params.seed, "tree", i));
    auto sample = bootstrap_sample(t.size(), rng);
    forest.trees.push_back(train_cart(t, std::move(sample), params, rng));
  }
  return forest;
}

}  // namespace emotopic
