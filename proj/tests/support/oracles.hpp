#pragma once

// Brute-force reference implementations shared by the unit and acceptance suites.

#include <cmath>
#include <memory>
#include <set>
#include <vector>

#include "emotopic/ml/features.hpp"

namespace emotopic::oracle {

inline double oracle_umass(const std::vector<std::set<TermId>>& docs, const std::vector<TermId>& top) {
  double c = 0.0;
  for (std::size_t i = 1; i < top.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      double both = 0.0, dj = 0.0;
      for (const auto& d : docs) {
        if (d.contains(top[j])) dj += 1.0;
        if (d.contains(top[i]) && d.contains(top[j])) both += 1.0;
      }
      c += std::log((both + 1.0) / dj);
    }
  return c;
}

// Reference CART: exhaustive search over features in order and midpoints in
// ascending order, keeping the first strictly better weighted Gini.
struct OracleNode {
  bool leaf = true;
  std::size_t feature = 0;
  double threshold = 0.0;
  ClassId label = 0;
  std::unique_ptr<OracleNode> left, right;
};

inline double gini_of(const std::vector<std::size_t>& idx, const FeatureTable& t) {
  std::vector<double> n(t.class_names.size(), 0.0);
  for (auto i : idx) n[t.labels[i]] += 1.0;
  double g = 1.0;
  for (double v : n) g -= (v / static_cast<double>(idx.size())) * (v / static_cast<double>(idx.size()));
  return g;
}

inline std::unique_ptr<OracleNode> oracle_cart(const std::vector<std::size_t>& idx, const FeatureTable& t) {
  auto node = std::make_unique<OracleNode>();
  std::vector<std::size_t> counts(t.class_names.size(), 0);
  for (auto i : idx) ++counts[t.labels[i]];
  node->label = static_cast<ClassId>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  if (gini_of(idx, t) == 0.0 || idx.size() < 2) return node;
  double best = gini_of(idx, t);
  std::vector<std::size_t> best_l, best_r;
  for (std::size_t f = 0; f < t.features(); ++f) {
    std::set<double> values;
    for (auto i : idx) values.insert(t.rows[i][f]);
    for (auto it = values.begin(); std::next(it) != values.end(); ++it) {
      const double thr = (*it + *std::next(it)) / 2.0;
      std::vector<std::size_t> l, r;
      for (auto i : idx) (t.rows[i][f] <= thr ? l : r).push_back(i);
      const double g = (static_cast<double>(l.size()) * gini_of(l, t) + static_cast<double>(r.size()) * gini_of(r, t)) /
                       static_cast<double>(idx.size());
      if (g < best - 1e-12) {
        best = g;
        node->feature = f;
        node->threshold = thr;
        best_l = l;
        best_r = r;
      }
    }
  }
  if (best_l.empty()) return node;
  node->leaf = false;
  node->left = oracle_cart(best_l, t);
  node->right = oracle_cart(best_r, t);
  return node;
}

inline ClassId oracle_predict(const OracleNode& n, const std::vector<double>& x) {
  if (n.leaf) return n.label;
  return x[n.feature] <= n.threshold ? oracle_predict(*n.left, x) : oracle_predict(*n.right, x);
}

inline std::size_t oracle_size(const OracleNode& n) { return n.leaf ? 1 : 1 + oracle_size(*n.left) + oracle_size(*n.right); }

}  // namespace emotopic::oracle
