#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "emotopic/metrics.hpp"
#include "emotopic/ml/features.hpp"
#include "emotopic/ml/naive_bayes.hpp"
#include "emotopic/ml/random_forest.hpp"
#include "emotopic/ml/svm.hpp"
#include "emotopic/random.hpp"

namespace emotopic {

struct NbSpec {};
struct RfSpec {
  ForestParams params;
};
struct SvmSpec {
  SvmParams params;
};
using ClassifierSpec = std::variant<NbSpec, RfSpec, SvmSpec>;

inline std::string classifier_name(const ClassifierSpec& spec) {
  struct Visitor {
    std::string operator()(const NbSpec&) const { return "nb"; }
    std::string operator()(const RfSpec&) const { return "rf"; }
    std::string operator()(const SvmSpec&) const { return "svm"; }
  };
  return std::visit(Visitor{}, spec);
}

/// Fold index per row. Each class is shuffled, then all classes are dealt
/// round-robin in one continuous sequence, so fold sizes and per-class fold
/// counts differ by at most one.
inline std::vector<std::size_t> stratified_folds(const FeatureTable& t, std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw Error(Errc::invalid_params, "cross-validation needs at least two folds");
  if (t.size() < folds) throw Error(Errc::too_few_rows, "fewer rows than folds");
  Xorshift64Star rng(seed);
  std::vector<std::vector<std::size_t>> by_class(t.class_names.size());
  for (std::size_t r = 0; r < t.size(); ++r) by_class[t.labels[r]].push_back(r);
  std::vector<std::size_t> fold_of(t.size());
  std::size_t next = 0;
  for (auto& members : by_class) {
    rng.shuffle(std::span(members));
    for (auto r : members) {
      fold_of[r] = next;
      next = (next + 1) % folds;
    }
  }
  return fold_of;
}

struct CvReport {
  std::string classifier;
  std::uint64_t seed = 0;
  std::vector<std::string> class_names;
  std::vector<std::size_t> fold_sizes;
  std::vector<double> fold_accuracy;
  double mean_accuracy = 0.0;
  ConfusionMatrix pooled;
  double pooled_accuracy = 0.0;
  std::vector<ClassScores> per_class;
  double macro_f1 = 0.0;
};

/// Fold f trains with seed derive_seed(seed, "fold", f).
inline CvReport cross_validate(const FeatureTable& t, const ClassifierSpec& spec, std::size_t folds,
                               std::uint64_t seed) {
  const auto fold_of = stratified_folds(t, folds, derive_seed(seed, "folds"));
  CvReport rep;
  rep.classifier = classifier_name(spec);
  rep.seed = seed;
  rep.class_names = t.class_names;
  rep.pooled = ConfusionMatrix(t.class_names.size());
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::size_t> train, test;
    for (std::size_t r = 0; r < t.size(); ++r) (fold_of[r] == f ? test : train).push_back(r);
    const FeatureTable tr = t.select(train);
    const std::uint64_t fold_seed = derive_seed(seed, "fold", f);

    std::function<ClassId(std::span<const double>)> predict;
    if (std::holds_alternative<NbSpec>(spec)) {
      predict = [m = train_nb(tr)](std::span<const double> x) { return m.predict(x); };
    } else if (const auto* rf = std::get_if<RfSpec>(&spec)) {
      ForestParams p = rf->params;
      p.seed = fold_seed;
      predict = [m = train_rf(tr, p)](std::span<const double> x) { return m.predict(x); };
    } else {
      SvmParams p = std::get<SvmSpec>(spec).params;
      p.seed = fold_seed;
      predict = [m = train_svm(tr, p)](std::span<const double> x) { return m.predict(x); };
    }

    ConfusionMatrix cm(t.class_names.size());
    for (auto r : test) cm.add(t.labels[r], predict(t.rows[r]));
    rep.fold_sizes.push_back(test.size());
    rep.fold_accuracy.push_back(cm.accuracy());
    rep.pooled.merge(cm);
  }
  double sum = 0.0;
  for (double a : rep.fold_accuracy) sum += a;
  rep.mean_accuracy = sum / static_cast<double>(folds);
  rep.pooled_accuracy = rep.pooled.accuracy();
  rep.per_class = rep.pooled.class_scores();
  rep.macro_f1 = rep.pooled.macro_f1();
  return rep;
}

}  // namespace emotopic
