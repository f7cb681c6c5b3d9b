#pragma once

// Direct classification with a topic model: label topics by majority vote of
// the training documents they win, then predict a document's class as the
// label of its highest-scoring topic.

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emotopic/corpus.hpp"
#include "emotopic/metrics.hpp"
#include "emotopic/topic_model.hpp"

namespace emotopic {

/// score(k) = sum over tokens of phi(k, token), once per occurrence. Token ids
/// must refer to the model's vocabulary; ids outside it are skipped.
inline std::vector<double> score_document(std::span<const TermId> doc, const TopicModel& model) {
  std::vector<double> scores(model.topics(), 0.0);
  const auto V = model.vocab_size();
  for (auto t : doc) {
    if (t >= V) continue;
    for (std::size_t k = 0; k < scores.size(); ++k)
      scores[k] += model.phi(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(t));
  }
  return scores;
}

/// Argmax with ties to the lower index; an all-zero vector abstains.
inline std::optional<std::size_t> assign_topic(std::span<const double> scores) {
  if (std::all_of(scores.begin(), scores.end(), [](double s) { return s == 0.0; })) return std::nullopt;
  std::size_t best = 0;
  for (std::size_t k = 1; k < scores.size(); ++k)
    if (scores[k] > scores[best]) best = k;
  return best;
}

struct TopicLabeling {
  std::vector<std::string> class_names;
  std::vector<ClassId> topic_class;              // per topic
  std::vector<std::vector<std::size_t>> support;  // per topic, per class vote counts
  ClassId fallback = 0;                           // used when a document abstains

  const std::string& class_of_topic(std::size_t k) const { return class_names.at(topic_class.at(k)); }
};

/// Each training document votes for the class of its assigned topic. Vote
/// ties go to the class with more training documents, then to the earlier
/// class name. Topics without votes, and abstaining documents, get the
/// majority training class.
inline TopicLabeling label_topics(const TopicModel& model, const Corpus& train) {
  if (!train.labeled()) throw Error(Errc::unlabeled_corpus, "topic labeling needs a labeled corpus");
  const Corpus projected = project_onto(train, model.vocab);
  const std::size_t C = train.class_names.size();
  const auto class_sizes = train.class_counts();

  TopicLabeling lab;
  lab.class_names = train.class_names;
  lab.support.assign(model.topics(), std::vector<std::size_t>(C, 0));
  for (std::size_t d = 0; d < projected.docs.size(); ++d) {
    auto scores = score_document(projected.docs[d], model);
    if (auto k = assign_topic(scores)) ++lab.support[*k][train.labels[d]];
  }

  auto better = [&](std::size_t a_votes, ClassId a, std::size_t b_votes, ClassId b) {
    if (a_votes != b_votes) return a_votes > b_votes;
    if (class_sizes[a] != class_sizes[b]) return class_sizes[a] > class_sizes[b];
    return a < b;
  };
  ClassId majority = 0;
  for (ClassId c = 1; c < C; ++c)
    if (better(class_sizes[c], c, class_sizes[majority], majority)) majority = c;
  lab.fallback = majority;

  for (std::size_t k = 0; k < model.topics(); ++k) {
    const auto& votes = lab.support[k];
    std::size_t total = 0;
    for (auto v : votes) total += v;
    if (total == 0) {
      lab.topic_class.push_back(majority);
      continue;
    }
    ClassId best = 0;
    for (ClassId c = 1; c < C; ++c)
      if (better(votes[c], c, votes[best], best)) best = c;
    lab.topic_class.push_back(best);
  }
  return lab;
}

/// Replaces the label of selected topics, e.g. from a hand-curated map.
inline void apply_label_overrides(TopicLabeling& lab, const std::map<std::size_t, std::string>& overrides) {
  for (const auto& [topic, name] : overrides) {
    if (topic >= lab.topic_class.size())
      throw Error(Errc::index_out_of_range, "label override for unknown topic " + std::to_string(topic));
    auto it = std::find(lab.class_names.begin(), lab.class_names.end(), name);
    if (it == lab.class_names.end()) throw Error(Errc::invalid_params, "label override uses unknown class '" + name + "'");
    lab.topic_class[topic] = static_cast<ClassId>(it - lab.class_names.begin());
  }
}

struct Prediction {
  ClassId cls = 0;
  bool abstained = false;
};

/// `doc` must already use the model's term ids.
inline Prediction predict(std::span<const TermId> doc, const TopicModel& model, const TopicLabeling& lab) {
  auto k = assign_topic(score_document(doc, model));
  if (!k) return {lab.fallback, true};
  return {lab.topic_class.at(*k), false};
}

inline const std::string& predict_class(std::span<const TermId> doc, const TopicModel& model,
                                        const TopicLabeling& lab) {
  return lab.class_names.at(predict(doc, model, lab).cls);
}

struct EvalReport {
  std::vector<std::string> class_names;
  ConfusionMatrix confusion;
  std::vector<ClassScores> per_class;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  std::size_t abstain_count = 0;
  std::vector<ClassId> predictions;  // per test document
};

inline EvalReport evaluate(const TopicModel& model, const TopicLabeling& lab, const Corpus& test) {
  if (!test.labeled()) throw Error(Errc::unlabeled_corpus, "evaluation needs a labeled corpus");
  // Test labels are matched to the labeling's classes by name.
  std::vector<ClassId> to_lab(test.class_names.size());
  for (std::size_t c = 0; c < test.class_names.size(); ++c) {
    auto it = std::find(lab.class_names.begin(), lab.class_names.end(), test.class_names[c]);
    if (it == lab.class_names.end())
      throw Error(Errc::invalid_params, "test class '" + test.class_names[c] + "' unknown to the labeling");
    to_lab[c] = static_cast<ClassId>(it - lab.class_names.begin());
  }
  const Corpus projected = project_onto(test, model.vocab);
  EvalReport r;
  r.class_names = lab.class_names;
  r.confusion = ConfusionMatrix(lab.class_names.size());
  for (std::size_t d = 0; d < projected.docs.size(); ++d) {
    auto p = predict(projected.docs[d], model, lab);
    if (p.abstained) ++r.abstain_count;
    r.confusion.add(to_lab[test.labels[d]], p.cls);
    r.predictions.push_back(p.cls);
  }
  r.per_class = r.confusion.class_scores();
  r.accuracy = r.confusion.accuracy();
  r.macro_f1 = r.confusion.macro_f1();
  return r;
}

}  // namespace emotopic
