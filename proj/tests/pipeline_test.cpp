#include <gtest/gtest.h>

#include "emotopic/pipeline.hpp"
#include "emotopic/random.hpp"

using namespace emotopic;

namespace {

// Vocabulary "sevinc", "uzuntu", "ofke"; three topics.
TopicModel three_topic_model() {
  auto c = corpus_from_tokens({{"sevinc", "uzuntu", "ofke"}});
  TopicModel m;
  m.phi.resize(3, 3);
  m.phi << 0.8, 0.1, 0.1,
           0.1, 0.8, 0.1,
           0.1, 0.1, 0.8;
  m.theta = RowMatrix::Constant(1, 3, 1.0 / 3);
  m.vocab = c.vocab;
  return m;
}

Corpus labeled(const std::vector<std::vector<std::string>>& docs, const std::vector<std::string>& labels) {
  std::vector<std::optional<std::string>> l(labels.begin(), labels.end());
  return corpus_from_tokens(docs, {}, l);
}

}  // namespace

TEST(ScoreDocument, SumsPhiPerOccurrence) {
  auto m = three_topic_model();
  std::vector<TermId> doc{0, 0, 2};
  auto s = score_document(doc, m);
  EXPECT_DOUBLE_EQ(s[0], 0.8 + 0.8 + 0.1);
  EXPECT_DOUBLE_EQ(s[1], 0.1 + 0.1 + 0.1);
  EXPECT_DOUBLE_EQ(s[2], 0.1 + 0.1 + 0.8);
  EXPECT_EQ(score_document({}, m), (std::vector<double>{0, 0, 0}));
  std::vector<TermId> oov{7, 9};
  EXPECT_EQ(score_document(oov, m), (std::vector<double>{0, 0, 0}));
}

TEST(ScoreDocument, IsAdditiveOverConcatenation) {
  auto m = three_topic_model();
  Xorshift64Star rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<TermId> a(rng.below(10)), b(rng.below(10));
    for (auto& t : a) t = static_cast<TermId>(rng.below(3));
    for (auto& t : b) t = static_cast<TermId>(rng.below(3));
    auto ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    auto sa = score_document(a, m), sb = score_document(b, m), sab = score_document(ab, m);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(sab[k], sa[k] + sb[k], 1e-12);
  }
}

TEST(AssignTopic, ArgmaxTiesAndAbstention) {
  EXPECT_EQ(assign_topic(std::vector<double>{0.2, 0.7, 0.1}), 1u);
  EXPECT_EQ(assign_topic(std::vector<double>{0.5, 0.5, 0.1}), 0u);
  EXPECT_EQ(assign_topic(std::vector<double>{0.0, 0.0}), std::nullopt);
  EXPECT_EQ(assign_topic(std::vector<double>{0.0, 0.3}), 1u);
}

TEST(AssignTopic, InvariantUnderPositiveScaling) {
  Xorshift64Star rng(10);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> s(1 + rng.below(6));
    for (auto& v : s) v = static_cast<double>(rng.below(5)) * 0.25;
    const double c = 0.5 + 10.0 * rng.uniform();
    auto scaled = s;
    for (auto& v : scaled) v *= c;
    EXPECT_EQ(assign_topic(s), assign_topic(scaled));
  }
}

TEST(LabelTopics, MajorityVoteWithFallback) {
  auto m = three_topic_model();
  auto train = labeled({{"sevinc"}, {"sevinc", "ofke"}, {"uzuntu"}, {"sevinc"}},
                       {"happy", "happy", "sad", "sad"});
  auto lab = label_topics(m, train);
  ASSERT_EQ(lab.class_names, (std::vector<std::string>{"happy", "sad"}));
  EXPECT_EQ(lab.class_of_topic(0), "happy");  // 2 happy vs 1 sad
  EXPECT_EQ(lab.class_of_topic(1), "sad");
  // Topic 2 wins no document; classes tie on size so the earlier name is the fallback.
  EXPECT_EQ(lab.class_of_topic(2), "happy");
  EXPECT_EQ(lab.support[0], (std::vector<std::size_t>{2, 1}));
}

TEST(LabelTopics, VoteTiesGoToTheLargerClass) {
  auto m = three_topic_model();
  auto train = labeled({{"sevinc"}, {"sevinc"}, {"uzuntu"}, {"ofke"}, {"ofke"}},
                       {"angry", "sad", "sad", "sad", "angry"});
  auto lab = label_topics(m, train);
  EXPECT_EQ(lab.class_of_topic(0), "sad");
  EXPECT_EQ(lab.class_names[lab.fallback], "sad");
}

TEST(LabelTopics, RequiresLabels) {
  auto m = three_topic_model();
  auto train = corpus_from_tokens({{"sevinc"}});
  EXPECT_THROW(label_topics(m, train), Error);
}

TEST(Predict, ClassOfWinningTopicOrFallback) {
  auto m = three_topic_model();
  auto train = labeled({{"sevinc"}, {"uzuntu"}, {"ofke"}}, {"happy", "sad", "angry"});
  auto lab = label_topics(m, train);
  std::vector<TermId> doc{*m.vocab->find("sevinc"), *m.vocab->find("sevinc")};
  EXPECT_EQ(predict_class(doc, m, lab), "happy");
  auto p = predict({}, m, lab);
  EXPECT_TRUE(p.abstained);
  EXPECT_EQ(p.cls, lab.fallback);
}

TEST(Evaluate, AccuracyAndConfusion) {
  auto m = three_topic_model();
  auto train = labeled({{"sevinc"}, {"uzuntu"}}, {"happy", "sad"});
  auto lab = label_topics(m, train);
  auto test = labeled({{"sevinc"}, {"uzuntu"}, {"sevinc"}, {"uzuntu"}}, {"happy", "sad", "sad", "happy"});
  auto r = evaluate(m, lab, test);
  EXPECT_DOUBLE_EQ(r.accuracy, 0.5);
  EXPECT_EQ(r.confusion.row_total(0), 2u);
  EXPECT_EQ(r.confusion.row_total(1), 2u);
  EXPECT_EQ(r.confusion.at(0, 1), 1u);

  auto perfect = labeled({{"sevinc"}, {"uzuntu", "uzuntu"}}, {"happy", "sad"});
  auto rp = evaluate(m, lab, perfect);
  EXPECT_DOUBLE_EQ(rp.accuracy, 1.0);
  EXPECT_DOUBLE_EQ(rp.macro_f1, 1.0);
}

TEST(Evaluate, OutOfVocabularyDocumentsAbstain) {
  auto m = three_topic_model();
  auto train = labeled({{"sevinc"}, {"uzuntu"}, {"uzuntu"}}, {"happy", "sad", "sad"});
  auto lab = label_topics(m, train);
  auto test = labeled({{"bilinmeyen"}, {"sevinc"}}, {"sad", "happy"});
  auto r = evaluate(m, lab, test);
  EXPECT_EQ(r.abstain_count, 1u);
  EXPECT_EQ(r.class_names[r.predictions[0]], "sad");
  EXPECT_DOUBLE_EQ(r.accuracy, 1.0);
}

TEST(Metrics, ZeroDenominatorsYieldZero) {
  ConfusionMatrix cm(3);
  cm.add(0, 0);
  cm.add(1, 0);
  auto s = cm.class_scores();
  EXPECT_DOUBLE_EQ(s[0].precision, 0.5);
  EXPECT_DOUBLE_EQ(s[0].recall, 1.0);
  EXPECT_DOUBLE_EQ(s[1].precision, 0.0);
  EXPECT_DOUBLE_EQ(s[1].recall, 0.0);
  EXPECT_DOUBLE_EQ(s[1].f1, 0.0);
  EXPECT_DOUBLE_EQ(s[2].f1, 0.0);
  EXPECT_NEAR(cm.macro_f1(), (2.0 / 3.0) / 3.0, 1e-15);
}

TEST(LabelOverrides, ReplaceTopicClasses) {
  auto m = three_topic_model();
  auto train = labeled({{"sevinc"}, {"uzuntu"}}, {"happy", "sad"});
  auto lab = label_topics(m, train);
  apply_label_overrides(lab, {{2, "sad"}});
  EXPECT_EQ(lab.class_of_topic(2), "sad");
  EXPECT_THROW(apply_label_overrides(lab, {{5, "sad"}}), Error);
  EXPECT_THROW(apply_label_overrides(lab, {{0, "angry"}}), Error);
}

TEST(Pipeline, DisjointKeywordCorpusMatchesBruteForceScoring) {
  // Class keywords are disjoint and each topic puts most mass on one class.
  Xorshift64Star rng(17);
  std::vector<std::vector<std::string>> docs;
  std::vector<std::string> labels;
  const std::vector<std::string> names{"angry", "happy", "sad"};
  for (int d = 0; d < 60; ++d) {
    const auto c = static_cast<std::size_t>(d % 3);
    std::vector<std::string> doc;
    for (int i = 0; i < 5; ++i) doc.push_back(names[c] + std::to_string(rng.below(4)));
    docs.push_back(doc);
    labels.push_back(names[c]);
  }
  auto corpus = labeled(docs, labels);
  TopicModel m;
  const auto V = static_cast<Eigen::Index>(corpus.vocab->size());
  m.phi = RowMatrix::Constant(3, V, 0.01);
  for (Eigen::Index w = 0; w < V; ++w) {
    const auto& term = corpus.vocab->term(static_cast<TermId>(w));
    for (Eigen::Index k = 0; k < 3; ++k)
      if (term.starts_with(names[static_cast<std::size_t>(2 - k)])) m.phi(k, w) = 1.0;
  }
  for (Eigen::Index k = 0; k < 3; ++k) m.phi.row(k) /= m.phi.row(k).sum();
  m.vocab = corpus.vocab;
  auto lab = label_topics(m, corpus);
  auto r = evaluate(m, lab, corpus);
  EXPECT_DOUBLE_EQ(r.accuracy, 1.0);
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    std::vector<double> brute(3, 0.0);
    for (auto t : corpus.docs[d])
      for (Eigen::Index k = 0; k < 3; ++k) brute[static_cast<std::size_t>(k)] += m.phi(k, t);
    EXPECT_EQ(score_document(corpus.docs[d], m), brute);
  }
}
