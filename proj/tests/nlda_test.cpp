#include <gtest/gtest.h>

#include <algorithm>

#include "emotopic/nlda.hpp"
#include "emotopic/synthetic.hpp"

using namespace emotopic;

namespace {

TopicModel model_with_phi(RowMatrix phi) {
  std::vector<std::string> terms;
  for (Eigen::Index w = 0; w < phi.cols(); ++w) terms.push_back("t" + std::to_string(w));
  TopicModel m;
  m.phi = std::move(phi);
  m.vocab = std::make_shared<Vocabulary>(terms, std::vector<std::size_t>(terms.size(), 1));
  return m;
}

Corpus synthetic_corpus(std::size_t per_class) {
  SyntheticSpec spec;
  spec.docs_per_class = per_class;
  return build_corpus(make_synthetic(spec), {});
}

LdaParams quick(std::size_t k, std::uint64_t seed = 5) {
  LdaParams p;
  p.topics = k;
  p.alpha = 0.1;
  p.iterations = 120;
  p.burn_in = 40;
  p.seed = seed;
  return p;
}

}  // namespace

TEST(TopicThreshold, IsTheMeanWeight) {
  std::vector<double> w{0.5, 0.3, 0.2};
  EXPECT_NEAR(topic_threshold(w), 1.0 / 3.0, 1e-15);
  std::vector<double> u(4, 0.25);
  EXPECT_EQ(topic_threshold(u), 0.25);
  try {
    topic_threshold({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::empty_topic);
  }
}

TEST(Prune, KeepsTermsAtOrAboveTheThreshold) {
  RowMatrix phi(1, 3);
  phi << 0.5, 0.3, 0.2;
  auto r = prune_vocabulary(model_with_phi(phi));
  EXPECT_EQ(r.retained, (std::vector<TermId>{0}));
  RowMatrix uniform = RowMatrix::Constant(1, 4, 0.25);
  EXPECT_EQ(prune_vocabulary(model_with_phi(uniform)).retained, (std::vector<TermId>{0, 1, 2, 3}));
}

TEST(Prune, UnionOverTopics) {
  RowMatrix phi(2, 4);
  phi << 0.7, 0.1, 0.1, 0.1,
         0.1, 0.1, 0.1, 0.7;
  EXPECT_EQ(prune_vocabulary(model_with_phi(phi)).retained, (std::vector<TermId>{0, 3}));
}

TEST(Prune, TopMScope) {
  RowMatrix phi(1, 5);
  phi << 0.4, 0.3, 0.15, 0.1, 0.05;
  PruneOptions opts{PruneScope::top_m, 2};
  auto r = prune_vocabulary(model_with_phi(phi), opts);
  EXPECT_NEAR(r.thresholds[0], 0.35, 1e-15);
  EXPECT_EQ(r.retained, (std::vector<TermId>{0}));
  opts.top_m = 100;
  EXPECT_EQ(prune_vocabulary(model_with_phi(phi), opts).retained, (std::vector<TermId>{0, 1}));
}

TEST(Prune, EveryTopicKeepsItsTopTerm) {
  Xorshift64Star rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto K = static_cast<Eigen::Index>(1 + rng.below(4));
    const auto V = static_cast<Eigen::Index>(1 + rng.below(30));
    RowMatrix phi(K, V);
    for (Eigen::Index k = 0; k < K; ++k) {
      for (Eigen::Index w = 0; w < V; ++w) phi(k, w) = rng.uniform() + 1e-6;
      phi.row(k) /= phi.row(k).sum();
    }
    auto r = prune_vocabulary(model_with_phi(phi));
    ASSERT_FALSE(r.retained.empty());
    EXPECT_TRUE(std::is_sorted(r.retained.begin(), r.retained.end()));
    for (Eigen::Index k = 0; k < K; ++k) {
      Eigen::Index top;
      phi.row(k).maxCoeff(&top);
      EXPECT_TRUE(std::binary_search(r.retained.begin(), r.retained.end(), static_cast<TermId>(top)));
    }
  }
}

TEST(RunNlda, OneStageEqualsPlainLda) {
  auto c = synthetic_corpus(20);
  auto p = quick(3);
  auto n = run_nlda(c, p, 1);
  auto plain = fit_lda(c, p);
  EXPECT_EQ(n.final_model.phi, plain.phi);
  EXPECT_EQ(n.final_model.theta, plain.theta);
  ASSERT_EQ(n.stage_reports.size(), 1u);
  EXPECT_EQ(n.stage_reports[0].vocab_before, n.stage_reports[0].vocab_after);
}

TEST(RunNlda, UniformCorpusIsAFixedPoint) {
  // Every document holds every term once, so a single topic is uniform.
  std::vector<std::vector<std::string>> docs(6, {"a", "b", "c", "d"});
  auto c = corpus_from_tokens(docs);
  auto r = run_nlda(c, quick(1), 3);
  for (const auto& s : r.stage_reports) {
    EXPECT_EQ(s.vocab_after, 4u);
    EXPECT_NEAR(s.thresholds[0], 0.25, 1e-15);
  }
  EXPECT_EQ(r.final_corpus.docs, c.docs);
}

TEST(RunNlda, StagesShrinkAndNest) {
  auto c = synthetic_corpus(30);
  SyntheticSpec spec;
  std::vector<std::string> tracked{normalize(synthetic_keyword(spec, 0, 0)), normalize(synthetic_noise(spec, 0)), "absent"};
  auto r = run_nlda(c, quick(3, 9), 4, {}, tracked);
  ASSERT_EQ(r.stage_reports.size(), 4u);
  for (std::size_t s = 1; s < r.stage_reports.size(); ++s) {
    const auto& prev = r.stage_reports[s - 1];
    const auto& cur = r.stage_reports[s];
    EXPECT_EQ(cur.vocab_before, prev.vocab_after);
    EXPECT_LE(cur.vocab_after, cur.vocab_before);
    for (const auto& t : cur.retained_terms)
      EXPECT_NE(std::find(prev.retained_terms.begin(), prev.retained_terms.end(), t), prev.retained_terms.end());
  }
  EXPECT_FALSE(r.stage_reports[0].tracked[2].max_phi.has_value());
  EXPECT_EQ(r.final_model.method_tag, "nlda-stage-4");
  // Documents become subsequences of their originals.
  for (std::size_t d = 0; d < c.size(); ++d) {
    auto orig = c.tokens_of(d);
    auto now = r.final_corpus.tokens_of(d);
    auto it = orig.begin();
    for (const auto& t : now) {
      it = std::find(it, orig.end(), t);
      ASSERT_NE(it, orig.end());
      ++it;
    }
  }
}

TEST(RunNlda, CollapseCarriesPartialReports) {
  auto c = corpus_from_tokens({{"a", "a"}, {"a"}});
  try {
    run_nlda(c, quick(2), 3);
    FAIL();
  } catch (const NldaAborted& e) {
    EXPECT_EQ(e.code(), Errc::vocabulary_collapse);
    EXPECT_EQ(e.partial_reports().size(), 1u);
  }
  EXPECT_THROW(run_nlda(c, quick(2), 0), Error);
}
