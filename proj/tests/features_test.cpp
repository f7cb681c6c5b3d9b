#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "emotopic/csv.hpp"
#include "emotopic/ml/features.hpp"
#include "emotopic/pipeline.hpp"
#include "emotopic/random.hpp"

using namespace emotopic;

namespace {

FeatureTable small_table() {
  FeatureTable t;
  t.feature_names = {"topic0", "topic1"};
  t.class_names = {"happy", "sad"};
  t.rows = {{0.5, 0.05}, {0.1, 1.25}, {0.0, 3.0}};
  t.labels = {0, 1, 1};
  return t;
}

FeatureTable random_table(Xorshift64Star& rng) {
  FeatureTable t;
  const auto F = 1 + rng.below(5);
  t.feature_names = topic_feature_names(F);
  t.class_names = {"angry", "happy", "sad"};
  for (std::size_t r = 1 + rng.below(20); r > 0; --r) {
    std::vector<double> row(F);
    for (auto& v : row) {
      switch (rng.below(4)) {
        case 0: v = 0.0; break;
        case 1: v = rng.uniform(); break;
        case 2: v = rng.uniform() * 1e-300; break;
        default: v = 1e6 * rng.uniform() + 1.0 / 3.0; break;
      }
    }
    t.rows.push_back(row);
    t.labels.push_back(static_cast<ClassId>(rng.below(3)));
  }
  return t;
}

}  // namespace

TEST(FeatureCsv, RowFormat) {
  auto csv = feature_csv(small_table());
  EXPECT_TRUE(csv.starts_with("topic0,topic1,class\n0.5,0.05,happy\n"));
  EXPECT_EQ(parse_feature_csv(csv), small_table());
}

TEST(FeatureCsv, RoundTripIsExact) {
  Xorshift64Star rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    auto t = random_table(rng);
    auto back = parse_feature_csv(feature_csv(t));
    // Classes absent from the rows cannot be recovered from a CSV.
    EXPECT_EQ(back.rows, t.rows);
    for (std::size_t r = 0; r < t.size(); ++r)
      EXPECT_EQ(back.class_names[back.labels[r]], t.class_names[t.labels[r]]);
  }
}

TEST(Arff, HeaderAndRows) {
  auto arff = write_arff(small_table(), "emotions");
  EXPECT_NE(arff.find("@ATTRIBUTE class {happy,sad}"), std::string::npos);
  EXPECT_NE(arff.find("@ATTRIBUTE topic1 NUMERIC"), std::string::npos);
  EXPECT_NE(arff.find("\n0.5,0.05,happy\n"), std::string::npos);
}

TEST(Arff, GoldenFile) {
  const auto golden = read_file(std::string(EMOTOPIC_TEST_DATA) + "/golden.arff");
  EXPECT_EQ(write_arff(small_table(), "emotions"), golden);
}

TEST(Arff, RoundTripIsBitExact) {
  Xorshift64Star rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    auto t = random_table(rng);
    if (trial % 3 == 0) t.class_names = {"öfke", "very happy", "it's,sad"};
    auto doc = read_arff(write_arff(t, trial % 2 ? "rel" : "my relation"));
    EXPECT_EQ(doc.relation, trial % 2 ? "rel" : "my relation");
    ASSERT_EQ(doc.table, t);
    for (std::size_t r = 0; r < t.size(); ++r)
      for (std::size_t f = 0; f < t.features(); ++f)
        EXPECT_EQ(std::bit_cast<std::uint64_t>(doc.table.rows[r][f]), std::bit_cast<std::uint64_t>(t.rows[r][f]));
  }
}

TEST(Arff, EmptyTableRejected) {
  auto t = small_table();
  t.rows.clear();
  t.labels.clear();
  try {
    write_arff(t, "x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::empty_table);
  }
}

TEST(ExportFeatures, RowsEqualDocumentScores) {
  std::vector<std::optional<std::string>> labels{"happy", "sad", "sad"};
  auto c = corpus_from_tokens({{"a", "b", "a"}, {"c"}, {}}, {}, labels);
  TopicModel m;
  m.phi.resize(2, 3);
  m.phi << 0.5, 0.05, 0.45, 0.2, 0.3, 0.5;
  m.vocab = c.vocab;
  auto t = export_features(c, m);
  ASSERT_EQ(t.size(), c.size());
  for (std::size_t d = 0; d < c.size(); ++d) EXPECT_EQ(t.rows[d], score_document(c.docs[d], m));
  EXPECT_EQ(t.rows[2], (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(t.feature_names, (std::vector<std::string>{"topic0", "topic1"}));

  auto unlabeled = corpus_from_tokens({{"a"}});
  EXPECT_THROW(export_features(unlabeled, m), Error);
  try {
    export_features(Corpus{}, m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::empty_corpus);
  }
}

TEST(Csv, QuotedFieldsAndEscaping) {
  auto rows = parse_csv("id,text\n1,\"a, \"\"b\"\"\nc\"\n2,plain\n");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1][1], "a, \"b\"\nc");
  EXPECT_EQ(csv_escape("x,y"), "\"x,y\"");
  EXPECT_EQ(parse_csv(csv_line({"a\"b", "c"}))[0], (CsvRow{"a\"b", "c"}));
  EXPECT_THROW(parse_csv("\"open"), Error);
}

TEST(Csv, ShortestFormattingRoundTrips) {
  Xorshift64Star rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double x = std::ldexp(rng.uniform(), static_cast<int>(rng.below(200)) - 100);
    EXPECT_EQ(parse_double(format_shortest(x)), x);
  }
  EXPECT_EQ(format_shortest(0.05), "0.05");
}
