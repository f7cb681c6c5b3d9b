#include <gtest/gtest.h>

#include <filesystem>
#include <set>

#include <json.hpp>

#include "emotopic/experiment.hpp"

using namespace emotopic;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::path(EMOTOPIC_TEST_WORK) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

RunConfig bundled(const fs::path& outdir, Method method = Method::lda) {
  auto cfg = load_config(std::string(EMOTOPIC_BUNDLED_DATA) + "/synthetic.conf");
  cfg.outdir = outdir.string();
  cfg.method = method;
  cfg.trees = 20;
  cfg.svm_epochs = 50;
  return cfg;
}

std::map<std::string, std::string> run_files(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().filename() != "manifest.json") files[e.path().filename().string()] = read_file(e.path().string());
  return files;
}

}  // namespace

TEST(Config, ParsesKeyValueText) {
  RunConfig cfg;
  apply_config_text(cfg, "# comment\nmethod = nlda\nstages=4\n\nk_grid = 3, 5,7\nalpha = 0.5\ntrack = a,b\n");
  EXPECT_EQ(cfg.method, Method::nlda);
  EXPECT_EQ(cfg.stages, 4u);
  EXPECT_EQ(cfg.k_grid, (std::vector<std::size_t>{3, 5, 7}));
  EXPECT_EQ(cfg.alpha, 0.5);
  EXPECT_EQ(cfg.track, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(cfg.method_label(), "nlda-4");
  EXPECT_EQ(cfg.resolved_run_id(), "nlda-4-s1");
  cfg.set("burn-in", "10");
  EXPECT_EQ(cfg.burn_in, 10u);
  cfg.set("alpha", "auto");
  EXPECT_FALSE(cfg.alpha.has_value());
  cfg.set("topic_labels", "0:happy,2:sad");
  EXPECT_EQ(cfg.topic_labels.at(2), "sad");
}

TEST(Config, RejectsBadInput) {
  RunConfig cfg;
  auto expect_config_error = [&](auto&& f) {
    try {
      f();
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::config);
    }
  };
  expect_config_error([&] { cfg.set("colour", "red"); });
  expect_config_error([&] { cfg.set("k", "three"); });
  expect_config_error([&] { cfg.set("method", "pca"); });
  expect_config_error([&] { apply_config_text(cfg, "just words\n"); });
  expect_config_error([&] { cfg.validate(); });
  cfg.dataset = "/nonexistent/data.csv";
  expect_config_error([&] { cfg.validate(); });
}

TEST(Config, TextRoundTrip) {
  auto cfg = bundled("/tmp/x", Method::nmf);
  RunConfig again;
  apply_config_text(again, cfg.to_text());
  EXPECT_EQ(again.entries(), cfg.entries());
}

TEST(Config, BundledConfigResolvesPaths) {
  auto cfg = load_config(std::string(EMOTOPIC_BUNDLED_DATA) + "/synthetic.conf");
  EXPECT_TRUE(fs::is_regular_file(cfg.dataset));
  EXPECT_TRUE(fs::is_regular_file(cfg.stopwords));
  EXPECT_NO_THROW(cfg.validate());
}

TEST(Dataset, ParsesTextAndOptionalLabels) {
  auto docs = parse_dataset("id,text,label\n7,\"Çok mutlu, bugün!\",happy\n8,hm,\n");
  ASSERT_EQ(docs.size(), 2u);
  EXPECT_EQ(docs[0].text, "Çok mutlu, bugün!");
  EXPECT_EQ(docs[0].label, "happy");
  EXPECT_FALSE(docs[1].label.has_value());
  EXPECT_THROW(parse_dataset("body,label\nx,y\n"), Error);
  EXPECT_THROW(parse_dataset("text,label\nx\n"), Error);
  EXPECT_EQ(parse_dataset(dataset_csv(docs))[0].text, docs[0].text);
}

TEST(ModelFile, RoundTrip) {
  auto c = corpus_from_tokens({{"a", "b", "c"}, {"b", "c", "c"}, {"a", "a"}});
  LdaParams p;
  p.topics = 2;
  p.iterations = 30;
  p.burn_in = 10;
  auto m = fit_lda(c, p);
  const auto text = serialize_model(m);
  auto back = parse_model(text);
  EXPECT_EQ(back.method_tag, "lda");
  EXPECT_EQ(back.vocab->hash(), c.vocab->hash());
  EXPECT_TRUE(back.phi.isApprox(m.phi, 1e-11));
  EXPECT_TRUE(back.theta.isApprox(m.theta, 1e-11));
  EXPECT_EQ(serialize_model(back), text);
  EXPECT_THROW(parse_model("not a model\n"), Error);
}

TEST(Experiment, PipelineWritesEveryArtifact) {
  auto out = scratch("artifacts");
  auto res = run_pipeline(bundled(out, Method::nlda));
  for (const char* name : {"vocabulary.csv", "preprocess.csv", "split.csv", "corpus.csv", "model.txt", "top_words.csv",
                           "stages.csv", "thresholds.csv", "labeling.csv", "eval.csv", "predictions.csv",
                           "features.csv", "features.arff", "cv.csv", "manifest.json"})
    EXPECT_TRUE(fs::exists(res.run_dir / name)) << name;
  EXPECT_TRUE(fs::exists(out / "summary.csv"));
  auto manifest = nlohmann::json::parse(read_file((res.run_dir / "manifest.json").string()));
  EXPECT_EQ(manifest["status"], "ok");
  EXPECT_EQ(manifest["config"]["method"], "nlda");
  std::set<std::string> listed;
  for (const auto& step : manifest["steps"])
    for (const auto& f : step["files"]) {
      listed.insert(f.get<std::string>());
      EXPECT_TRUE(fs::exists(res.run_dir / f.get<std::string>())) << f;
    }
  for (const auto& e : fs::directory_iterator(res.run_dir)) {
    const auto name = e.path().filename().string();
    if (name == "manifest.json") continue;
    EXPECT_TRUE(listed.contains(name)) << "unlisted output " << name;
  }
  EXPECT_EQ(res.stages.size(), 3u);
  EXPECT_EQ(res.features.size(), 300u);
  EXPECT_GE(res.eval.accuracy, 0.95);
}

TEST(Experiment, RerunsAreByteIdentical) {
  for (auto method : {Method::lda, Method::nmf}) {
    auto a = run_pipeline(bundled(scratch("rerun-a"), method));
    auto b = run_pipeline(bundled(scratch("rerun-b"), method));
    EXPECT_EQ(run_files(a.run_dir), run_files(b.run_dir));
  }
}

TEST(Experiment, OneStageNldaEqualsLda) {
  auto lda = bundled(scratch("one-stage-lda"));
  auto nlda = bundled(scratch("one-stage-nlda"), Method::nlda);
  nlda.stages = 1;
  auto a = run_pipeline(lda);
  auto b = run_pipeline(nlda);
  EXPECT_EQ(a.model.phi, b.model.phi);
  const auto fa = run_files(a.run_dir), fb = run_files(b.run_dir);
  for (const char* name : {"eval.csv", "predictions.csv", "features.csv", "labeling.csv", "cv.csv"})
    EXPECT_EQ(fa.at(name), fb.at(name)) << name;
}

TEST(Experiment, MissingDatasetFailsWithOnlyAManifest) {
  auto out = scratch("missing");
  auto cfg = bundled(out);
  cfg.dataset = (out / "nope.csv").string();
  try {
    run_pipeline(cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::config);
  }
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(cfg.run_dir())) files.push_back(e.path().filename().string());
  EXPECT_EQ(files, (std::vector<std::string>{"manifest.json"}));
  auto manifest = nlohmann::json::parse(read_file((cfg.run_dir() / "manifest.json").string()));
  EXPECT_EQ(manifest["status"], "failed");
  EXPECT_EQ(manifest["error"]["kind"], "config");
}

TEST(Experiment, SingleStepsMatchThePipeline) {
  auto cfg = bundled(scratch("steps"), Method::nmf);
  run_preprocess(cfg);
  auto model = run_fit(cfg);
  run_label(cfg);
  auto report = run_evaluate(cfg);
  auto table = run_export(cfg);
  auto cv = run_cross_validation(cfg);
  auto full = run_pipeline(bundled(scratch("steps-full"), Method::nmf));
  EXPECT_EQ(report.predictions, full.eval.predictions);
  EXPECT_EQ(report.accuracy, full.eval.accuracy);
  EXPECT_EQ(table.rows.size(), full.features.rows.size());
  ASSERT_EQ(cv.size(), full.cv.size());
  for (std::size_t i = 0; i < cv.size(); ++i) EXPECT_EQ(cv[i].fold_accuracy, full.cv[i].fold_accuracy);
  for (const char* name : {"manifest-preprocess.json", "manifest-fit.json", "manifest-label.json",
                           "manifest-evaluate.json", "manifest-export.json", "manifest-cv.json"})
    EXPECT_TRUE(fs::exists(cfg.run_dir() / name)) << name;
}

TEST(Experiment, CompareReportsFailuresInline) {
  auto out = scratch("compare");
  auto good = bundled(out);
  auto bad = bundled(out, Method::nmf);
  bad.k = 5000;
  std::vector<std::string> failures;
  auto table = run_compare({good, bad}, &failures);
  auto rows = parse_csv(table);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0][0], "method");
  EXPECT_EQ(rows[1][0], "lda");
  EXPECT_EQ(rows[1][1], "3");
  EXPECT_EQ(std::count(rows[1][6].begin(), rows[1][6].end(), ';'), 3);
  EXPECT_EQ(rows[2][2], "ERROR:RankTooLarge");
  EXPECT_EQ(failures.size(), 1u);
}

TEST(Experiment, TopicCountScan) {
  auto cfg = bundled(scratch("scan"));
  cfg.k = 0;
  cfg.k_grid = {2, 3, 4};
  cfg.iterations = 150;
  cfg.burn_in = 50;
  auto scan = run_scan(cfg);
  EXPECT_EQ(scan.grid, (std::vector<std::size_t>{2, 3, 4}));
  EXPECT_TRUE(fs::exists(cfg.run_dir() / "coherence.csv"));
}
