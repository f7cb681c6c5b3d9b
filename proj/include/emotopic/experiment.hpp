#pragma once

// Reproducible experiments: preprocess -> split -> (coherence scan) -> fit
// -> label -> evaluate -> export -> cross-validate, with every artifact and a
// manifest written under <outdir>/<run-id>/.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "emotopic/config.hpp"
#include "emotopic/corpus.hpp"
#include "emotopic/io.hpp"
#include "emotopic/lda.hpp"
#include "emotopic/ml/cross_validation.hpp"
#include "emotopic/ml/features.hpp"
#include "emotopic/nlda.hpp"
#include "emotopic/nmf.hpp"
#include "emotopic/pipeline.hpp"

#ifndef EMOTOPIC_VERSION
#define EMOTOPIC_VERSION "0.0.0"
#endif

namespace emotopic {

inline constexpr std::string_view kVersion = EMOTOPIC_VERSION;

struct PreparedData {
  Corpus full;
  Corpus train;
  Corpus test;
};

inline PreprocessConfig make_preprocess(const RunConfig& cfg) {
  PreprocessConfig p;
  if (!cfg.stopwords.empty()) p.stopwords = load_term_set(cfg.stopwords);
  if (!cfg.noise_words.empty()) p.noise_words = load_term_set(cfg.noise_words);
  if (!cfg.suffixes.empty()) p.stemmer = load_suffix_stemmer(cfg.suffixes);
  return p;
}

inline PreparedData prepare(const RunConfig& cfg) {
  auto raw = load_dataset(cfg.dataset);
  PreparedData data;
  data.full = build_corpus(raw, make_preprocess(cfg));
  if (!data.full.labeled()) throw Error(Errc::unlabeled_corpus, "the dataset has no labels");
  std::tie(data.train, data.test) = split_train_test(data.full, cfg.train_fraction, derive_seed(cfg.seed, "split"));
  return data;
}

inline LdaParams lda_params(const RunConfig& cfg, std::size_t k) {
  LdaParams p;
  p.topics = k;
  p.alpha = cfg.alpha;
  p.beta = cfg.beta;
  p.iterations = cfg.iterations;
  p.burn_in = cfg.burn_in;
  p.seed = derive_seed(cfg.seed, "lda");
  return p;
}

inline NmfParams nmf_params(const RunConfig& cfg, std::size_t k) {
  NmfParams p;
  p.rank = k;
  p.iterations = cfg.nmf_iterations;
  p.tol = cfg.tol;
  p.init_scale = cfg.init_scale;
  p.seed = derive_seed(cfg.seed, "nmf");
  return p;
}

inline CoherenceScan scan_topic_counts(const RunConfig& cfg, const Corpus& train) {
  return select_topic_count(train, cfg.k_grid, lda_params(cfg, cfg.k_grid.front()), cfg.coherence_top_n);
}

struct FitOutcome {
  TopicModel model;
  std::optional<CoherenceScan> scan;
  std::vector<StageReport> stages;
  std::optional<NmfModel> nmf;
};

/// Topic count comes from cfg.k, or from a coherence scan over cfg.k_grid
/// (the NMF rank reuses the LDA-selected count).
inline FitOutcome fit_configured(const RunConfig& cfg, const Corpus& train) {
  FitOutcome out;
  std::size_t k = cfg.k;
  if (k == 0) {
    out.scan = scan_topic_counts(cfg, train);
    k = out.scan->chosen_k;
  }
  switch (cfg.method) {
    case Method::lda:
      out.model = fit_lda(train, lda_params(cfg, k));
      break;
    case Method::nlda: {
      PruneOptions opts{cfg.scope, cfg.top_m};
      auto result = run_nlda(train, lda_params(cfg, k), cfg.stages, opts, cfg.track);
      out.model = std::move(result.final_model);
      out.stages = std::move(result.stage_reports);
      break;
    }
    case Method::nmf: {
      auto matrix = to_term_matrix(train, cfg.matrix_mode);
      out.nmf = fit_nmf(matrix, nmf_params(cfg, k));
      out.model = as_topic_model(*out.nmf, train.vocab);
      break;
    }
  }
  return out;
}

inline std::vector<ClassifierSpec> configured_classifiers(const RunConfig& cfg) {
  ForestParams rf;
  rf.trees = cfg.trees;
  rf.max_depth = cfg.max_depth;
  rf.min_leaf = cfg.min_leaf;
  rf.features_per_split = cfg.features_per_split;
  SvmParams svm;
  svm.lambda = cfg.lambda;
  svm.epochs = cfg.svm_epochs;
  return {NbSpec{}, RfSpec{rf}, SvmSpec{svm}};
}

inline std::vector<CvReport> run_cv(const RunConfig& cfg, const FeatureTable& table) {
  std::vector<CvReport> reports;
  for (const auto& spec : configured_classifiers(cfg))
    reports.push_back(cross_validate(table, spec, cfg.folds, derive_seed(cfg.seed, "cv")));
  return reports;
}

inline FeatureTable configured_features(const RunConfig& cfg, const PreparedData& data, const TopicModel& model) {
  return export_features(cfg.cv_scope == "train" ? data.train : data.full, model);
}

/// Writes artifacts under the run directory and the run manifest.
class RunRecorder {
 public:
  RunRecorder(RunConfig cfg, std::string command)
      : cfg_(std::move(cfg)), command_(std::move(command)), dir_(cfg_.run_dir()) {}

  const std::filesystem::path& dir() const noexcept { return dir_; }

  void begin(std::string step) {
    steps_.push_back({std::move(step), {}, 0.0});
    started_ = std::chrono::steady_clock::now();
  }

  void end() {
    steps_.back().seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
  }

  void write(const std::string& name, std::string_view content) {
    ensure_dir();
    write_file((dir_ / name).string(), content);
    steps_.back().files.push_back(name);
  }

  /// Appends to a file shared by all runs in the output directory.
  void append_shared(const std::string& name, std::string_view header, std::string_view line) {
    const auto path = std::filesystem::path(cfg_.outdir) / name;
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    const bool fresh = !std::filesystem::exists(path);
    std::ofstream out(path, std::ios::app | std::ios::binary);
    if (!out) throw Error(Errc::io_error, "cannot append to '" + path.string() + "'");
    if (fresh) out << header;
    out << line;
    steps_.back().files.push_back("../" + name);
  }

  std::string manifest_name() const { return command_ == "pipeline" ? "manifest.json" : "manifest-" + command_ + ".json"; }

  void finish(const Error* error = nullptr) {
    nlohmann::ordered_json j;
    j["command"] = command_;
    j["status"] = error ? "failed" : "ok";
    j["version"] = std::string(kVersion);
    j["run_id"] = cfg_.resolved_run_id();
    nlohmann::ordered_json config;
    for (const auto& [k, v] : cfg_.entries()) config[k] = v;
    j["config"] = config;
    auto steps = nlohmann::ordered_json::array();
    for (const auto& s : steps_) steps.push_back({{"name", s.name}, {"files", s.files}, {"seconds", s.seconds}});
    j["steps"] = steps;
    if (error)
      j["error"] = {{"kind", std::string(kind_name(error->kind()))},
                    {"code", std::string(errc_name(error->code()))},
                    {"message", error->what()}};
    ensure_dir();
    write_file((dir_ / manifest_name()).string(), j.dump(2) + "\n");
  }

 private:
  struct Step {
    std::string name;
    std::vector<std::string> files;
    double seconds;
  };

  void ensure_dir() {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw Error(Errc::io_error, "cannot create '" + dir_.string() + "': " + ec.message());
  }

  RunConfig cfg_;
  std::string command_;
  std::filesystem::path dir_;
  std::vector<Step> steps_;
  std::chrono::steady_clock::time_point started_;
};

inline std::string summary_header() { return "method,classes,accuracy,macro_f1\n"; }

inline std::string summary_line(const RunConfig& cfg, std::size_t classes, const EvalReport& r) {
  return cfg.method_label() + "," + std::to_string(classes) + "," + format_sig(r.accuracy) + "," +
         format_sig(r.macro_f1) + "\n";
}

struct PipelineResult {
  std::string method_label;
  std::size_t classes = 0;
  TopicModel model;
  TopicLabeling labeling;
  EvalReport eval;
  FeatureTable features;
  std::vector<CvReport> cv;
  std::vector<StageReport> stages;
  std::filesystem::path run_dir;
};

namespace detail {

// Runs `body` with a recorder; on failure the manifest is written as failed
// and the error rethrown.
template <class Body>
auto recorded(const RunConfig& cfg, const std::string& command, Body&& body) {
  RunRecorder rec(cfg, command);
  try {
    cfg.validate();
    if constexpr (std::is_void_v<decltype(body(rec))>) {
      body(rec);
      rec.finish();
    } else {
      auto result = body(rec);
      rec.finish();
      return result;
    }
  } catch (const Error& e) {
    rec.finish(&e);
    throw;
  } catch (const std::exception& e) {
    Error wrapped(Errc::io_error, e.what());
    rec.finish(&wrapped);
    throw wrapped;
  }
}

inline void write_fit_artifacts(RunRecorder& rec, const FitOutcome& fit) {
  if (fit.scan) rec.write("coherence.csv", coherence_csv(*fit.scan));
  rec.write("model.txt", serialize_model(fit.model));
  rec.write("top_words.csv", top_words_csv(fit.model, 10));
  if (!fit.stages.empty()) {
    rec.write("stages.csv", stage_csv(fit.stages));
    rec.write("thresholds.csv", threshold_csv(fit.stages));
    if (!fit.stages.front().tracked.empty()) rec.write("tracking.csv", tracking_csv(fit.stages));
  }
  if (fit.nmf) rec.write("nmf_trace.csv", nmf_trace_csv(*fit.nmf));
}

inline void write_preprocess_artifacts(RunRecorder& rec, const PreparedData& data) {
  rec.write("vocabulary.csv", vocabulary_csv(*data.full.vocab));
  std::string report = "documents,empty_documents,vocab_size,tokens,train_documents,test_documents\n";
  report += std::to_string(data.full.size()) + "," + std::to_string(data.full.empty_docs.size()) + "," +
            std::to_string(data.full.vocab->size()) + "," + std::to_string(data.full.token_count()) + "," +
            std::to_string(data.train.size()) + "," + std::to_string(data.test.size()) + "\n";
  rec.write("preprocess.csv", report);
  std::string split = "doc_id,split\n";
  for (auto id : data.train.doc_ids) split += std::to_string(id) + ",train\n";
  for (auto id : data.test.doc_ids) split += std::to_string(id) + ",test\n";
  rec.write("split.csv", split);
  std::string tokens = "doc_id,label,tokens\n";
  for (std::size_t d = 0; d < data.full.size(); ++d) {
    std::string joined;
    for (auto t : data.full.docs[d]) joined += (joined.empty() ? "" : " ") + data.full.vocab->term(t);
    tokens += csv_line({std::to_string(data.full.doc_ids[d]), data.full.class_names[data.full.labels[d]], joined});
  }
  rec.write("corpus.csv", tokens);
}

}  // namespace detail

inline PipelineResult run_pipeline(const RunConfig& cfg) {
  return detail::recorded(cfg, "pipeline", [&](RunRecorder& rec) {
    PipelineResult res;
    res.method_label = cfg.method_label();
    res.run_dir = rec.dir();

    rec.begin("preprocess");
    const auto data = prepare(cfg);
    res.classes = data.full.class_names.size();
    detail::write_preprocess_artifacts(rec, data);
    rec.end();

    rec.begin("fit");
    auto fit = fit_configured(cfg, data.train);
    detail::write_fit_artifacts(rec, fit);
    res.stages = fit.stages;
    rec.end();

    rec.begin("label");
    res.labeling = label_topics(fit.model, data.train);
    apply_label_overrides(res.labeling, cfg.topic_labels);
    rec.write("labeling.csv", labeling_csv(res.labeling));
    rec.end();

    rec.begin("evaluate");
    res.eval = evaluate(fit.model, res.labeling, data.test);
    rec.write("eval.csv", eval_csv(res.eval));
    rec.write("predictions.csv", predictions_csv(data.test, res.eval));
    rec.append_shared("summary.csv", summary_header(), summary_line(cfg, res.classes, res.eval));
    rec.end();

    rec.begin("export");
    res.features = configured_features(cfg, data, fit.model);
    rec.write("features.csv", feature_csv(res.features));
    rec.write("features.arff", write_arff(res.features, "emotion-" + cfg.method_label()));
    rec.end();

    rec.begin("cv");
    res.cv = run_cv(cfg, res.features);
    rec.write("cv.csv", cv_csv(res.cv));
    rec.end();

    res.model = std::move(fit.model);
    return res;
  });
}

// ---- single steps, sharing the run directory ---------------------------

inline void run_preprocess(const RunConfig& cfg) {
  detail::recorded(cfg, "preprocess", [&](RunRecorder& rec) {
    rec.begin("preprocess");
    detail::write_preprocess_artifacts(rec, prepare(cfg));
    rec.end();
  });
}

inline CoherenceScan run_scan(const RunConfig& cfg) {
  return detail::recorded(cfg, "scan-k", [&](RunRecorder& rec) {
    rec.begin("scan-k");
    auto scan = scan_topic_counts(cfg, prepare(cfg).train);
    rec.write("coherence.csv", coherence_csv(scan));
    rec.end();
    return scan;
  });
}

inline TopicModel run_fit(const RunConfig& cfg) {
  return detail::recorded(cfg, "fit", [&](RunRecorder& rec) {
    rec.begin("fit");
    auto fit = fit_configured(cfg, prepare(cfg).train);
    detail::write_fit_artifacts(rec, fit);
    rec.end();
    return fit.model;
  });
}

inline TopicModel load_run_model(const RunConfig& cfg) {
  return parse_model(read_file((cfg.run_dir() / "model.txt").string()));
}

inline TopicLabeling run_label(const RunConfig& cfg) {
  return detail::recorded(cfg, "label", [&](RunRecorder& rec) {
    rec.begin("label");
    auto model = load_run_model(cfg);
    auto lab = label_topics(model, prepare(cfg).train);
    apply_label_overrides(lab, cfg.topic_labels);
    rec.write("labeling.csv", labeling_csv(lab));
    rec.end();
    return lab;
  });
}

inline EvalReport run_evaluate(const RunConfig& cfg) {
  return detail::recorded(cfg, "evaluate", [&](RunRecorder& rec) {
    rec.begin("evaluate");
    auto model = load_run_model(cfg);
    auto lab = parse_labeling(read_file((cfg.run_dir() / "labeling.csv").string()));
    const auto data = prepare(cfg);
    auto report = evaluate(model, lab, data.test);
    rec.write("eval.csv", eval_csv(report));
    rec.write("predictions.csv", predictions_csv(data.test, report));
    rec.append_shared("summary.csv", summary_header(), summary_line(cfg, data.full.class_names.size(), report));
    rec.end();
    return report;
  });
}

inline FeatureTable run_export(const RunConfig& cfg) {
  return detail::recorded(cfg, "export", [&](RunRecorder& rec) {
    rec.begin("export");
    auto table = configured_features(cfg, prepare(cfg), load_run_model(cfg));
    rec.write("features.csv", feature_csv(table));
    rec.write("features.arff", write_arff(table, "emotion-" + cfg.method_label()));
    rec.end();
    return table;
  });
}

inline std::vector<CvReport> run_cross_validation(const RunConfig& cfg) {
  return detail::recorded(cfg, "cv", [&](RunRecorder& rec) {
    rec.begin("cv");
    auto table = parse_feature_csv(read_file((cfg.run_dir() / "features.csv").string()));
    auto reports = run_cv(cfg, table);
    rec.write("cv.csv", cv_csv(reports));
    rec.end();
    return reports;
  });
}

// ---- comparison ---------------------------------------------------------

inline std::string comparison_header() { return "method,classes,direct_accuracy,nb_acc,rf_acc,svm_acc,macro_f1s\n"; }

/// One row per config. A failed run gets `ERROR:<code>` in place of its
/// numbers; the macro_f1s field joins direct/nb/rf/svm macro-F1 with ';'.
inline std::string run_compare(const std::vector<RunConfig>& configs, std::vector<std::string>* failures = nullptr) {
  if (configs.empty()) throw Error(Errc::config_error, "compare needs at least one config");
  for (const auto& c : configs)
    if (c.dataset != configs.front().dataset)
      throw Error(Errc::config_error, "compare needs the same dataset in every config");
  std::string out = comparison_header();
  for (const auto& cfg : configs) {
    try {
      auto r = run_pipeline(cfg);
      auto acc = [&](std::string_view name) {
        for (const auto& cv : r.cv)
          if (cv.classifier == name) return cv;
        return CvReport{};
      };
      const auto nb = acc("nb"), rf = acc("rf"), svm = acc("svm");
      out += csv_line({r.method_label, std::to_string(r.classes), format_sig(r.eval.accuracy),
                       format_sig(nb.pooled_accuracy), format_sig(rf.pooled_accuracy), format_sig(svm.pooled_accuracy),
                       format_sig(r.eval.macro_f1) + ";" + format_sig(nb.macro_f1) + ";" + format_sig(rf.macro_f1) +
                           ";" + format_sig(svm.macro_f1)});
    } catch (const Error& e) {
      if (failures) failures->push_back(cfg.method_label() + ": " + e.what());
      out += csv_line({cfg.method_label(), "", "ERROR:" + std::string(errc_name(e.code())), "", "", "", ""});
    }
  }
  return out;
}

/// Single-line machine-readable failure report.
inline std::string error_line(const Error& e) {
  return "error kind=" + std::string(kind_name(e.kind())) + " code=" + std::string(errc_name(e.code())) +
         " message=\"" + e.what() + "\"";
}

}  // namespace emotopic
