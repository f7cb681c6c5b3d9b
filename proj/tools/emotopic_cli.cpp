// Command-line front end for the emotion topic-modeling experiments.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "emotopic/emotopic.hpp"

namespace {

using namespace emotopic;

struct CommonOptions {
  std::string config_file;
  std::optional<std::string> dataset, method, k, stages, seed, outdir, run_id;
  std::vector<std::string> overrides;  // key=value

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_file, "Flat key = value config file");
    cmd->add_option("--dataset", dataset, "CSV with text,label columns");
    cmd->add_option("--method", method, "lda | nlda | nmf");
    cmd->add_option("--k", k, "Topic count (0 = coherence scan over k_grid)");
    cmd->add_option("--stages", stages, "n-LDA stage count");
    cmd->add_option("--seed", seed, "Top-level seed");
    cmd->add_option("--outdir", outdir, "Output root directory");
    cmd->add_option("--run-id", run_id, "Run directory name under the output root");
    cmd->add_option("--set", overrides, "Override any config key: --set key=value")->take_all();
  }

  RunConfig resolve() const {
    RunConfig cfg = config_file.empty() ? RunConfig{} : load_config(config_file);
    auto apply = [&](const char* key, const std::optional<std::string>& v) {
      if (v) cfg.set(key, *v);
    };
    apply("dataset", dataset);
    apply("method", method);
    apply("k", k);
    apply("stages", stages);
    apply("seed", seed);
    apply("outdir", outdir);
    apply("run_id", run_id);
    for (const auto& kv : overrides) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw Error(Errc::config_error, "--set expects key=value, got '" + kv + "'");
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfg;
  }
};

void print_eval(const EvalReport& r) {
  std::cout << "accuracy " << format_sig(r.accuracy, 6) << "  macro_f1 " << format_sig(r.macro_f1, 6)
            << "  abstained " << r.abstain_count << "\n";
}

void print_cv(const std::vector<CvReport>& reports) {
  for (const auto& r : reports)
    std::cout << r.classifier << "  accuracy " << format_sig(r.pooled_accuracy, 6) << "  macro_f1 "
              << format_sig(r.macro_f1, 6) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Emotion classification of short texts with LDA, n-stage LDA and NMF topic models"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  std::vector<std::pair<CLI::App*, CommonOptions>> commands;
  commands.reserve(9);
  auto add = [&](const char* name, const char* help) {
    commands.emplace_back(app.add_subcommand(name, help), CommonOptions{});
    commands.back().second.attach(commands.back().first);
    return commands.back().first;
  };
  auto* preprocess = add("preprocess", "Normalize, tokenize and split the dataset");
  auto* scan = add("scan-k", "Score candidate topic counts by UMass coherence");
  auto* fit = add("fit", "Fit the configured topic model");
  auto* label = add("label", "Label the fitted model's topics from training documents");
  auto* eval = add("evaluate", "Direct classification accuracy on the test split");
  auto* exp = add("export", "Write topic-score features as CSV and ARFF");
  auto* cv = add("cv", "Cross-validate NB, RF and SVM on exported features");
  auto* pipeline = add("pipeline", "Run every step end to end");

  auto* compare = app.add_subcommand("compare", "Run several configs and tabulate their results");
  std::vector<std::string> compare_configs;
  std::string compare_out = "comparison.csv";
  compare->add_option("configs", compare_configs, "Config files")->required();
  compare->add_option("-o,--output", compare_out, "Comparison CSV path");

  auto* synth = app.add_subcommand("synth", "Write a synthetic labeled corpus");
  SyntheticSpec spec;
  spec.decorate = true;
  std::string synth_out = "synthetic.csv";
  synth->add_option("-o,--output", synth_out, "Output CSV path");
  synth->add_option("--docs-per-class", spec.docs_per_class);
  synth->add_option("--keywords", spec.keywords_per_class);
  synth->add_option("--noise", spec.noise_terms);
  synth->add_option("--seed", spec.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ErrorKind::config);
  }

  try {
    if (*compare) {
      std::vector<RunConfig> configs;
      for (const auto& path : compare_configs) configs.push_back(load_config(path));
      std::vector<std::string> failures;
      auto table = run_compare(configs, &failures);
      write_file(compare_out, table);
      std::cout << table;
      for (const auto& f : failures) std::cerr << "run failed: " << f << "\n";
      return failures.empty() ? 0 : static_cast<int>(ErrorKind::model);
    }
    if (*synth) {
      write_file(synth_out, dataset_csv(make_synthetic(spec)));
      return 0;
    }
    for (auto& [cmd, opts] : commands) {
      if (!*cmd) continue;
      const RunConfig cfg = opts.resolve();
      if (cmd == preprocess) {
        run_preprocess(cfg);
      } else if (cmd == scan) {
        auto s = run_scan(cfg);
        std::cout << "chosen k " << s.chosen_k << "\n";
      } else if (cmd == fit) {
        auto m = run_fit(cfg);
        std::cout << m.method_tag << ": " << m.topics() << " topics over " << m.vocab_size() << " terms\n";
      } else if (cmd == label) {
        run_label(cfg);
      } else if (cmd == eval) {
        print_eval(run_evaluate(cfg));
      } else if (cmd == exp) {
        auto t = run_export(cfg);
        std::cout << t.size() << " rows\n";
      } else if (cmd == cv) {
        print_cv(run_cross_validation(cfg));
      } else if (cmd == pipeline) {
        auto r = run_pipeline(cfg);
        std::cout << r.method_label << " (" << r.classes << " classes) ";
        print_eval(r.eval);
        print_cv(r.cv);
        std::cout << "artifacts in " << r.run_dir.string() << "\n";
      }
      std::cout << "run directory " << cfg.run_dir().string() << "\n";
    }
  } catch (const Error& e) {
    std::cerr << error_line(e) << "\n";
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    std::cerr << error_line(Error(Errc::io_error, e.what())) << "\n";
    return static_cast<int>(ErrorKind::io);
  }
  return 0;
}
