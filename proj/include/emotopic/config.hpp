#pragma once

// Flat `key = value` run configuration. Keys accept '-' or '_' as word
// separators; '#' starts a comment line. Later assignments win, so CLI
// overrides are applied after the file.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "emotopic/corpus.hpp"
#include "emotopic/csv.hpp"
#include "emotopic/nlda.hpp"

namespace emotopic {

enum class Method { lda, nlda, nmf };

inline std::string_view method_name(Method m) {
  switch (m) {
    case Method::lda: return "lda";
    case Method::nlda: return "nlda";
    case Method::nmf: return "nmf";
  }
  return "?";
}

struct RunConfig {
  std::string dataset;
  std::string stopwords;
  std::string noise_words;
  std::string suffixes;

  Method method = Method::lda;
  std::size_t k = 0;  // 0: pick from k_grid by coherence
  std::vector<std::size_t> k_grid{2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
  std::size_t stages = 3;
  PruneScope scope = PruneScope::all;
  std::size_t top_m = 100;
  std::size_t coherence_top_n = 10;
  std::vector<std::string> track;

  std::optional<double> alpha;
  double beta = 0.01;
  std::size_t iterations = 1000;
  std::size_t burn_in = 200;

  std::size_t nmf_iterations = 500;
  double tol = 1e-6;
  double init_scale = 1.0;
  MatrixMode matrix_mode = MatrixMode::tfidf;

  double lambda = 1e-4;
  std::size_t svm_epochs = 200;
  std::size_t trees = 100;
  std::size_t max_depth = 0;
  std::size_t min_leaf = 1;
  std::size_t features_per_split = 0;
  std::size_t folds = 10;
  std::string cv_scope = "full";  // full | train

  std::uint64_t seed = 1;
  double train_fraction = 0.8;
  std::string outdir = "runs";
  std::string run_id;
  std::map<std::size_t, std::string> topic_labels;

  /// "lda", "nlda-<stages>" or "nmf".
  std::string method_label() const {
    if (method == Method::nlda) return "nlda-" + std::to_string(stages);
    return std::string(method_name(method));
  }

  std::string resolved_run_id() const {
    return run_id.empty() ? method_label() + "-s" + std::to_string(seed) : run_id;
  }

  std::filesystem::path run_dir() const { return std::filesystem::path(outdir) / resolved_run_id(); }

  void set(std::string key, const std::string& value);
  void validate() const;
  std::vector<std::pair<std::string, std::string>> entries() const;
  std::string to_text() const;
};

namespace detail {

[[noreturn]] inline void config_fail(const std::string& why) { throw Error(Errc::config_error, why); }

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

inline std::size_t to_count(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  unsigned long long n = 0;
  try {
    n = std::stoull(v, &pos);
  } catch (const std::exception&) {
    config_fail("'" + key + "' expects a non-negative integer, got '" + v + "'");
  }
  if (pos != v.size() || v.starts_with('-')) config_fail("'" + key + "' expects a non-negative integer, got '" + v + "'");
  return static_cast<std::size_t>(n);
}

inline double to_real(const std::string& key, const std::string& v) {
  try {
    return parse_double(v);
  } catch (const Error&) {
    config_fail("'" + key + "' expects a number, got '" + v + "'");
  }
}

}  // namespace detail

inline void RunConfig::set(std::string key, const std::string& raw) {
  using namespace detail;
  for (auto& ch : key)
    if (ch == '-') ch = '_';
  const std::string v = trim(raw);
  if (key == "dataset") dataset = v;
  else if (key == "stopwords") stopwords = v;
  else if (key == "noise_words") noise_words = v;
  else if (key == "suffixes") suffixes = v;
  else if (key == "method") {
    if (v == "lda") method = Method::lda;
    else if (v == "nlda") method = Method::nlda;
    else if (v == "nmf") method = Method::nmf;
    else config_fail("unknown method '" + v + "' (expected lda, nlda or nmf)");
  } else if (key == "k") k = to_count(key, v);
  else if (key == "k_grid") {
    k_grid.clear();
    for (const auto& item : split_list(v)) k_grid.push_back(to_count(key, item));
  } else if (key == "stages") stages = to_count(key, v);
  else if (key == "scope") {
    if (v == "all") scope = PruneScope::all;
    else if (v == "top_m" || v == "top-m") scope = PruneScope::top_m;
    else config_fail("unknown pruning scope '" + v + "' (expected all or top_m)");
  } else if (key == "top_m") top_m = to_count(key, v);
  else if (key == "coherence_top_n") coherence_top_n = to_count(key, v);
  else if (key == "track") track = split_list(v);
  else if (key == "alpha") {
    if (v == "auto" || v.empty()) alpha.reset();
    else alpha = to_real(key, v);
  } else if (key == "beta") beta = to_real(key, v);
  else if (key == "iterations") iterations = to_count(key, v);
  else if (key == "burn_in") burn_in = to_count(key, v);
  else if (key == "nmf_iterations") nmf_iterations = to_count(key, v);
  else if (key == "tol") tol = to_real(key, v);
  else if (key == "init_scale") init_scale = to_real(key, v);
  else if (key == "matrix_mode") {
    if (v == "counts") matrix_mode = MatrixMode::counts;
    else if (v == "tfidf") matrix_mode = MatrixMode::tfidf;
    else config_fail("unknown matrix mode '" + v + "' (expected counts or tfidf)");
  } else if (key == "lambda") lambda = to_real(key, v);
  else if (key == "svm_epochs") svm_epochs = to_count(key, v);
  else if (key == "trees") trees = to_count(key, v);
  else if (key == "max_depth") max_depth = to_count(key, v);
  else if (key == "min_leaf") min_leaf = to_count(key, v);
  else if (key == "features_per_split") features_per_split = to_count(key, v);
  else if (key == "folds") folds = to_count(key, v);
  else if (key == "cv_scope") {
    if (v != "full" && v != "train") config_fail("cv_scope must be full or train");
    cv_scope = v;
  } else if (key == "seed") seed = to_count(key, v);
  else if (key == "train_fraction") train_fraction = to_real(key, v);
  else if (key == "outdir") outdir = v;
  else if (key == "run_id") run_id = v;
  else if (key == "topic_labels") {
    topic_labels.clear();
    for (const auto& item : split_list(v)) {
      auto colon = item.find(':');
      if (colon == std::string::npos) config_fail("topic_labels entries look like <topic>:<class>");
      topic_labels[to_count(key, trim(item.substr(0, colon)))] = trim(item.substr(colon + 1));
    }
  } else {
    config_fail("unknown configuration key '" + key + "'");
  }
}

inline void RunConfig::validate() const {
  using detail::config_fail;
  namespace fs = std::filesystem;
  if (dataset.empty()) config_fail("no dataset given");
  for (const auto* path : {&dataset, &stopwords, &noise_words, &suffixes})
    if (!path->empty() && !fs::is_regular_file(*path)) config_fail("file not found: " + *path);
  if (k == 0 && k_grid.empty()) config_fail("either k or k_grid must be set");
  for (auto g : k_grid)
    if (k == 0 && g < 2) config_fail("k_grid entries must be >= 2");
  if (method == Method::nlda && stages < 1) config_fail("stages must be >= 1");
  if (scope == PruneScope::top_m && top_m < 1) config_fail("top_m must be >= 1");
  if (coherence_top_n < 2) config_fail("coherence_top_n must be >= 2");
  if (alpha && !(*alpha > 0.0)) config_fail("alpha must be > 0");
  if (!(beta > 0.0)) config_fail("beta must be > 0");
  if (iterations <= burn_in) config_fail("iterations must exceed burn_in");
  if (nmf_iterations < 1) config_fail("nmf_iterations must be >= 1");
  if (!(tol >= 0.0)) config_fail("tol must be >= 0");
  if (!(init_scale > 0.0)) config_fail("init_scale must be > 0");
  if (!(lambda > 0.0)) config_fail("lambda must be > 0");
  if (svm_epochs < 1) config_fail("svm_epochs must be >= 1");
  if (trees < 1) config_fail("trees must be >= 1");
  if (min_leaf < 1) config_fail("min_leaf must be >= 1");
  if (folds < 2) config_fail("folds must be >= 2");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) config_fail("train_fraction must lie in (0, 1)");
}

inline std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
  auto list = [](const auto& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ',';
      if constexpr (std::is_same_v<std::decay_t<decltype(v[i])>, std::string>) s += v[i];
      else s += std::to_string(v[i]);
    }
    return s;
  };
  std::string labels;
  for (const auto& [t, c] : topic_labels) labels += (labels.empty() ? "" : ",") + std::to_string(t) + ":" + c;
  return {
      {"dataset", dataset},
      {"stopwords", stopwords},
      {"noise_words", noise_words},
      {"suffixes", suffixes},
      {"method", std::string(method_name(method))},
      {"k", std::to_string(k)},
      {"k_grid", list(k_grid)},
      {"stages", std::to_string(stages)},
      {"scope", scope == PruneScope::all ? "all" : "top_m"},
      {"top_m", std::to_string(top_m)},
      {"coherence_top_n", std::to_string(coherence_top_n)},
      {"track", list(track)},
      {"alpha", alpha ? format_shortest(*alpha) : "auto"},
      {"beta", format_shortest(beta)},
      {"iterations", std::to_string(iterations)},
      {"burn_in", std::to_string(burn_in)},
      {"nmf_iterations", std::to_string(nmf_iterations)},
      {"tol", format_shortest(tol)},
      {"init_scale", format_shortest(init_scale)},
      {"matrix_mode", std::string(matrix_mode_name(matrix_mode))},
      {"lambda", format_shortest(lambda)},
      {"svm_epochs", std::to_string(svm_epochs)},
      {"trees", std::to_string(trees)},
      {"max_depth", std::to_string(max_depth)},
      {"min_leaf", std::to_string(min_leaf)},
      {"features_per_split", std::to_string(features_per_split)},
      {"folds", std::to_string(folds)},
      {"cv_scope", cv_scope},
      {"seed", std::to_string(seed)},
      {"train_fraction", format_shortest(train_fraction)},
      {"outdir", outdir},
      {"run_id", run_id},
      {"topic_labels", labels},
  };
}

inline std::string RunConfig::to_text() const {
  std::string out;
  for (const auto& [k, v] : entries()) out += k + " = " + v + "\n";
  return out;
}

inline void apply_config_text(RunConfig& cfg, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = detail::trim(line);
    if (t.empty() || t.starts_with('#')) continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      detail::config_fail("config line " + std::to_string(lineno) + ": expected key = value");
    cfg.set(detail::trim(t.substr(0, eq)), t.substr(eq + 1));
  }
}

/// Relative file paths inside a config file resolve against its directory.
inline RunConfig load_config(const std::string& path) {
  namespace fs = std::filesystem;
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error&) {
    detail::config_fail("cannot read config file '" + path + "'");
  }
  RunConfig cfg;
  apply_config_text(cfg, text);
  const fs::path base = fs::path(path).parent_path();
  for (auto* p : {&cfg.dataset, &cfg.stopwords, &cfg.noise_words, &cfg.suffixes})
    if (!p->empty() && fs::path(*p).is_relative()) *p = (base / *p).lexically_normal().string();
  return cfg;
}

}  // namespace emotopic
