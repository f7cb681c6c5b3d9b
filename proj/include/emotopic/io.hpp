#pragma once

// Text formats: dataset CSV, persisted topic models, and the CSV reports
// written by the experiment runner.

#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "emotopic/corpus.hpp"
#include "emotopic/csv.hpp"
#include "emotopic/lda.hpp"
#include "emotopic/ml/cross_validation.hpp"
#include "emotopic/nlda.hpp"
#include "emotopic/nmf.hpp"
#include "emotopic/pipeline.hpp"

namespace emotopic {

// ---------------------------------------------------------------- dataset

/// Header must name a `text` column; a `label` column is optional. Column
/// order is free. Row ids are 0-based data row indices.
inline std::vector<RawDocument> parse_dataset(std::string_view content) {
  auto rows = parse_csv(content);
  if (rows.empty()) throw Error(Errc::parse_error, "dataset: missing header");
  const auto& header = rows[0];
  std::optional<std::size_t> text_col, label_col;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "text") text_col = i;
    else if (header[i] == "label") label_col = i;
  }
  if (!text_col) throw Error(Errc::parse_error, "dataset: header has no 'text' column");
  std::vector<RawDocument> docs;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size())
      throw Error(Errc::parse_error, "dataset: row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                                         " fields, expected " + std::to_string(header.size()));
    RawDocument d{r - 1, row[*text_col], std::nullopt};
    if (label_col && !row[*label_col].empty()) d.label = row[*label_col];
    docs.push_back(std::move(d));
  }
  return docs;
}

inline std::vector<RawDocument> load_dataset(const std::string& path) { return parse_dataset(read_file(path)); }

inline std::string dataset_csv(std::span<const RawDocument> docs) {
  std::string out = "text,label\n";
  for (const auto& d : docs) out += csv_line({d.text, d.label.value_or("")});
  return out;
}

// ------------------------------------------------------------ topic model

inline constexpr std::string_view kModelMagic = "emotopic-topic-model v1";

namespace detail {

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline void write_matrix(std::string& out, const RowMatrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ' ';
      out += format_sig(m(r, c));
    }
    out += '\n';
  }
}

inline std::string join_indices(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace detail

/// Line-oriented model file: a header of `key value` lines, the vocabulary
/// (one term per line), then phi and theta as rows of 12-significant-digit
/// decimals.
inline std::string serialize_model(const TopicModel& m) {
  std::string out(kModelMagic);
  out += "\nmethod " + m.method_tag + "\n";
  out += "topics " + std::to_string(m.topics()) + "\n";
  out += "vocab_size " + std::to_string(m.vocab_size()) + "\n";
  out += "docs " + std::to_string(m.theta.rows()) + "\n";
  if (const auto* p = std::get_if<LdaParams>(&m.params)) {
    out += "family lda\n";
    out += "param alpha " + (p->alpha ? format_shortest(*p->alpha) : std::string("auto")) + "\n";
    out += "param beta " + format_shortest(p->beta) + "\n";
    out += "param iterations " + std::to_string(p->iterations) + "\n";
    out += "param burn_in " + std::to_string(p->burn_in) + "\n";
    out += "param seed " + std::to_string(p->seed) + "\n";
  } else {
    const auto& q = std::get<NmfParams>(m.params);
    out += "family nmf\n";
    out += "param iterations " + std::to_string(q.iterations) + "\n";
    out += "param tol " + format_shortest(q.tol) + "\n";
    out += "param init_scale " + format_shortest(q.init_scale) + "\n";
    out += "param seed " + std::to_string(q.seed) + "\n";
  }
  out += "vocab_hash " + detail::hex64(m.vocab->hash()) + "\n";
  out += "degenerate_topics " + detail::join_indices(m.degenerate_topics) + "\n";
  out += "degenerate_docs " + detail::join_indices(m.degenerate_docs) + "\n";
  out += "vocab\n";
  for (const auto& t : m.vocab->terms()) out += t + "\n";
  out += "phi\n";
  detail::write_matrix(out, m.phi);
  out += "theta\n";
  detail::write_matrix(out, m.theta);
  out += "end\n";
  return out;
}

inline TopicModel parse_model(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  auto fail = [](const std::string& why) { return Error(Errc::parse_error, "model file: " + why); };
  if (!std::getline(in, line) || line != kModelMagic) throw fail("bad magic line");

  std::map<std::string, std::string> header;
  std::map<std::string, std::string> params;
  while (std::getline(in, line) && line != "vocab") {
    auto sp = line.find(' ');
    std::string key = line.substr(0, sp);
    std::string value = sp == std::string::npos ? "" : line.substr(sp + 1);
    if (key == "param") {
      auto sp2 = value.find(' ');
      params[value.substr(0, sp2)] = sp2 == std::string::npos ? "" : value.substr(sp2 + 1);
    } else {
      header[key] = value;
    }
  }
  auto num = [&](const std::string& key) -> std::size_t {
    auto it = header.find(key);
    if (it == header.end()) throw fail("missing '" + key + "'");
    return std::stoul(it->second);
  };
  auto indices = [&](const std::string& key) {
    std::vector<std::size_t> v;
    std::stringstream ss(header[key]);
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) v.push_back(std::stoul(tok));
    return v;
  };
  const std::size_t K = num("topics"), V = num("vocab_size"), D = num("docs");

  std::vector<std::string> terms;
  for (std::size_t i = 0; i < V; ++i) {
    if (!std::getline(in, line)) throw fail("truncated vocabulary");
    terms.push_back(line);
  }
  auto read_matrix = [&](std::string_view tag, std::size_t rows, std::size_t cols) {
    if (!std::getline(in, line) || line != tag) throw fail("expected '" + std::string(tag) + "'");
    RowMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
      if (!std::getline(in, line)) throw fail("truncated matrix");
      std::istringstream row(line);
      std::string tok;
      for (std::size_t c = 0; c < cols; ++c) {
        if (!(row >> tok)) throw fail("short matrix row");
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = parse_double(tok);
      }
    }
    return m;
  };

  TopicModel m;
  m.vocab = std::make_shared<Vocabulary>(std::move(terms), std::vector<std::size_t>{});
  if (header.count("vocab_hash") && header["vocab_hash"] != detail::hex64(m.vocab->hash()))
    throw fail("vocabulary hash mismatch");
  m.phi = read_matrix("phi", K, V);
  m.theta = read_matrix("theta", D, K);
  m.method_tag = header["method"];
  m.degenerate_topics = indices("degenerate_topics");
  m.degenerate_docs = indices("degenerate_docs");
  if (header["family"] == "nmf") {
    NmfParams p;
    p.rank = K;
    p.iterations = std::stoul(params["iterations"]);
    p.tol = parse_double(params["tol"]);
    p.init_scale = parse_double(params["init_scale"]);
    p.seed = std::stoull(params["seed"]);
    m.params = p;
  } else {
    LdaParams p;
    p.topics = K;
    if (params["alpha"] != "auto") p.alpha = parse_double(params["alpha"]);
    p.beta = parse_double(params["beta"]);
    p.iterations = std::stoul(params["iterations"]);
    p.burn_in = std::stoul(params["burn_in"]);
    p.seed = std::stoull(params["seed"]);
    m.params = p;
  }
  return m;
}

// ---------------------------------------------------------------- reports

inline std::string vocabulary_csv(const Vocabulary& v) {
  std::string out = "term,df\n";
  for (TermId t = 0; t < v.size(); ++t) out += csv_line({v.term(t), std::to_string(v.df(t))});
  return out;
}

inline std::string coherence_csv(const CoherenceScan& scan) {
  std::string out = "k,mean_coherence\n";
  for (std::size_t i = 0; i < scan.grid.size(); ++i)
    out += std::to_string(scan.grid[i]) + "," + format_sig(scan.scores[i]) + "\n";
  return out;
}

inline std::string stage_csv(std::span<const StageReport> reports) {
  std::string out = "stage,vocab_before,vocab_after\n";
  for (const auto& r : reports)
    out += std::to_string(r.stage) + "," + std::to_string(r.vocab_before) + "," + std::to_string(r.vocab_after) + "\n";
  return out;
}

/// `term,stage,max_phi`; pruned terms have an empty max_phi.
inline std::string tracking_csv(std::span<const StageReport> reports) {
  std::string out = "term,stage,max_phi\n";
  for (const auto& r : reports)
    for (const auto& t : r.tracked)
      out += csv_line({t.term, std::to_string(r.stage), t.max_phi ? format_sig(*t.max_phi) : std::string()});
  return out;
}

inline std::string threshold_csv(std::span<const StageReport> reports) {
  std::string out = "stage,topic,threshold\n";
  for (const auto& r : reports)
    for (std::size_t k = 0; k < r.thresholds.size(); ++k)
      out += std::to_string(r.stage) + "," + std::to_string(k) + "," + format_sig(r.thresholds[k]) + "\n";
  return out;
}

inline std::string nmf_trace_csv(const NmfModel& m) {
  std::string out = "iteration,objective\n";
  out += "0," + format_sig(m.initial_objective) + "\n";
  for (std::size_t i = 0; i < m.objective_trace.size(); ++i)
    out += std::to_string(i + 1) + "," + format_sig(m.objective_trace[i]) + "\n";
  return out;
}

inline std::string top_words_csv(const TopicModel& m, std::size_t n) {
  std::string out = "topic,rank,term,weight\n";
  for (std::size_t k = 0; k < m.topics(); ++k) {
    auto top = top_words(m, k, n);
    for (std::size_t i = 0; i < top.size(); ++i)
      out += csv_line({std::to_string(k), std::to_string(i + 1), m.vocab->term(top[i].term), format_sig(top[i].weight)});
  }
  return out;
}

inline std::string labeling_csv(const TopicLabeling& lab) {
  CsvRow header{"topic", "class"};
  header.insert(header.end(), lab.class_names.begin(), lab.class_names.end());
  std::string out = csv_line(header);
  for (std::size_t k = 0; k < lab.topic_class.size(); ++k) {
    CsvRow row{std::to_string(k), lab.class_of_topic(k)};
    for (auto v : lab.support[k]) row.push_back(std::to_string(v));
    out += csv_line(row);
  }
  CsvRow fallback{"fallback", lab.class_names.at(lab.fallback)};
  fallback.resize(header.size());
  out += csv_line(fallback);
  return out;
}

inline TopicLabeling parse_labeling(std::string_view text) {
  auto rows = parse_csv(text);
  if (rows.empty() || rows[0].size() < 2 || rows[0][0] != "topic")
    throw Error(Errc::parse_error, "labeling: bad header");
  TopicLabeling lab;
  lab.class_names.assign(rows[0].begin() + 2, rows[0].end());
  auto class_id = [&](const std::string& name) {
    auto it = std::find(lab.class_names.begin(), lab.class_names.end(), name);
    if (it == lab.class_names.end()) throw Error(Errc::parse_error, "labeling: unknown class '" + name + "'");
    return static_cast<ClassId>(it - lab.class_names.begin());
  };
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() < 2) throw Error(Errc::parse_error, "labeling: short row");
    if (r[0] == "fallback") {
      lab.fallback = class_id(r[1]);
      continue;
    }
    lab.topic_class.push_back(class_id(r[1]));
    std::vector<std::size_t> votes;
    for (std::size_t j = 2; j < r.size(); ++j) votes.push_back(std::stoul(r[j]));
    lab.support.push_back(std::move(votes));
  }
  return lab;
}

/// Confusion block (rows true, columns predicted), then a metrics block.
inline std::string eval_csv(const EvalReport& r) {
  CsvRow header{"true\\predicted"};
  header.insert(header.end(), r.class_names.begin(), r.class_names.end());
  std::string out = csv_line(header);
  for (std::size_t t = 0; t < r.class_names.size(); ++t) {
    CsvRow row{r.class_names[t]};
    for (std::size_t p = 0; p < r.class_names.size(); ++p) row.push_back(std::to_string(r.confusion.at(t, p)));
    out += csv_line(row);
  }
  out += "\nclass,precision,recall,f1\n";
  for (std::size_t c = 0; c < r.class_names.size(); ++c)
    out += csv_line({r.class_names[c], format_sig(r.per_class[c].precision), format_sig(r.per_class[c].recall),
                     format_sig(r.per_class[c].f1)});
  out += "\nmetric,value\n";
  out += "accuracy," + format_sig(r.accuracy) + "\n";
  out += "macro_f1," + format_sig(r.macro_f1) + "\n";
  out += "abstain_count," + std::to_string(r.abstain_count) + "\n";
  out += "evaluated," + std::to_string(r.confusion.total()) + "\n";
  return out;
}

inline std::string predictions_csv(const Corpus& test, const EvalReport& r) {
  std::string out = "doc_id,true,predicted\n";
  for (std::size_t d = 0; d < test.size(); ++d)
    out += csv_line({std::to_string(test.doc_ids[d]), test.class_names[test.labels[d]], r.class_names[r.predictions[d]]});
  return out;
}

/// Per-fold rows followed by summary rows (fold column = mean_accuracy,
/// pooled_accuracy, macro_f1).
inline std::string cv_csv(std::span<const CvReport> reports) {
  std::string out = "classifier,fold,accuracy\n";
  for (const auto& r : reports)
    for (std::size_t f = 0; f < r.fold_accuracy.size(); ++f)
      out += r.classifier + "," + std::to_string(f) + "," + format_sig(r.fold_accuracy[f]) + "\n";
  for (const auto& r : reports) {
    out += r.classifier + ",mean_accuracy," + format_sig(r.mean_accuracy) + "\n";
    out += r.classifier + ",pooled_accuracy," + format_sig(r.pooled_accuracy) + "\n";
    out += r.classifier + ",macro_f1," + format_sig(r.macro_f1) + "\n";
  }
  return out;
}

}  // namespace emotopic
