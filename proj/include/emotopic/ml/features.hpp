#pragma once

// Per-document topic-score features with class labels, and their CSV and
// ARFF (Weka) serializations.

#include <algorithm>
#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "emotopic/corpus.hpp"
#include "emotopic/csv.hpp"
#include "emotopic/pipeline.hpp"

namespace emotopic {

struct FeatureTable {
  std::vector<std::string> feature_names;  // topic0 .. topicK-1
  std::vector<std::vector<double>> rows;
  std::vector<ClassId> labels;
  std::vector<std::string> class_names;

  std::size_t size() const noexcept { return rows.size(); }
  std::size_t features() const noexcept { return feature_names.size(); }

  /// Rows at `positions`, in that order.
  FeatureTable select(std::span<const std::size_t> positions) const {
    FeatureTable t{feature_names, {}, {}, class_names};
    t.rows.reserve(positions.size());
    for (auto p : positions) {
      t.rows.push_back(rows.at(p));
      t.labels.push_back(labels.at(p));
    }
    return t;
  }

  friend bool operator==(const FeatureTable&, const FeatureTable&) = default;
};

inline std::vector<std::string> topic_feature_names(std::size_t k) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < k; ++i) names.push_back("topic" + std::to_string(i));
  return names;
}

/// Row d is score_document of document d (empty documents give zero rows).
inline FeatureTable export_features(const Corpus& corpus, const TopicModel& model) {
  if (corpus.docs.empty()) throw Error(Errc::empty_corpus, "cannot export features of an empty corpus");
  if (!corpus.labeled()) throw Error(Errc::unlabeled_corpus, "feature export needs labels");
  const Corpus projected = project_onto(corpus, model.vocab);
  FeatureTable t;
  t.feature_names = topic_feature_names(model.topics());
  t.class_names = corpus.class_names;
  for (std::size_t d = 0; d < projected.docs.size(); ++d) {
    t.rows.push_back(score_document(projected.docs[d], model));
    t.labels.push_back(corpus.labels[d]);
  }
  return t;
}

inline std::string feature_csv(const FeatureTable& t) {
  CsvRow header = t.feature_names;
  header.push_back("class");
  std::string out = csv_line(header);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    CsvRow line;
    for (double v : t.rows[r]) line.push_back(format_shortest(v));
    line.push_back(t.class_names.at(t.labels[r]));
    out += csv_line(line);
  }
  return out;
}

/// Class names are taken from the rows and sorted.
inline FeatureTable parse_feature_csv(std::string_view text) {
  auto rows = parse_csv(text);
  if (rows.empty() || rows[0].empty() || rows[0].back() != "class")
    throw Error(Errc::parse_error, "feature csv: header must end with 'class'");
  FeatureTable t;
  t.feature_names.assign(rows[0].begin(), rows[0].end() - 1);
  std::vector<std::string> names;
  for (std::size_t i = 1; i < rows.size(); ++i) names.push_back(rows[i].back());
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  t.class_names = names;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != t.feature_names.size() + 1)
      throw Error(Errc::parse_error, "feature csv: row " + std::to_string(i) + " has the wrong arity");
    std::vector<double> v;
    for (std::size_t j = 0; j + 1 < r.size(); ++j) v.push_back(parse_double(r[j]));
    t.rows.push_back(std::move(v));
    t.labels.push_back(static_cast<ClassId>(std::lower_bound(names.begin(), names.end(), r.back()) - names.begin()));
  }
  return t;
}

namespace detail {

inline std::string arff_quote(std::string_view s) {
  bool plain = !s.empty() && s.find_first_of(" \t,{}'\"%") == std::string_view::npos;
  if (plain) return std::string(s);
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  return out + "'";
}

// Splits on commas outside single quotes and strips quoting.
inline std::vector<std::string> arff_split(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (quoted) {
      if (c == '\\' && i + 1 < s.size()) cur += s[++i];
      else if (c == '\'') quoted = false;
      else cur += c;
    } else if (c == '\'') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ' && c != '\t') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline bool starts_with_nocase(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (std::toupper(static_cast<unsigned char>(s[i])) != std::toupper(static_cast<unsigned char>(prefix[i])))
      return false;
  return true;
}

}  // namespace detail

/// @RELATION, one NUMERIC attribute per feature, a nominal class attribute
/// listing class_names in order, then @DATA rows. Numbers use the shortest
/// round-trip decimal form.
inline std::string write_arff(const FeatureTable& t, std::string_view relation) {
  if (t.rows.empty()) throw Error(Errc::empty_table, "cannot write an empty feature table");
  std::string out = "@RELATION " + detail::arff_quote(relation) + "\n\n";
  for (const auto& name : t.feature_names) out += "@ATTRIBUTE " + detail::arff_quote(name) + " NUMERIC\n";
  out += "@ATTRIBUTE class {";
  for (std::size_t c = 0; c < t.class_names.size(); ++c) {
    if (c) out += ',';
    out += detail::arff_quote(t.class_names[c]);
  }
  out += "}\n\n@DATA\n";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (double v : t.rows[r]) out += format_shortest(v) + ",";
    out += detail::arff_quote(t.class_names.at(t.labels[r])) + "\n";
  }
  return out;
}

struct ArffDocument {
  std::string relation;
  FeatureTable table;
};

/// Reads the dialect produced by write_arff: numeric attributes followed by
/// one nominal class attribute, dense rows.
inline ArffDocument read_arff(std::string_view text) {
  ArffDocument doc;
  std::istringstream in{std::string(text)};
  std::string line;
  bool in_data = false;
  bool have_class = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view l = line;
    while (!l.empty() && (l.front() == ' ' || l.front() == '\t')) l.remove_prefix(1);
    if (l.empty() || l.front() == '%') continue;
    if (in_data) {
      auto fields = detail::arff_split(l);
      if (fields.size() != doc.table.feature_names.size() + 1)
        throw Error(Errc::parse_error, "arff: data row has the wrong arity");
      std::vector<double> v;
      for (std::size_t i = 0; i + 1 < fields.size(); ++i) v.push_back(parse_double(fields[i]));
      auto it = std::find(doc.table.class_names.begin(), doc.table.class_names.end(), fields.back());
      if (it == doc.table.class_names.end()) throw Error(Errc::parse_error, "arff: unknown class '" + fields.back() + "'");
      doc.table.rows.push_back(std::move(v));
      doc.table.labels.push_back(static_cast<ClassId>(it - doc.table.class_names.begin()));
    } else if (detail::starts_with_nocase(l, "@RELATION")) {
      auto parts = detail::arff_split(l.substr(9));
      doc.relation = parts.empty() ? "" : parts[0];
    } else if (detail::starts_with_nocase(l, "@ATTRIBUTE")) {
      std::string_view rest = l.substr(10);
      auto brace = rest.find('{');
      if (brace != std::string_view::npos) {
        auto close = rest.rfind('}');
        if (close == std::string_view::npos || close < brace) throw Error(Errc::parse_error, "arff: bad nominal attribute");
        doc.table.class_names = detail::arff_split(rest.substr(brace + 1, close - brace - 1));
        have_class = true;
      } else {
        if (have_class) throw Error(Errc::parse_error, "arff: numeric attribute after the class attribute");
        // name [quoted or plain] followed by a type keyword
        while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) rest.remove_prefix(1);
        std::string name;
        if (!rest.empty() && rest.front() == '\'') {
          auto parts = detail::arff_split(rest.substr(0, rest.find('\'', 1) + 1));
          name = parts[0];
        } else {
          name = std::string(rest.substr(0, rest.find_first_of(" \t")));
        }
        doc.table.feature_names.push_back(name);
      }
    } else if (detail::starts_with_nocase(l, "@DATA")) {
      if (!have_class) throw Error(Errc::parse_error, "arff: missing class attribute");
      in_data = true;
    }
  }
  return doc;
}

}  // namespace emotopic
