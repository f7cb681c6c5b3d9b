#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace emotopic {

/// Failure classes surfaced by the CLI as process exit codes.
enum class ErrorKind { config = 1, io = 2, model = 3, data = 4 };

enum class Errc {
  empty_corpus,
  unlabeled_corpus,
  mixed_labels,
  invalid_params,
  index_out_of_range,
  degenerate_topic,
  empty_topic,
  empty_prune,
  vocabulary_collapse,
  negative_input,
  rank_too_large,
  empty_table,
  missing_class,
  single_class,
  too_few_rows,
  parse_error,
  io_error,
  config_error,
};

constexpr std::string_view errc_name(Errc c) noexcept {
  switch (c) {
    case Errc::empty_corpus: return "EmptyCorpus";
    case Errc::unlabeled_corpus: return "UnlabeledCorpus";
    case Errc::mixed_labels: return "MixedLabels";
    case Errc::invalid_params: return "InvalidParams";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::degenerate_topic: return "DegenerateTopic";
    case Errc::empty_topic: return "EmptyTopic";
    case Errc::empty_prune: return "EmptyPrune";
    case Errc::vocabulary_collapse: return "VocabularyCollapse";
    case Errc::negative_input: return "NegativeInput";
    case Errc::rank_too_large: return "RankTooLarge";
    case Errc::empty_table: return "EmptyTable";
    case Errc::missing_class: return "MissingClass";
    case Errc::single_class: return "SingleClass";
    case Errc::too_few_rows: return "TooFewRows";
    case Errc::parse_error: return "ParseError";
    case Errc::io_error: return "IoError";
    case Errc::config_error: return "ConfigError";
  }
  return "Unknown";
}

constexpr ErrorKind errc_kind(Errc c) noexcept {
  switch (c) {
    case Errc::config_error: return ErrorKind::config;
    case Errc::io_error:
    case Errc::parse_error: return ErrorKind::io;
    case Errc::invalid_params:
    case Errc::index_out_of_range:
    case Errc::rank_too_large: return ErrorKind::model;
    default: return ErrorKind::data;
  }
}

constexpr std::string_view kind_name(ErrorKind k) noexcept {
  switch (k) {
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
    case ErrorKind::model: return "model";
    case ErrorKind::data: return "degenerate-data";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }
  ErrorKind kind() const noexcept { return errc_kind(code_); }

 private:
  Errc code_;
};

}  // namespace emotopic
