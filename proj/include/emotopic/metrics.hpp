#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "emotopic/error.hpp"

namespace emotopic {

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Rows are true classes, columns predicted classes.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::size_t classes) : classes_(classes), counts_(classes * classes, 0) {}

  void add(std::size_t truth, std::size_t predicted) {
    if (truth >= classes_ || predicted >= classes_)
      throw Error(Errc::index_out_of_range, "confusion matrix class index out of range");
    ++counts_[truth * classes_ + predicted];
  }

  void merge(const ConfusionMatrix& other) {
    if (other.classes_ != classes_) throw Error(Errc::invalid_params, "confusion matrices differ in size");
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  }

  std::size_t classes() const noexcept { return classes_; }
  std::size_t at(std::size_t truth, std::size_t predicted) const { return counts_.at(truth * classes_ + predicted); }

  std::size_t total() const noexcept {
    std::size_t n = 0;
    for (auto c : counts_) n += c;
    return n;
  }

  std::size_t correct() const noexcept {
    std::size_t n = 0;
    for (std::size_t c = 0; c < classes_; ++c) n += counts_[c * classes_ + c];
    return n;
  }

  std::size_t row_total(std::size_t truth) const {
    std::size_t n = 0;
    for (std::size_t p = 0; p < classes_; ++p) n += at(truth, p);
    return n;
  }

  std::size_t column_total(std::size_t predicted) const {
    std::size_t n = 0;
    for (std::size_t t = 0; t < classes_; ++t) n += at(t, predicted);
    return n;
  }

  double accuracy() const noexcept {
    auto n = total();
    return n == 0 ? 0.0 : static_cast<double>(correct()) / static_cast<double>(n);
  }

  /// Empty denominators yield 0 for precision, recall and F1.
  std::vector<ClassScores> class_scores() const {
    std::vector<ClassScores> out(classes_);
    for (std::size_t c = 0; c < classes_; ++c) {
      const double tp = static_cast<double>(at(c, c));
      const auto predicted = column_total(c);
      const auto actual = row_total(c);
      auto& s = out[c];
      s.precision = predicted == 0 ? 0.0 : tp / static_cast<double>(predicted);
      s.recall = actual == 0 ? 0.0 : tp / static_cast<double>(actual);
      s.f1 = (s.precision + s.recall) == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / (s.precision + s.recall);
    }
    return out;
  }

  double macro_f1() const {
    if (classes_ == 0) return 0.0;
    double sum = 0.0;
    for (const auto& s : class_scores()) sum += s.f1;
    return sum / static_cast<double>(classes_);
  }

 private:
  std::size_t classes_ = 0;
  std::vector<std::size_t> counts_;
};

}  // namespace emotopic
