#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "emotopic/ml/features.hpp"

namespace emotopic {

inline constexpr double kNbVarianceFloor = 1e-9;

/// Gaussian naive Bayes over continuous features.
struct GaussianNb {
  std::vector<double> log_prior;          // per class
  std::vector<std::vector<double>> mean;  // class x feature
  std::vector<std::vector<double>> var;   // class x feature, floored

  std::size_t classes() const noexcept { return log_prior.size(); }

  /// log prior + sum of log Gaussian densities, per class.
  std::vector<double> log_joint(std::span<const double> x) const {
    std::vector<double> out(classes());
    for (std::size_t c = 0; c < classes(); ++c) {
      double s = log_prior[c];
      for (std::size_t f = 0; f < x.size(); ++f) {
        const double d = x[f] - mean[c][f];
        s += -0.5 * std::log(2.0 * std::numbers::pi * var[c][f]) - d * d / (2.0 * var[c][f]);
      }
      out[c] = s;
    }
    return out;
  }

  std::vector<double> posterior(std::span<const double> x) const {
    auto lj = log_joint(x);
    double top = lj[0];
    for (double v : lj) top = std::max(top, v);
    double z = 0.0;
    for (double& v : lj) {
      v = std::exp(v - top);
      z += v;
    }
    for (double& v : lj) v /= z;
    return lj;
  }

  /// Ties go to the earlier class.
  ClassId predict(std::span<const double> x) const {
    auto lj = log_joint(x);
    std::size_t best = 0;
    for (std::size_t c = 1; c < lj.size(); ++c)
      if (lj[c] > lj[best]) best = c;
    return static_cast<ClassId>(best);
  }
};

inline GaussianNb train_nb(const FeatureTable& t) {
  const std::size_t C = t.class_names.size();
  const std::size_t F = t.features();
  std::vector<std::size_t> n(C, 0);
  for (auto l : t.labels) ++n[l];
  for (std::size_t c = 0; c < C; ++c)
    if (n[c] == 0) throw Error(Errc::missing_class, "class '" + t.class_names[c] + "' has no training rows");

  GaussianNb m;
  m.mean.assign(C, std::vector<double>(F, 0.0));
  m.var.assign(C, std::vector<double>(F, 0.0));
  for (std::size_t r = 0; r < t.size(); ++r)
    for (std::size_t f = 0; f < F; ++f) m.mean[t.labels[r]][f] += t.rows[r][f];
  for (std::size_t c = 0; c < C; ++c)
    for (auto& v : m.mean[c]) v /= static_cast<double>(n[c]);
  for (std::size_t r = 0; r < t.size(); ++r)
    for (std::size_t f = 0; f < F; ++f) {
      const double d = t.rows[r][f] - m.mean[t.labels[r]][f];
      m.var[t.labels[r]][f] += d * d;
    }
  for (std::size_t c = 0; c < C; ++c) {
    for (auto& v : m.var[c]) v = std::max(v / static_cast<double>(n[c]), kNbVarianceFloor);
    m.log_prior.push_back(std::log(static_cast<double>(n[c]) / static_cast<double>(t.size())));
  }
  return m;
}

}  // namespace emotopic
