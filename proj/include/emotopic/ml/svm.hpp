#pragma once

// One-vs-rest linear SVM trained with Pegasos-style subgradient steps on the
// L2-regularized hinge loss. A constant 1 is appended to every standardized
// row so the bias is learned (and regularized) like any other weight.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "emotopic/ml/features.hpp"
#include "emotopic/random.hpp"

namespace emotopic {

inline constexpr double kSvmStdFloor = 1e-9;

struct SvmParams {
  double lambda = 1e-4;
  std::size_t epochs = 200;
  std::uint64_t seed = 1;

  void validate() const {
    if (!(lambda > 0.0)) throw Error(Errc::invalid_params, "SVM lambda must be > 0");
    if (epochs < 1) throw Error(Errc::invalid_params, "SVM needs at least one epoch");
  }
};

struct LinearSvm {
  std::vector<double> mean;                  // per feature
  std::vector<double> scale;                 // per feature, floored std
  std::vector<std::vector<double>> weights;  // class x (features + 1)

  std::vector<double> standardize(std::span<const double> x) const {
    std::vector<double> z(x.size() + 1);
    for (std::size_t f = 0; f < x.size(); ++f) z[f] = (x[f] - mean[f]) / scale[f];
    z.back() = 1.0;
    return z;
  }

  std::vector<double> margins(std::span<const double> x) const {
    auto z = standardize(x);
    std::vector<double> out;
    for (const auto& w : weights) out.push_back(std::inner_product(w.begin(), w.end(), z.begin(), 0.0));
    return out;
  }

  ClassId predict(std::span<const double> x) const {
    auto m = margins(x);
    std::size_t best = 0;
    for (std::size_t c = 1; c < m.size(); ++c)
      if (m[c] > m[best]) best = c;
    return static_cast<ClassId>(best);
  }
};

/// Each class's weights are the average of the iterates visited during the
/// final epoch. Every class sees the same shuffled order per epoch.
inline LinearSvm train_svm(const FeatureTable& t, const SvmParams& params) {
  params.validate();
  std::vector<std::size_t> present(t.class_names.size(), 0);
  for (auto l : t.labels) ++present[l];
  if (std::count_if(present.begin(), present.end(), [](auto n) { return n > 0; }) < 2)
    throw Error(Errc::single_class, "SVM needs rows from at least two classes");

  const std::size_t N = t.size();
  const std::size_t F = t.features();
  LinearSvm m;
  m.mean.assign(F, 0.0);
  m.scale.assign(F, 0.0);
  for (const auto& r : t.rows)
    for (std::size_t f = 0; f < F; ++f) m.mean[f] += r[f];
  for (auto& v : m.mean) v /= static_cast<double>(N);
  for (const auto& r : t.rows)
    for (std::size_t f = 0; f < F; ++f) m.scale[f] += (r[f] - m.mean[f]) * (r[f] - m.mean[f]);
  for (auto& v : m.scale) v = std::max(std::sqrt(v / static_cast<double>(N)), kSvmStdFloor);

  std::vector<std::vector<double>> z;
  z.reserve(N);
  for (const auto& r : t.rows) z.push_back(m.standardize(r));

  for (std::size_t c = 0; c < t.class_names.size(); ++c) {
    Xorshift64Star rng(derive_seed(params.seed, "svm"));
    std::vector<double> w(F + 1, 0.0), avg(F + 1, 0.0);
    std::vector<std::size_t> order(N);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::size_t step = 0;
    for (std::size_t e = 0; e < params.epochs; ++e) {
      rng.shuffle(std::span(order));
      const bool last = e + 1 == params.epochs;
      for (auto i : order) {
        ++step;
        const double eta = 1.0 / (params.lambda * static_cast<double>(step));
        const double y = t.labels[i] == c ? 1.0 : -1.0;
        const double margin = y * std::inner_product(w.begin(), w.end(), z[i].begin(), 0.0);
        const double shrink = 1.0 - eta * params.lambda;
        for (auto& v : w) v *= shrink;
        if (margin < 1.0)
          for (std::size_t f = 0; f <= F; ++f) w[f] += eta * y * z[i][f];
        if (last)
          for (std::size_t f = 0; f <= F; ++f) avg[f] += w[f];
      }
    }
    for (auto& v : avg) v /= static_cast<double>(N);
    m.weights.push_back(std::move(avg));
  }
  return m;
}

}  // namespace emotopic
