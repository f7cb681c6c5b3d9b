#pragma once

// Non-negative matrix factorization A ~ W H (A: docs x terms) with the
// multiplicative updates for the squared Frobenius objective.

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "emotopic/corpus.hpp"
#include "emotopic/random.hpp"
#include "emotopic/topic_model.hpp"

namespace emotopic {

inline constexpr double kNmfEpsilon = 1e-12;

struct NmfModel {
  Eigen::MatrixXd W;  // D x r
  Eigen::MatrixXd H;  // r x V
  double initial_objective = 0.0;
  std::vector<double> objective_trace;  // after each iteration
  NmfParams params;
};

inline double frobenius_objective(const Eigen::MatrixXd& A, const Eigen::MatrixXd& W,
                                  const Eigen::MatrixXd& H) {
  return (A - W * H).squaredNorm();
}

inline NmfModel fit_nmf(const Eigen::MatrixXd& A, const NmfParams& params) {
  params.validate();
  if ((A.array() < 0.0).any()) throw Error(Errc::negative_input, "NMF input has a negative entry");
  const Eigen::Index D = A.rows();
  const Eigen::Index V = A.cols();
  const auto r = static_cast<Eigen::Index>(params.rank);
  if (r > std::min(D, V))
    throw Error(Errc::rank_too_large, "NMF rank " + std::to_string(r) + " exceeds min(D, V)");

  NmfModel m;
  m.params = params;
  m.W.resize(D, r);
  m.H.resize(r, V);
  // Entries drawn in (0, init_scale], W then H, each row by row.
  Xorshift64Star rng(params.seed);
  for (Eigen::Index i = 0; i < D; ++i)
    for (Eigen::Index j = 0; j < r; ++j) m.W(i, j) = (1.0 - rng.uniform()) * params.init_scale;
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < V; ++j) m.H(i, j) = (1.0 - rng.uniform()) * params.init_scale;

  m.initial_objective = frobenius_objective(A, m.W, m.H);
  double previous = m.initial_objective;
  for (std::size_t it = 0; it < params.iterations; ++it) {
    Eigen::MatrixXd numer_h = m.W.transpose() * A;
    Eigen::MatrixXd denom_h = (m.W.transpose() * m.W) * m.H;
    m.H = m.H.cwiseProduct(numer_h.cwiseQuotient((denom_h.array() + kNmfEpsilon).matrix()));

    Eigen::MatrixXd numer_w = A * m.H.transpose();
    Eigen::MatrixXd denom_w = m.W * (m.H * m.H.transpose());
    m.W = m.W.cwiseProduct(numer_w.cwiseQuotient((denom_w.array() + kNmfEpsilon).matrix()));

    const double objective = frobenius_objective(A, m.W, m.H);
    m.objective_trace.push_back(objective);
    const double change = previous > 0.0 ? std::abs(previous - objective) / previous : 0.0;
    previous = objective;
    if (change < params.tol) break;
  }
  return m;
}

inline NmfModel fit_nmf(const TermMatrix& matrix, const NmfParams& params) {
  return fit_nmf(Eigen::MatrixXd(matrix.values), params);
}

/// Row-normalizes H into phi and W into theta. Zero rows become uniform and
/// are listed in degenerate_topics / degenerate_docs.
inline TopicModel as_topic_model(const NmfModel& model, VocabularyPtr vocab) {
  TopicModel t;
  t.phi = model.H;
  t.theta = model.W;
  for (Eigen::Index k = 0; k < t.phi.rows(); ++k) {
    const double s = t.phi.row(k).sum();
    if (s > 0.0) {
      t.phi.row(k) /= s;
    } else {
      t.phi.row(k).setConstant(1.0 / static_cast<double>(t.phi.cols()));
      t.degenerate_topics.push_back(static_cast<std::size_t>(k));
    }
  }
  for (Eigen::Index d = 0; d < t.theta.rows(); ++d) {
    const double s = t.theta.row(d).sum();
    if (s > 0.0) {
      t.theta.row(d) /= s;
    } else {
      t.theta.row(d).setConstant(1.0 / static_cast<double>(t.theta.cols()));
      t.degenerate_docs.push_back(static_cast<std::size_t>(d));
    }
  }
  t.method_tag = "nmf";
  t.vocab = std::move(vocab);
  t.params = model.params;
  return t;
}

}  // namespace emotopic
