// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "conformer_forge/latent/probes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "conformer_forge/trajdata.hpp"

namespace conformer_forge::latent {

std::vector<int> one_shot_predict(const Eigen::MatrixXd& exemplars, const std::vector<int>& labels,
                                  const Eigen::MatrixXd& test) {
  if (static_cast<std::size_t>(exemplars.rows()) != labels.size()) {
    throw std::invalid_argument("one_shot: need one label per exemplar");
  }
  if (labels.size() < 2) throw std::invalid_argument("one_shot: need at least two classes");
  if (exemplars.cols() != test.cols()) {
    throw std::invalid_argument("one_shot: exemplar and test widths differ");
  }
  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return labels[a] < labels[b]; });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (labels[order[k]] == labels[order[k - 1]]) {
      throw std::invalid_argument("one_shot: class " + std::to_string(labels[order[k]]) +
                                  " has more than one exemplar");
    }
  }
  std::vector<int> out(static_cast<std::size_t>(test.rows()));
  for (Eigen::Index r = 0; r < test.rows(); ++r) {
    double best = std::numeric_limits<double>::infinity();
    int label = labels[order.front()];
    for (std::size_t k : order) {  // ascending label, strict compare keeps the lowest on ties
      const double d = (test.row(r) - exemplars.row(static_cast<Eigen::Index>(k))).squaredNorm();
      if (d < best) {
        best = d;
        label = labels[k];
      }
    }
    out[static_cast<std::size_t>(r)] = label;
  }
  return out;
}

double one_shot_accuracy(const Eigen::MatrixXd& exemplars, const std::vector<int>& labels,
                         const Eigen::MatrixXd& test, const std::vector<int>& test_labels) {
  if (static_cast<std::size_t>(test.rows()) != test_labels.size()) {
    throw std::invalid_argument("one_shot: need one label per test row");
  }
  if (test_labels.empty()) throw std::invalid_argument("one_shot: empty test set");
  for (int t : test_labels) {
    if (std::find(labels.begin(), labels.end(), t) == labels.end()) {
      throw std::invalid_argument("one_shot: class " + std::to_string(t) + " has no exemplar");
    }
  }
  const std::vector<int> pred = one_shot_predict(exemplars, labels, test);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == test_labels[i];
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

Eigen::VectorXd LinearFit::predict(const Eigen::MatrixXd& X) const {
  return (X * coef).array() + intercept;
}

LinearFit fit_linear(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double ridge) {
  if (X.rows() != y.size()) throw std::invalid_argument("regression: X and y row counts differ");
  if (X.rows() < X.cols() + 1) {
    throw std::invalid_argument("regression: need at least " + std::to_string(X.cols() + 1) +
                                " rows, got " + std::to_string(X.rows()));
  }
  // Centering separates the intercept, so the ridge never shrinks it.
  const Eigen::RowVectorXd mx = X.colwise().mean();
  const double my = y.mean();
  const Eigen::MatrixXd Xc = X.rowwise() - mx;
  Eigen::MatrixXd G = Xc.transpose() * Xc;
  G.diagonal().array() += ridge;
  LinearFit fit;
  fit.coef = G.ldlt().solve(Xc.transpose() * (y.array() - my).matrix());
  fit.intercept = my - mx.dot(fit.coef);
  return fit;
}

double regression_probe(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::uint64_t seed,
                        double holdout, double ridge) {
  const auto n = static_cast<std::size_t>(X.rows());
  if (static_cast<std::size_t>(y.size()) != n) {
    throw std::invalid_argument("regression: X and y row counts differ");
  }
  if (!(holdout > 0.0 && holdout < 1.0)) {
    throw std::invalid_argument("regression: holdout fraction must be in (0, 1)");
  }
  const double mean = y.mean();
  const double sigma = std::sqrt((y.array() - mean).square().mean());
  if (!(sigma > 0.0)) throw std::invalid_argument("regression: property has zero variance");

  const auto test_n = static_cast<std::size_t>(std::floor(holdout * static_cast<double>(n) + 1e-9));
  if (test_n == 0) throw std::invalid_argument("regression: no held-out rows");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  trajdata::deterministic_shuffle(order, rng);
  const std::size_t train_n = n - test_n;

  Eigen::MatrixXd Xtr(train_n, X.cols());
  Eigen::VectorXd ytr(train_n);
  Eigen::MatrixXd Xte(test_n, X.cols());
  Eigen::VectorXd yte(test_n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto src = static_cast<Eigen::Index>(order[k]);
    if (k < train_n) {
      Xtr.row(static_cast<Eigen::Index>(k)) = X.row(src);
      ytr[static_cast<Eigen::Index>(k)] = y[src];
    } else {
      Xte.row(static_cast<Eigen::Index>(k - train_n)) = X.row(src);
      yte[static_cast<Eigen::Index>(k - train_n)] = y[src];
    }
  }
  const LinearFit fit = fit_linear(Xtr, ytr, ridge);
  const double rmse = std::sqrt((fit.predict(Xte) - yte).array().square().mean());
  return rmse / sigma;
}

PCAResult pca(const Eigen::MatrixXd& X, std::size_t k) {
  const auto features = static_cast<std::size_t>(X.cols());
  const auto rows = static_cast<std::size_t>(X.rows());
  if (k == 0) throw std::invalid_argument("pca: need at least one component");
  if (k > features) {
    throw std::invalid_argument("pca: " + std::to_string(features) + " features but " +
                                std::to_string(k) + " components requested");
  }
  if (rows < k || rows < 2) {
    throw std::invalid_argument("pca: need at least " + std::to_string(std::max<std::size_t>(k, 2)) +
                                " rows");
  }
  PCAResult r;
  r.mean = X.colwise().mean().transpose();
  const Eigen::MatrixXd Xc = X.rowwise() - r.mean.transpose();
  const Eigen::MatrixXd C = (Xc.transpose() * Xc) / static_cast<double>(rows - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C);
  if (eig.info() != Eigen::Success) throw std::runtime_error("pca: eigendecomposition failed");

  const auto kk = static_cast<Eigen::Index>(k);
  r.components.resize(X.cols(), kk);
  r.explained_variance.resize(kk);
  for (Eigen::Index c = 0; c < kk; ++c) {
    const Eigen::Index src = X.cols() - 1 - c;  // eigenvalues come in ascending order
    Eigen::VectorXd v = eig.eigenvectors().col(src);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0.0) v = -v;
    r.components.col(c) = v;
    r.explained_variance[c] = std::max(0.0, eig.eigenvalues()[src]);
  }
  r.scores = Xc * r.components;
  return r;
}

}  // namespace conformer_forge::latent
