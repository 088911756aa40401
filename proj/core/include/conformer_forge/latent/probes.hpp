// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace conformer_forge::latent {

struct ProbeResult {
  std::string task;
  double value = 0.0;     // accuracy in [0, 1] or normalized error in sigma units
  double baseline = 0.0;  // same metric for the comparison representation
};

/// Nearest-exemplar labels: each test row takes the label of the closest
/// exemplar row (Euclidean), ties to the lowest label. Throws
/// std::invalid_argument for fewer than two classes or a repeated label.
std::vector<int> one_shot_predict(const Eigen::MatrixXd& exemplars, const std::vector<int>& labels,
                                  const Eigen::MatrixXd& test);

/// Fraction of test rows whose predicted label matches. Throws if a test
/// label has no exemplar.
double one_shot_accuracy(const Eigen::MatrixXd& exemplars, const std::vector<int>& labels,
                         const Eigen::MatrixXd& test, const std::vector<int>& test_labels);

struct LinearFit {
  Eigen::VectorXd coef;
  double intercept = 0.0;

  Eigen::VectorXd predict(const Eigen::MatrixXd& X) const;
};

/// Least squares with intercept; `ridge` is added to the normal equations
/// for every coefficient except the intercept.
LinearFit fit_linear(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double ridge = 1e-8);

/// Held-out linear regression: rows are shuffled by `seed`, the last
/// floor(holdout * n) rows are scored, and the RMSE is divided by the
/// population standard deviation of `y` over all rows. Throws
/// std::invalid_argument for a constant property or too few training rows.
double regression_probe(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::uint64_t seed = 0,
                        double holdout = 0.2, double ridge = 1e-8);

struct PCAResult {
  Eigen::VectorXd mean;
  Eigen::MatrixXd components;          // features x k, unit columns
  Eigen::VectorXd explained_variance;  // k eigenvalues, descending
  Eigen::MatrixXd scores;              // rows x k
};

/// Principal component scores on the top k covariance eigenvectors. Each
/// component's largest-magnitude entry is made positive. Throws
/// std::invalid_argument when k exceeds the feature or row count.
PCAResult pca(const Eigen::MatrixXd& X, std::size_t k);

}  // namespace conformer_forge::latent
