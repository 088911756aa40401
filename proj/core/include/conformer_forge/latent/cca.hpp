// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

namespace conformer_forge::latent {

struct CCAResult {
  Eigen::MatrixXd A;             // m1 x m1; columns are canonical directions of X
  Eigen::MatrixXd B;             // m2 x m2
  Eigen::VectorXd correlations;  // min(m1, m2) values in [0, 1], descending

  double leading() const { return correlations.size() ? correlations[0] : 0.0; }
};

/// Canonical correlation analysis of two row-aligned embeddings. Columns are
/// centered, `ridge` * I is added to both covariances, and the whitened
/// cross-covariance is decomposed by SVD. Throws std::invalid_argument for
/// fewer than max(m1, m2) + 1 rows, non-finite input, or a covariance that is
/// still singular after the ridge.
CCAResult run_cca(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, double ridge = 1e-8);

}  // namespace conformer_forge::latent
