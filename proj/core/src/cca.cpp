// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "conformer_forge/latent/cca.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace conformer_forge::latent {

namespace {

Eigen::MatrixXd centered(const Eigen::MatrixXd& M) {
  return M.rowwise() - M.colwise().mean();
}

// C^{-1/2} of a symmetric positive definite matrix.
Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd& C, const char* which) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C);
  if (eig.info() != Eigen::Success) {
    throw std::invalid_argument(std::string("cca: eigendecomposition failed for ") + which);
  }
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  if (!(lambda.minCoeff() > 0.0)) {
    throw std::invalid_argument(std::string("cca: covariance of ") + which +
                                " is rank-deficient even after the ridge");
  }
  return eig.eigenvectors() * lambda.cwiseSqrt().cwiseInverse().asDiagonal() *
         eig.eigenvectors().transpose();
}

}  // namespace

CCAResult run_cca(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, double ridge) {
  const Eigen::Index n = X.rows();
  if (Y.rows() != n) throw std::invalid_argument("cca: X and Y need the same row count");
  if (X.cols() == 0 || Y.cols() == 0) throw std::invalid_argument("cca: empty embedding");
  if (n < std::max(X.cols(), Y.cols()) + 1) {
    throw std::invalid_argument("cca: need at least " +
                                std::to_string(std::max(X.cols(), Y.cols()) + 1) + " rows, got " +
                                std::to_string(n));
  }
  if (!X.allFinite() || !Y.allFinite()) throw std::invalid_argument("cca: non-finite input");

  const Eigen::MatrixXd Xc = centered(X);
  const Eigen::MatrixXd Yc = centered(Y);
  const double inv = 1.0 / static_cast<double>(n - 1);
  Eigen::MatrixXd Cxx = inv * Xc.transpose() * Xc;
  Eigen::MatrixXd Cyy = inv * Yc.transpose() * Yc;
  const Eigen::MatrixXd Cxy = inv * Xc.transpose() * Yc;
  Cxx.diagonal().array() += ridge;
  Cyy.diagonal().array() += ridge;

  const Eigen::MatrixXd Wx = inverse_sqrt(Cxx, "X");
  const Eigen::MatrixXd Wy = inverse_sqrt(Cyy, "Y");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Wx * Cxy * Wy, Eigen::ComputeFullU | Eigen::ComputeFullV);

  CCAResult r;
  r.A = Wx * svd.matrixU();
  r.B = Wy * svd.matrixV();
  r.correlations = svd.singularValues().cwiseMax(0.0).cwiseMin(1.0);
  return r;
}

}  // namespace conformer_forge::latent
