// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/QR>
#include <gtest/gtest.h>

#include "conformer_forge/latent/analysis.hpp"
#include "conformer_forge/latent/cca.hpp"
#include "conformer_forge/latent/embedding.hpp"
#include "conformer_forge/latent/interpolate.hpp"
#include "conformer_forge/latent/probes.hpp"
#include "conformer_forge/model/loss.hpp"
#include "conformer_forge/train/trainer.hpp"
#include "test_util.hpp"

namespace conformer_forge::latent {
namespace {

using conformer_forge::testing::small_dataset;

Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = g(rng);
  }
  return m;
}

double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::VectorXd ac = a.array() - a.mean();
  const Eigen::VectorXd bc = b.array() - b.mean();
  return ac.dot(bc) / (ac.norm() * bc.norm());
}

// Squared canonical correlations of two 2-column blocks are the eigenvalues of
// Sxx^-1 Sxy Syy^-1 Syx, found from its trace and determinant.
std::pair<double, double> cca_2d_closed_form(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
  const double n = static_cast<double>(X.rows());
  auto cov = [&](const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q) {
    double out[2][2];
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const double pm = P.col(i).mean();
        const double qm = Q.col(j).mean();
        double s = 0.0;
        for (Eigen::Index r = 0; r < P.rows(); ++r) s += (P(r, i) - pm) * (Q(r, j) - qm);
        out[i][j] = s / (n - 1.0);
      }
    }
    return Eigen::Matrix2d{{out[0][0], out[0][1]}, {out[1][0], out[1][1]}};
  };
  auto inv2 = [](const Eigen::Matrix2d& m) {
    const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    return Eigen::Matrix2d{{m(1, 1) / det, -m(0, 1) / det}, {-m(1, 0) / det, m(0, 0) / det}};
  };
  const Eigen::Matrix2d sxy = cov(X, Y);
  const Eigen::Matrix2d M = inv2(cov(X, X)) * sxy * inv2(cov(Y, Y)) * sxy.transpose();
  const double tr = M(0, 0) + M(1, 1);
  const double det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  return {std::sqrt(tr / 2.0 + disc), std::sqrt(std::max(0.0, tr / 2.0 - disc))};
}

// Cyclic Jacobi eigenvalues of a symmetric matrix, descending.
std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a) {
  const Eigen::Index n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (off < 1e-30) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(ev.rbegin(), ev.rend());
  return ev;
}

TEST(CCA, IdenticalEmbeddingsCorrelatePerfectly) {
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd X = gaussian(200, 4, rng);
  const CCAResult r = run_cca(X, X);
  ASSERT_EQ(r.correlations.size(), 4);
  for (Eigen::Index k = 0; k < 4; ++k) EXPECT_NEAR(r.correlations[k], 1.0, 1e-6);
}

TEST(CCA, IndependentNoiseIsWeaklyCorrelated) {
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd X = gaussian(1000, 4, rng);
  const Eigen::MatrixXd Y = gaussian(1000, 4, rng);
  const CCAResult r = run_cca(X, Y);
  EXPECT_LT(r.leading(), 0.2);
  for (Eigen::Index k = 1; k < 4; ++k) EXPECT_LE(r.correlations[k], r.correlations[k - 1]);
}

TEST(CCA, TwoDimensionalCaseMatchesClosedForm) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    std::mt19937_64 rng(seed);
    const Eigen::MatrixXd X = gaussian(300, 2, rng);
    Eigen::MatrixXd Y = gaussian(300, 2, rng);
    Y.col(0) += 0.8 * X.col(1);
    Y.col(1) += 0.3 * X.col(0) - 0.2 * X.col(1);
    const auto [r1, r2] = cca_2d_closed_form(X, Y);
    const CCAResult r = run_cca(X, Y, 0.0);
    EXPECT_NEAR(r.correlations[0], r1, 1e-6);
    EXPECT_NEAR(r.correlations[1], r2, 1e-6);
  }
}

TEST(CCA, OneDimensionalCaseIsPearson) {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd X = gaussian(100, 1, rng);
  Eigen::MatrixXd Y = gaussian(100, 1, rng);
  Y -= 0.7 * X;
  EXPECT_NEAR(run_cca(X, Y, 0.0).leading(), std::abs(pearson(X.col(0), Y.col(0))), 1e-10);
}

TEST(CCA, CanonicalVariatesCarryTheCorrelations) {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd X = gaussian(400, 3, rng);
  Eigen::MatrixXd Y = gaussian(400, 3, rng);
  Y.col(2) += X.col(0);
  const CCAResult r = run_cca(X, Y);
  const Eigen::MatrixXd U = X * r.A;
  const Eigen::MatrixXd V = Y * r.B;
  for (Eigen::Index k = 0; k < 3; ++k) {
    EXPECT_NEAR(std::abs(pearson(U.col(k), V.col(k))), r.correlations[k], 1e-8);
  }
}

TEST(CCA, AffineInvariance) {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd X = gaussian(150, 3, rng);
  Eigen::MatrixXd Y = gaussian(150, 2, rng);
  Y.col(0) += 0.5 * X.col(2);
  const Eigen::MatrixXd M = gaussian(3, 3, rng) + 3.0 * Eigen::MatrixXd::Identity(3, 3);
  const Eigen::MatrixXd X2 = (X * M).rowwise() + Eigen::RowVector3d(4.0, -2.0, 9.0);
  const CCAResult a = run_cca(X, Y);
  const CCAResult b = run_cca(X2, 7.0 * Y);
  for (Eigen::Index k = 0; k < 2; ++k) EXPECT_NEAR(a.correlations[k], b.correlations[k], 1e-8);
}

TEST(CCA, RejectsBadInput) {
  std::mt19937_64 rng(6);
  EXPECT_THROW(run_cca(gaussian(4, 4, rng), gaussian(4, 2, rng)), std::invalid_argument);
  EXPECT_THROW(run_cca(gaussian(10, 2, rng), gaussian(9, 2, rng)), std::invalid_argument);
  Eigen::MatrixXd bad = gaussian(10, 2, rng);
  bad(3, 1) = std::nan("");
  EXPECT_THROW(run_cca(bad, gaussian(10, 2, rng)), std::invalid_argument);
}

TEST(OneShot, NearestExemplar) {
  Eigen::MatrixXd ex(3, 2);
  ex << 0, 0, 10, 0, 0, 10;
  Eigen::MatrixXd test(4, 2);
  test << 1, 1, 9, -1, -1, 8, 10, 10;
  const auto pred = one_shot_predict(ex, {4, 7, 9}, test);
  // (10, 10) is equidistant from labels 7 and 9 and goes to the lower label.
  EXPECT_EQ(pred, (std::vector<int>{4, 7, 9, 7}));
  EXPECT_DOUBLE_EQ(one_shot_accuracy(ex, {4, 7, 9}, test, {4, 7, 9, 9}), 0.75);
}

TEST(OneShot, InvariantToRigidMotionOfTheLatentSpace) {
  std::mt19937_64 rng(7);
  const Eigen::MatrixXd ex = gaussian(3, 5, rng);
  const Eigen::MatrixXd test = gaussian(50, 5, rng);
  const Eigen::MatrixXd Q = gaussian(5, 5, rng).householderQr().householderQ();
  const Eigen::RowVectorXd shift = gaussian(1, 5, rng).row(0);
  const std::vector<int> labels{0, 1, 2};
  EXPECT_EQ(one_shot_predict(ex, labels, test),
            one_shot_predict((ex * Q).rowwise() + shift, labels, (test * Q).rowwise() + shift));
}

TEST(OneShot, RejectsBadExemplars) {
  std::mt19937_64 rng(8);
  const Eigen::MatrixXd ex = gaussian(2, 3, rng);
  EXPECT_THROW(one_shot_predict(ex, {1, 1}, ex), std::invalid_argument);
  EXPECT_THROW(one_shot_predict(ex.topRows(1), {1}, ex), std::invalid_argument);
  EXPECT_THROW(one_shot_accuracy(ex, {0, 1}, ex, {0, 5}), std::invalid_argument);
}

TEST(Regression, ExactLinearTargetHasZeroError) {
  std::mt19937_64 rng(9);
  const Eigen::MatrixXd X = gaussian(80, 3, rng);
  const Eigen::VectorXd y = 2.0 * X.col(0) - 0.5 * X.col(2) + Eigen::VectorXd::Constant(80, 3.0);
  const LinearFit fit = fit_linear(X, y, 0.0);
  EXPECT_NEAR(fit.coef[0], 2.0, 1e-10);
  EXPECT_NEAR(fit.coef[1], 0.0, 1e-10);
  EXPECT_NEAR(fit.intercept, 3.0, 1e-10);
  EXPECT_LT(regression_probe(X, y), 1e-6);
}

TEST(Regression, UninformativeFeaturesScoreAboutOne) {
  std::mt19937_64 rng(10);
  const Eigen::MatrixXd X = gaussian(500, 2, rng);
  const Eigen::VectorXd y = gaussian(500, 1, rng).col(0);
  const double e = regression_probe(X, y, 3);
  EXPECT_GT(e, 0.8);
  EXPECT_LT(e, 1.3);
}

TEST(Regression, RejectsDegenerateInput) {
  std::mt19937_64 rng(11);
  const Eigen::MatrixXd X = gaussian(30, 2, rng);
  EXPECT_THROW(regression_probe(X, Eigen::VectorXd::Constant(30, 1.5)), std::invalid_argument);
  EXPECT_THROW(regression_probe(gaussian(3, 2, rng), Eigen::VectorXd::LinSpaced(3, 0, 1)),
               std::invalid_argument);
}

TEST(PCA, ExplainedVarianceMatchesJacobiOracle) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> rows(8, 64);
  std::uniform_int_distribution<int> cols(2, 6);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = rows(rng);
    const int d = cols(rng);
    Eigen::MatrixXd X = gaussian(n, d, rng) * gaussian(d, d, rng);
    const Eigen::MatrixXd Xc = X.rowwise() - X.colwise().mean();
    const auto oracle = jacobi_eigenvalues(Xc.transpose() * Xc / static_cast<double>(n - 1));
    const PCAResult r = pca(X, static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
      EXPECT_NEAR(r.explained_variance[k], std::max(0.0, oracle[static_cast<std::size_t>(k)]),
                  1e-8 * std::max(1.0, oracle[0]))
          << trial;
    }
    // Scores of the first component have the first eigenvalue as variance.
    const Eigen::VectorXd s = r.scores.col(0);
    EXPECT_NEAR(s.squaredNorm() / (n - 1), r.explained_variance[0], 1e-8 * std::max(1.0, oracle[0]));
    EXPECT_NEAR(r.components.col(0).norm(), 1.0, 1e-12);
  }
}

TEST(PCA, SignConventionAndBounds) {
  std::mt19937_64 rng(13);
  const Eigen::MatrixXd X = gaussian(20, 4, rng);
  const PCAResult r = pca(X, 2);
  for (Eigen::Index c = 0; c < 2; ++c) {
    Eigen::Index arg = 0;
    r.components.col(c).cwiseAbs().maxCoeff(&arg);
    EXPECT_GT(r.components(arg, c), 0.0);
  }
  EXPECT_THROW(pca(X, 5), std::invalid_argument);
  EXPECT_THROW(pca(X, 0), std::invalid_argument);
}

class LatentOnModel : public ::testing::Test {
 protected:
  void SetUp() override {
    ds_ = small_dataset(20, 20, 3);
    model_ = train::init_model_for(ds_, model::ModelConfig{}, 2);
  }
  trajdata::TrajectoryDataset ds_;
  model::ProGAE model_;
};

TEST_F(LatentOnModel, EmbeddingRowsMatchEncode) {
  const Embeddings e = embed_frames(model_, ds_, ds_.splits.test);
  ASSERT_EQ(e.intrinsic.rows(), static_cast<Eigen::Index>(ds_.splits.test.size()));
  EXPECT_EQ(e.intrinsic.cols(), 16);
  EXPECT_EQ(e.extrinsic.cols(), 32);
  const std::size_t f = ds_.splits.test[2];
  const model::LatentCode z = model_.encode_frame(ds_.frames[f].coords);
  EXPECT_EQ(e.frame_index[2], f);
  EXPECT_EQ(e.labels[2], ds_.frames[f].label_id);
  for (Eigen::Index j = 0; j < 32; ++j) EXPECT_EQ(e.extrinsic(2, j), z.extrinsic[static_cast<std::size_t>(j)]);
}

TEST_F(LatentOnModel, SignalMatrixHoldsUnitBondDirections) {
  const Eigen::MatrixXd S = extrinsic_signal_matrix(ds_, {0, 5});
  ASSERT_EQ(S.rows(), 2);
  ASSERT_EQ(S.cols(), 3 * 19);
  for (Eigen::Index b = 0; b < 19; ++b) EXPECT_NEAR(S.block(1, 3 * b, 1, 3).norm(), 1.0, 1e-12);
  EXPECT_THROW(property_vector(ds_, {0}, "no_such_property"), std::invalid_argument);
  const auto& name = ds_.meta.property_names.front();
  EXPECT_EQ(property_vector(ds_, {4}, name)[0], ds_.frames[4].properties.at(name));
}

TEST_F(LatentOnModel, InterpolationEndpointsAreReconstructions) {
  const Coords& a = ds_.frames[ds_.splits.test[0]].coords;
  const Coords& b = ds_.frames[ds_.splits.test[1]].coords;
  const auto path = interpolate_latent(model_, a, b, 5);
  ASSERT_EQ(path.size(), 5u);
  EXPECT_EQ(path.front().alpha, 0.0);
  EXPECT_EQ(path[2].alpha, 0.5);
  EXPECT_EQ(path.back().alpha, 1.0);
  EXPECT_NEAR(path.front().rmsd_to_a, model::reconstruct(model_, a).rmsd, 1e-9);
  EXPECT_NEAR(path.back().rmsd_to_b, model::reconstruct(model_, b).rmsd, 1e-9);
  EXPECT_THROW(interpolate_latent(model_, a, b, 1), std::invalid_argument);
  Coords shorter(a.begin(), a.end() - 1);
  EXPECT_THROW(interpolate_latent(model_, shorter, b), std::invalid_argument);
}

TEST_F(LatentOnModel, ProbeSuiteShapes) {
  // The PCA baseline keeps 32 components, so score the larger train split.
  const ProbeSuite s = run_probe_suite(model_, ds_, trajdata::Split::kTrain);
  EXPECT_EQ(s.test_frames, ds_.splits.train.size());
  EXPECT_GE(s.extrinsic_accuracy, 0.0);
  EXPECT_LE(s.extrinsic_accuracy, 1.0);
  EXPECT_EQ(s.regressions.size(), ds_.meta.property_names.size());
  for (const auto& r : s.regressions) {
    EXPECT_TRUE(std::isfinite(r.value));
    EXPECT_TRUE(std::isfinite(r.baseline));
  }
}

}  // namespace
}  // namespace conformer_forge::latent
