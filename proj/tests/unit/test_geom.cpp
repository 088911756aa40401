// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "conformer_forge/geom.hpp"
#include "test_util.hpp"

namespace conformer_forge::geom {
namespace {

using conformer_forge::testing::random_chain;
using conformer_forge::testing::random_cloud;
using conformer_forge::testing::random_motion;

std::vector<Edge> brute_force_contacts(const Coords& c, double cutoff, std::size_t min_sep) {
  std::vector<Edge> out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = i + min_sep; j < c.size(); ++j) {
      const double dx = c[i].x() - c[j].x();
      const double dy = c[i].y() - c[j].y();
      const double dz = c[i].z() - c[j].z();
      if (std::sqrt(dx * dx + dy * dy + dz * dz) <= cutoff) out.push_back({i, j});
    }
  }
  return out;
}

// Horn's closed-form quaternion solution: the optimal rotation maximizes
// q^T N q, so the minimal residual follows from the top eigenvalue of N.
double horn_rmsd(const Coords& p, const Coords& q) {
  const Coords a = center(p);
  const Coords b = center(q);
  Mat3 s = Mat3::Zero();
  double norms = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += a[i] * b[i].transpose();
    norms += a[i].squaredNorm() + b[i].squaredNorm();
  }
  Eigen::Matrix4d n;
  n << s(0, 0) + s(1, 1) + s(2, 2), s(1, 2) - s(2, 1), s(2, 0) - s(0, 2), s(0, 1) - s(1, 0),
      s(1, 2) - s(2, 1), s(0, 0) - s(1, 1) - s(2, 2), s(0, 1) + s(1, 0), s(2, 0) + s(0, 2),
      s(2, 0) - s(0, 2), s(0, 1) + s(1, 0), -s(0, 0) + s(1, 1) - s(2, 2), s(1, 2) + s(2, 1),
      s(0, 1) - s(1, 0), s(2, 0) + s(0, 2), s(1, 2) + s(2, 1), -s(0, 0) - s(1, 1) + s(2, 2);
  const double top = Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(n).eigenvalues()(3);
  return std::sqrt(std::max(0.0, norms - 2.0 * top) / static_cast<double>(a.size()));
}

TEST(Backbone, ChainEdges) {
  const auto g = build_backbone_graph(5);
  ASSERT_EQ(g.edges.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(g.edges[i], (Edge{i, i + 1}));
}

TEST(Contacts, CollinearExamples) {
  Coords spaced3;
  for (int i = 0; i < 5; ++i) spaced3.emplace_back(3.0 * i, 0, 0);
  EXPECT_TRUE(build_contact_graph(spaced3, 8.0).edges.empty());

  Coords spaced15;
  for (int i = 0; i < 6; ++i) spaced15.emplace_back(1.5 * i, 0, 0);
  const auto g = build_contact_graph(spaced15, 8.0);
  EXPECT_EQ(g.edges, (std::vector<Edge>{{0, 4}, {0, 5}, {1, 5}}));
  const auto len = intrinsic_signal(g, spaced15);
  EXPECT_DOUBLE_EQ(len[0], 6.0);
  EXPECT_DOUBLE_EQ(len[1], 7.5);
  EXPECT_DOUBLE_EQ(len[2], 6.0);

  EXPECT_TRUE(build_contact_graph(spaced15, 0.1).edges.empty());
}

TEST(Contacts, MatchBruteForceOnRandomChains) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 8 + trial * 2;
    const Coords c = random_chain(n, rng);
    const double cutoff = 6.5 + 0.2 * trial;
    const auto g = build_contact_graph(c, cutoff, 4);
    EXPECT_EQ(g.edges, brute_force_contacts(c, cutoff, 4)) << "trial " << trial;
    EXPECT_TRUE(std::is_sorted(g.edges.begin(), g.edges.end()));
    const auto len = intrinsic_signal(g, c);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      EXPECT_GT(len[e], 0.0);
      EXPECT_LE(len[e], cutoff);
      EXPECT_NEAR(len[e], (c[g.edges[e].i] - c[g.edges[e].j]).norm(), 1e-12);
    }
  }
}

TEST(Signals, ThreeFourFiveTriangle) {
  const Coords c{Vec3(0, 0, 0), Vec3(9, 9, 9), Vec3(9, -9, 9), Vec3(-9, 9, -9), Vec3(0, 3, 4)};
  ContactGraph g;
  g.vertex_count = 5;
  g.edges = {{0, 4}};
  EXPECT_DOUBLE_EQ(intrinsic_signal(g, c)[0], 5.0);
  ContactGraph bad = g;
  bad.vertex_count = 6;
  EXPECT_THROW(intrinsic_signal(bad, c), std::invalid_argument);
}

TEST(Signals, ExtrinsicUnitBond) {
  const Coords c{Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(2, 5, 0)};
  const auto s = extrinsic_signal(build_backbone_graph(3), c);
  EXPECT_EQ(s[0], Vec3(1, 0, 0));
  EXPECT_EQ(s[1], Vec3(0, 1, 0));
}

TEST(Signals, DegenerateBondThrows) {
  const Coords c{Vec3(0, 0, 0), Vec3(0, 0, 0), Vec3(1, 0, 0)};
  EXPECT_THROW(extrinsic_signal(build_backbone_graph(3), c), std::domain_error);
}

TEST(Signals, RigidMotionInvarianceAndEquivariance) {
  std::mt19937_64 rng(3);
  const Coords c = random_chain(40, rng);
  const auto contacts = build_contact_graph(c, 10.0);
  const auto backbone = build_backbone_graph(c.size());
  const auto lengths = intrinsic_signal(contacts, c);
  const auto dirs = extrinsic_signal(backbone, c);
  for (int trial = 0; trial < 100; ++trial) {
    const RigidTransform t = random_motion(rng);
    const Coords moved = t.apply(c);
    const auto l2 = intrinsic_signal(contacts, moved);
    for (std::size_t e = 0; e < lengths.size(); ++e) EXPECT_NEAR(l2[e], lengths[e], 1e-9);
    const auto d2 = extrinsic_signal(backbone, moved);
    for (std::size_t e = 0; e < dirs.size(); ++e) {
      EXPECT_LT((d2[e] - t.rotation * dirs[e]).norm(), 1e-9);
      EXPECT_NEAR(d2[e].norm(), 1.0, 1e-12);
    }
  }
}

TEST(Kabsch, IdentityAndExactSuperposition) {
  std::mt19937_64 rng(5);
  const Coords p = random_cloud(12, rng);
  EXPECT_LT(kabsch_rmsd(p, p).rmsd, 1e-9);
  for (int trial = 0; trial < 20; ++trial) {
    const RigidTransform t = random_motion(rng);
    const auto fit = kabsch_rmsd(p, t.apply(p));
    EXPECT_LT(fit.rmsd, 1e-8);
    const Mat3& r = fit.transform.rotation;
    EXPECT_LT((r.transpose() * r - Mat3::Identity()).norm(), 1e-9);
    EXPECT_NEAR(r.determinant(), 1.0, 1e-9);
    EXPECT_LT((r - t.rotation).norm(), 1e-8);
  }
}

TEST(Kabsch, DisplacedPointMatchesQuaternionOracle) {
  const Coords p{Vec3(0, 0, 0), Vec3(1.5, 0, 0), Vec3(0, 2.5, 0), Vec3(0, 0, 4)};
  Coords q = p;
  q[2] += Vec3(1, 0, 0);
  const double rmsd = kabsch_rmsd(p, q).rmsd;
  EXPECT_NEAR(rmsd, horn_rmsd(p, q), 1e-10);
  EXPECT_GT(rmsd, 0.0);
  EXPECT_LT(rmsd, 0.5);
}

TEST(Kabsch, MatchesQuaternionOracleOnRandomSets) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial) * 2;
    const Coords p = random_cloud(n, rng);
    const Coords q = random_cloud(n, rng);
    const auto pq = kabsch_rmsd(p, q);
    EXPECT_NEAR(pq.rmsd, horn_rmsd(p, q), 1e-8) << "n=" << n;
    EXPECT_NEAR(pq.rmsd, kabsch_rmsd(q, p).rmsd, 1e-8);
    EXPECT_LE(pq.rmsd, unaligned_rmsd(p, q) + 1e-12);
    EXPECT_NEAR(unaligned_rmsd(pq.transform.apply(p), q), pq.rmsd, 1e-8);
  }
}

TEST(Kabsch, ReflectionIsNotAllowed) {
  std::mt19937_64 rng(23);
  const Coords p = random_cloud(10, rng);
  Coords mirrored = p;
  for (auto& v : mirrored) v.x() = -v.x();
  const auto fit = kabsch_rmsd(p, mirrored);
  EXPECT_NEAR(fit.transform.rotation.determinant(), 1.0, 1e-9);
  EXPECT_NEAR(fit.rmsd, horn_rmsd(p, mirrored), 1e-8);
  EXPECT_GT(fit.rmsd, 1e-3);
}

TEST(Kabsch, CountMismatchThrows) {
  const Coords a(4, Vec3::Ones());
  const Coords b(5, Vec3::Ones());
  EXPECT_THROW(kabsch_rmsd(a, b), std::invalid_argument);
}

TEST(Jaccard, SetArithmetic) {
  Coords truth;
  for (int i = 0; i < 6; ++i) truth.emplace_back(1.5 * i, 0, 0);  // contacts {04, 05, 15}
  EXPECT_DOUBLE_EQ(contact_jaccard(truth, truth), 1.0);

  // Straight line with spacing 3: no contacts at all on either side.
  Coords far;
  for (int i = 0; i < 6; ++i) far.emplace_back(3.0 * i, 0, 0);
  EXPECT_DOUBLE_EQ(contact_jaccard(far, far), 1.0);
  EXPECT_DOUBLE_EQ(contact_jaccard(truth, far), 0.0);

  // {04, 05} vs {05, 15}: one shared contact out of three.
  Coords a = truth;
  a[1] = Vec3(-20, 0, 0);
  Coords b = truth;
  b[4] = Vec3(50, 0, 0);
  EXPECT_NEAR(contact_jaccard(a, b), 1.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(contact_jaccard(a, b), contact_jaccard(b, a));
}

TEST(Center, Basics) {
  const Coords c{Vec3(0, 0, 0), Vec3(2, 0, 0)};
  const Coords z = center(c);
  EXPECT_EQ(z[0], Vec3(-1, 0, 0));
  EXPECT_EQ(z[1], Vec3(1, 0, 0));

  std::mt19937_64 rng(2);
  const Coords r = random_cloud(20, rng);
  const Coords once = center(r);
  EXPECT_LT(centroid(once).norm(), 1e-9);
  const Coords twice = center(once);
  for (std::size_t i = 0; i < r.size(); ++i) {
    EXPECT_LT((twice[i] - once[i]).norm(), 1e-12);
    EXPECT_NEAR((once[i] - once[0]).norm(), (r[i] - r[0]).norm(), 1e-12);
  }
}

}  // namespace
}  // namespace conformer_forge::geom
