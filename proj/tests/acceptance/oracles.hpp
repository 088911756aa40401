// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Brute-force reference implementations used by the acceptance checks. They
// share no code with the library beyond the coordinate types.

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "conformer_forge/common.hpp"

namespace conformer_forge::oracle {

inline std::vector<std::pair<std::size_t, std::size_t>> contacts(const Coords& x, double cutoff,
                                                                 std::size_t min_sep) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + min_sep; j < x.size(); ++j) {
      const double d = std::sqrt((x[i] - x[j]).squaredNorm());
      if (d <= cutoff) out.emplace_back(i, j);
    }
  }
  return out;
}

inline std::vector<std::size_t> farthest_points(const Coords& x, std::size_t count) {
  std::vector<std::size_t> chosen{0};
  std::vector<double> best(x.size(), std::numeric_limits<double>::infinity());
  while (chosen.size() < count) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      best[i] = std::min(best[i], (x[i] - x[chosen.back()]).norm());
    }
    std::size_t pick = 0;
    for (std::size_t i = 1; i < x.size(); ++i) {
      if (best[i] > best[pick]) pick = i;
    }
    chosen.push_back(pick);
  }
  return chosen;
}

/// Sorted (dst, src) pairs within `radius`, self-loops included.
inline std::vector<std::pair<std::size_t, std::size_t>> radius_pairs(const Coords& x, double radius) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (i == j || (x[i] - x[j]).norm() <= radius) out.emplace_back(i, j);
    }
  }
  return out;
}

/// Horn's quaternion solution: the optimal rotation maximizes q^T N q.
inline double superposed_rmsd(const Coords& p, const Coords& q) {
  Vec3 cp = Vec3::Zero();
  Vec3 cq = Vec3::Zero();
  for (std::size_t i = 0; i < p.size(); ++i) {
    cp += p[i];
    cq += q[i];
  }
  cp /= static_cast<double>(p.size());
  cq /= static_cast<double>(q.size());
  Mat3 s = Mat3::Zero();
  double norms = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec3 a = p[i] - cp;
    const Vec3 b = q[i] - cq;
    s += a * b.transpose();
    norms += a.squaredNorm() + b.squaredNorm();
  }
  Eigen::Matrix4d n;
  n << s(0, 0) + s(1, 1) + s(2, 2), s(1, 2) - s(2, 1), s(2, 0) - s(0, 2), s(0, 1) - s(1, 0),
      s(1, 2) - s(2, 1), s(0, 0) - s(1, 1) - s(2, 2), s(0, 1) + s(1, 0), s(2, 0) + s(0, 2),
      s(2, 0) - s(0, 2), s(0, 1) + s(1, 0), -s(0, 0) + s(1, 1) - s(2, 2), s(1, 2) + s(2, 1),
      s(0, 1) - s(1, 0), s(2, 0) + s(0, 2), s(1, 2) + s(2, 1), -s(0, 0) - s(1, 1) + s(2, 2);
  const double top = Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(n).eigenvalues()(3);
  return std::sqrt(std::max(0.0, norms - 2.0 * top) / static_cast<double>(p.size()));
}

/// Cyclic Jacobi eigenvalues of a symmetric matrix, descending.
inline std::vector<double> symmetric_eigenvalues(Eigen::MatrixXd a) {
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

/// Canonical correlations of two 2-column blocks: square roots of the
/// eigenvalues of Sxx^-1 Sxy Syy^-1 Syx, from its trace and determinant.
inline std::pair<double, double> cca_2d(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
  auto cov = [](const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q) {
    Eigen::Matrix2d out;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const double pm = P.col(i).mean();
        const double qm = Q.col(j).mean();
        double s = 0.0;
        for (Eigen::Index r = 0; r < P.rows(); ++r) s += (P(r, i) - pm) * (Q(r, j) - qm);
        out(i, j) = s / static_cast<double>(P.rows() - 1);
      }
    }
    return out;
  };
  auto inv2 = [](const Eigen::Matrix2d& m) {
    const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    Eigen::Matrix2d out;
    out << m(1, 1) / det, -m(0, 1) / det, -m(1, 0) / det, m(0, 0) / det;
    return out;
  };
  const Eigen::Matrix2d sxy = cov(X, Y);
  const Eigen::Matrix2d M = inv2(cov(X, X)) * sxy * inv2(cov(Y, Y)) * sxy.transpose();
  const double tr = M(0, 0) + M(1, 1);
  const double det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  return {std::sqrt(tr / 2.0 + disc), std::sqrt(std::max(0.0, tr / 2.0 - disc))};
}

}  // namespace conformer_forge::oracle
