// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "conformer_forge/geom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Geometry>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace conformer_forge::geom {

Coords RigidTransform::apply(std::span<const Vec3> points) const {
  Coords out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(apply(p));
  return out;
}

BackboneGraph build_backbone_graph(std::size_t vertex_count) {
  BackboneGraph g;
  g.vertex_count = vertex_count;
  if (vertex_count < 2) return g;
  g.edges.reserve(vertex_count - 1);
  for (std::size_t i = 0; i + 1 < vertex_count; ++i) g.edges.push_back({i, i + 1});
  return g;
}

ContactGraph build_contact_graph(std::span<const Vec3> coords, double cutoff,
                                 std::size_t min_separation) {
  if (!(cutoff > 0.0)) throw std::invalid_argument("contact cutoff must be positive");
  ContactGraph g;
  g.vertex_count = coords.size();
  g.cutoff = cutoff;
  g.min_separation = min_separation;
  const double cutoff_sq = cutoff * cutoff;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    for (std::size_t j = i + std::max<std::size_t>(min_separation, 1); j < coords.size(); ++j) {
      if ((coords[i] - coords[j]).squaredNorm() <= cutoff_sq) g.edges.push_back({i, j});
    }
  }
  return g;
}

std::vector<double> intrinsic_signal(const ContactGraph& graph, std::span<const Vec3> coords) {
  if (coords.size() != graph.vertex_count) {
    throw std::invalid_argument("intrinsic_signal: atom count does not match graph");
  }
  std::vector<double> out;
  out.reserve(graph.edges.size());
  for (const auto& e : graph.edges) out.push_back((coords[e.j] - coords[e.i]).norm());
  return out;
}

std::vector<Vec3> extrinsic_signal(const BackboneGraph& graph, std::span<const Vec3> coords) {
  if (coords.size() != graph.vertex_count) {
    throw std::invalid_argument("extrinsic_signal: atom count does not match graph");
  }
  std::vector<Vec3> out;
  out.reserve(graph.edges.size());
  for (const auto& e : graph.edges) {
    const Vec3 d = coords[e.j] - coords[e.i];
    const double len = d.norm();
    if (!(len > kDegenerateBondLength)) {
      throw std::domain_error("degenerate bond between vertices " + std::to_string(e.i) +
                              " and " + std::to_string(e.j));
    }
    const double sign = e.j > e.i ? 1.0 : -1.0;
    out.push_back(sign * d / len);
  }
  return out;
}

Vec3 centroid(std::span<const Vec3> coords) {
  Vec3 c = Vec3::Zero();
  if (coords.empty()) return c;
  for (const auto& p : coords) c += p;
  return c / static_cast<double>(coords.size());
}

Coords center(std::span<const Vec3> coords) {
  const Vec3 c = centroid(coords);
  Coords out;
  out.reserve(coords.size());
  for (const auto& p : coords) out.push_back(p - c);
  return out;
}

Superposition kabsch_rmsd(std::span<const Vec3> moving, std::span<const Vec3> target) {
  if (moving.size() != target.size()) {
    throw std::invalid_argument("kabsch_rmsd: point-count mismatch");
  }
  if (moving.size() < 3) throw std::invalid_argument("kabsch_rmsd: need at least 3 points");

  const Vec3 cm = centroid(moving);
  const Vec3 ct = centroid(target);
  Mat3 cov = Mat3::Zero();
  for (std::size_t i = 0; i < moving.size(); ++i) {
    cov += (moving[i] - cm) * (target[i] - ct).transpose();
  }
  Eigen::JacobiSVD<Mat3> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3& u = svd.matrixU();
  const Mat3& v = svd.matrixV();
  Mat3 correction = Mat3::Identity();
  if ((v * u.transpose()).determinant() < 0.0) correction(2, 2) = -1.0;

  Superposition out;
  out.transform.rotation = v * correction * u.transpose();
  out.transform.translation = ct - out.transform.rotation * cm;
  double sq = 0.0;
  for (std::size_t i = 0; i < moving.size(); ++i) {
    sq += (out.transform.apply(moving[i]) - target[i]).squaredNorm();
  }
  out.rmsd = std::sqrt(sq / static_cast<double>(moving.size()));
  return out;
}

double unaligned_rmsd(std::span<const Vec3> a, std::span<const Vec3> b) {
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument("unaligned_rmsd: point-count mismatch");
  }
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sq += (a[i] - b[i]).squaredNorm();
  return std::sqrt(sq / static_cast<double>(a.size()));
}

double contact_jaccard(std::span<const Vec3> truth, std::span<const Vec3> predicted,
                       double cutoff, std::size_t min_separation) {
  if (truth.size() != predicted.size()) {
    throw std::invalid_argument("contact_jaccard: atom count mismatch");
  }
  const auto a = build_contact_graph(truth, cutoff, min_separation).edges;
  const auto b = build_contact_graph(predicted, cutoff, min_separation).edges;
  if (a.empty() && b.empty()) return 1.0;
  // Both edge lists are sorted, so a merge walk counts the intersection.
  std::size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  const std::size_t uni = a.size() + b.size() - common;
  return static_cast<double>(common) / static_cast<double>(uni);
}

Mat3 rotation_from_quaternion(double w, double x, double y, double z) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  w /= n;
  x /= n;
  y /= n;
  z /= n;
  Mat3 r;
  r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return r;
}

}  // namespace conformer_forge::geom
