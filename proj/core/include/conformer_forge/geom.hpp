// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "conformer_forge/common.hpp"

namespace conformer_forge::geom {

/// An undirected edge (i, j) with i < j.
struct Edge {
  std::size_t i = 0;
  std::size_t j = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Consecutive-vertex bonds (i, i+1) of a chain.
struct BackboneGraph {
  std::size_t vertex_count = 0;
  std::vector<Edge> edges;
};

/// Pairs closer than `cutoff` and at least `min_separation` apart in sequence.
struct ContactGraph {
  std::size_t vertex_count = 0;
  std::vector<Edge> edges;  // lexicographically sorted
  double cutoff = 8.0;
  std::size_t min_separation = 4;
};

struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  Coords apply(std::span<const Vec3> points) const;
};

struct Superposition {
  RigidTransform transform;  // maps the first point set onto the second
  double rmsd = 0.0;
};

inline constexpr double kDefaultContactCutoff = 8.0;
inline constexpr std::size_t kDefaultMinSeparation = 4;
inline constexpr double kDegenerateBondLength = 1e-8;

BackboneGraph build_backbone_graph(std::size_t vertex_count);

ContactGraph build_contact_graph(std::span<const Vec3> coords,
                                 double cutoff = kDefaultContactCutoff,
                                 std::size_t min_separation = kDefaultMinSeparation);

/// Edge length per contact edge.
std::vector<double> intrinsic_signal(const ContactGraph& graph, std::span<const Vec3> coords);

/// Unit bond direction per backbone edge, oriented from the lower to the
/// higher vertex index. Throws std::domain_error on a degenerate bond.
std::vector<Vec3> extrinsic_signal(const BackboneGraph& graph, std::span<const Vec3> coords);

/// Optimal proper rigid superposition of `moving` onto `target`.
Superposition kabsch_rmsd(std::span<const Vec3> moving, std::span<const Vec3> target);

/// RMS of the per-point distance without any alignment.
double unaligned_rmsd(std::span<const Vec3> a, std::span<const Vec3> b);

/// Jaccard index between the contact sets of two frames; 1 when both are empty.
double contact_jaccard(std::span<const Vec3> truth, std::span<const Vec3> predicted,
                       double cutoff = kDefaultContactCutoff,
                       std::size_t min_separation = kDefaultMinSeparation);

Vec3 centroid(std::span<const Vec3> coords);
Coords center(std::span<const Vec3> coords);

/// Rotation from a unit quaternion (w, x, y, z); mainly for tests.
Mat3 rotation_from_quaternion(double w, double x, double y, double z);

}  // namespace conformer_forge::geom
