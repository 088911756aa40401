// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "conformer_forge/ad/tape.hpp"
#include "conformer_forge/common.hpp"

namespace conformer_forge::nn {

/// Directed edges src -> dst; layers aggregate messages at dst. Kept sorted
/// by (dst, src).
struct EdgeList {
  std::size_t vertex_count = 0;
  std::vector<std::size_t> src;
  std::vector<std::size_t> dst;

  std::size_t size() const { return src.size(); }
  bool contains(std::size_t from, std::size_t to) const;
};

/// Greedy farthest point sampling from `seed_index`; ties go to the lowest
/// index. Returns indices in selection order.
std::vector<std::size_t> farthest_point_sample(std::span<const Vec3> points, std::size_t count,
                                               std::size_t seed_index = 0);

/// (j -> i) for every pair within `radius`, plus all self-loops.
EdgeList build_radius_graph(std::span<const Vec3> points, double radius);

/// Both directions of every undirected pair, plus self-loops when requested.
EdgeList symmetric_edges(std::size_t vertex_count,
                         std::span<const std::pair<std::size_t, std::size_t>> pairs,
                         bool self_loops);

struct HierarchyLevel {
  std::vector<std::size_t> vertices;  // indices into the reference chain, ascending
  Coords positions;                   // reference positions of `vertices`
  double radius = 0.0;
  EdgeList graph;
  /// Local indices of the vertices kept at the next level (empty at the top).
  std::vector<std::size_t> retained;
  /// Local index, in the next level, of each vertex's nearest retained vertex.
  std::vector<std::size_t> parent;
};

/// Decimation pyramid computed once from a reference conformation. Level k
/// has ceil(n / 2^k) vertices and radius r0 * 2^k.
struct GraphHierarchy {
  std::vector<HierarchyLevel> levels;
  double radius0 = 2.5;
  bool chain_links = true;

  std::size_t atom_count() const { return levels.empty() ? 0 : levels.front().vertices.size(); }
  std::size_t depth() const { return levels.size(); }
};

inline constexpr std::size_t kDefaultLevels = 5;
inline constexpr double kDefaultRadius0 = 2.5;

/// Throws std::invalid_argument when the chain has fewer than 2^(levels-1)
/// vertices. With `chain_links`, consecutive retained vertices are linked at
/// every level in addition to the radius neighbourhood.
GraphHierarchy build_hierarchy(std::span<const Vec3> reference, std::size_t levels = kDefaultLevels,
                               double radius0 = kDefaultRadius0, bool chain_links = true);

/// Rows of a level-k signal (for `copies` stacked frames) kept at level k+1.
ad::Var downsample_signal(ad::Var x, const GraphHierarchy& h, std::size_t level,
                          std::size_t copies = 1);
/// Level-k rows copied from their level-(k+1) parents.
ad::Var upsample_signal(ad::Var x, const GraphHierarchy& h, std::size_t level,
                        std::size_t copies = 1);

/// Block-diagonal stacking of `copies` identical graphs.
EdgeList replicate(const EdgeList& graph, std::size_t copies);
/// Index map `index` (into blocks of `source_rows`) repeated for `copies` blocks.
std::vector<std::size_t> replicate_index(const std::vector<std::size_t>& index,
                                         std::size_t source_rows, std::size_t copies);

}  // namespace conformer_forge::nn
