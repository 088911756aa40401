// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "conformer_forge/nn/hierarchy.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "conformer_forge/ad/ops.hpp"

namespace conformer_forge::nn {

namespace {

EdgeList from_pairs(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> dst_src) {
  std::sort(dst_src.begin(), dst_src.end());
  dst_src.erase(std::unique(dst_src.begin(), dst_src.end()), dst_src.end());
  EdgeList out;
  out.vertex_count = n;
  out.src.reserve(dst_src.size());
  out.dst.reserve(dst_src.size());
  for (const auto& [d, s] : dst_src) {
    out.dst.push_back(d);
    out.src.push_back(s);
  }
  return out;
}

}  // namespace

bool EdgeList::contains(std::size_t from, std::size_t to) const {
  for (std::size_t e = 0; e < src.size(); ++e) {
    if (src[e] == from && dst[e] == to) return true;
  }
  return false;
}

std::vector<std::size_t> farthest_point_sample(std::span<const Vec3> points, std::size_t count,
                                               std::size_t seed_index) {
  const std::size_t m = points.size();
  if (count == 0 || count > m) {
    throw std::invalid_argument("farthest_point_sample: need 1 <= count <= " + std::to_string(m) +
                                ", got " + std::to_string(count));
  }
  if (seed_index >= m) throw std::invalid_argument("farthest_point_sample: seed out of range");

  std::vector<std::size_t> picked{seed_index};
  std::vector<double> min_d2(m, std::numeric_limits<double>::infinity());
  std::vector<bool> taken(m, false);
  taken[seed_index] = true;
  std::size_t last = seed_index;
  while (picked.size() < count) {
    std::size_t best = m;
    double best_d2 = -1.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (taken[i]) continue;
      min_d2[i] = std::min(min_d2[i], (points[i] - points[last]).squaredNorm());
      if (min_d2[i] > best_d2) {  // strict: earlier index wins ties
        best_d2 = min_d2[i];
        best = i;
      }
    }
    taken[best] = true;
    picked.push_back(best);
    last = best;
  }
  return picked;
}

EdgeList build_radius_graph(std::span<const Vec3> points, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("build_radius_graph: radius must be positive");
  const std::size_t n = points.size();
  const double r2 = radius * radius;
  EdgeList out;
  out.vertex_count = n;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || (points[i] - points[j]).squaredNorm() <= r2) {
        out.dst.push_back(i);
        out.src.push_back(j);
      }
    }
  }
  return out;
}

EdgeList symmetric_edges(std::size_t vertex_count,
                         std::span<const std::pair<std::size_t, std::size_t>> pairs,
                         bool self_loops) {
  std::vector<std::pair<std::size_t, std::size_t>> dst_src;
  dst_src.reserve(2 * pairs.size() + vertex_count);
  for (const auto& [a, b] : pairs) {
    if (a >= vertex_count || b >= vertex_count) {
      throw std::invalid_argument("symmetric_edges: vertex out of range");
    }
    dst_src.emplace_back(a, b);
    dst_src.emplace_back(b, a);
  }
  if (self_loops) {
    for (std::size_t v = 0; v < vertex_count; ++v) dst_src.emplace_back(v, v);
  }
  return from_pairs(vertex_count, std::move(dst_src));
}

GraphHierarchy build_hierarchy(std::span<const Vec3> reference, std::size_t levels,
                               double radius0, bool chain_links) {
  if (levels == 0) throw std::invalid_argument("build_hierarchy: need at least one level");
  if (!(radius0 > 0.0)) throw std::invalid_argument("build_hierarchy: radius must be positive");
  const std::size_t need = std::size_t{1} << (levels - 1);
  if (reference.size() < need) {
    throw std::invalid_argument("build_hierarchy: chain of " + std::to_string(reference.size()) +
                                " vertices is too short for " + std::to_string(levels) +
                                " levels (needs " + std::to_string(need) + ")");
  }

  GraphHierarchy h;
  h.radius0 = radius0;
  h.chain_links = chain_links;
  h.levels.resize(levels);

  HierarchyLevel& base = h.levels[0];
  base.vertices.resize(reference.size());
  for (std::size_t i = 0; i < reference.size(); ++i) base.vertices[i] = i;
  base.positions.assign(reference.begin(), reference.end());

  for (std::size_t k = 0; k < levels; ++k) {
    HierarchyLevel& level = h.levels[k];
    level.radius = radius0 * static_cast<double>(std::size_t{1} << k);
    EdgeList g = build_radius_graph(level.positions, level.radius);
    if (chain_links && level.positions.size() > 1) {
      std::vector<std::pair<std::size_t, std::size_t>> dst_src;
      for (std::size_t e = 0; e < g.size(); ++e) dst_src.emplace_back(g.dst[e], g.src[e]);
      for (std::size_t v = 0; v + 1 < level.positions.size(); ++v) {
        dst_src.emplace_back(v, v + 1);
        dst_src.emplace_back(v + 1, v);
      }
      g = from_pairs(level.positions.size(), std::move(dst_src));
    }
    level.graph = std::move(g);
    if (k + 1 == levels) break;

    const std::size_t m = level.positions.size();
    std::vector<std::size_t> kept = farthest_point_sample(level.positions, (m + 1) / 2, 0);
    std::sort(kept.begin(), kept.end());
    level.retained = kept;

    HierarchyLevel& next = h.levels[k + 1];
    for (std::size_t local : kept) {
      next.vertices.push_back(level.vertices[local]);
      next.positions.push_back(level.positions[local]);
    }

    std::vector<std::size_t> self_slot(m, m);
    for (std::size_t p = 0; p < kept.size(); ++p) self_slot[kept[p]] = p;
    level.parent.resize(m);
    for (std::size_t v = 0; v < m; ++v) {
      if (self_slot[v] != m) {
        level.parent[v] = self_slot[v];
        continue;
      }
      std::size_t best = 0;
      double best_d2 = std::numeric_limits<double>::infinity();
      for (std::size_t p = 0; p < kept.size(); ++p) {
        const double d2 = (level.positions[v] - next.positions[p]).squaredNorm();
        if (d2 < best_d2) {
          best_d2 = d2;
          best = p;
        }
      }
      level.parent[v] = best;
    }
  }
  return h;
}

EdgeList replicate(const EdgeList& graph, std::size_t copies) {
  EdgeList out;
  out.vertex_count = graph.vertex_count * copies;
  out.src.reserve(graph.size() * copies);
  out.dst.reserve(graph.size() * copies);
  for (std::size_t c = 0; c < copies; ++c) {
    const std::size_t offset = c * graph.vertex_count;
    for (std::size_t e = 0; e < graph.size(); ++e) {
      out.src.push_back(graph.src[e] + offset);
      out.dst.push_back(graph.dst[e] + offset);
    }
  }
  return out;
}

std::vector<std::size_t> replicate_index(const std::vector<std::size_t>& index,
                                         std::size_t source_rows, std::size_t copies) {
  std::vector<std::size_t> out;
  out.reserve(index.size() * copies);
  for (std::size_t c = 0; c < copies; ++c) {
    for (std::size_t i : index) out.push_back(i + c * source_rows);
  }
  return out;
}

ad::Var downsample_signal(ad::Var x, const GraphHierarchy& h, std::size_t level,
                          std::size_t copies) {
  if (level + 1 >= h.depth()) throw std::invalid_argument("downsample_signal: no coarser level");
  const HierarchyLevel& l = h.levels[level];
  if (x.rows() != l.vertices.size() * copies) {
    throw std::invalid_argument("downsample_signal: row count does not match level " +
                                std::to_string(level));
  }
  return ad::gather_rows(x, replicate_index(l.retained, l.vertices.size(), copies));
}

ad::Var upsample_signal(ad::Var x, const GraphHierarchy& h, std::size_t level,
                        std::size_t copies) {
  if (level + 1 >= h.depth()) throw std::invalid_argument("upsample_signal: no coarser level");
  const HierarchyLevel& l = h.levels[level];
  const std::size_t coarse = h.levels[level + 1].vertices.size();
  if (x.rows() != coarse * copies) {
    throw std::invalid_argument("upsample_signal: row count does not match level " +
                                std::to_string(level + 1));
  }
  return ad::gather_rows(x, replicate_index(l.parent, coarse, copies));
}

}  // namespace conformer_forge::nn
