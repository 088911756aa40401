// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "conformer_forge/ad/tape.hpp"
#include "conformer_forge/geom.hpp"
#include "conformer_forge/nn/hierarchy.hpp"

namespace conformer_forge::nn {

/// Fills a tensor with U(-sqrt(1/fan_in), +sqrt(1/fan_in)).
void uniform_init(ad::Tensor& t, std::size_t fan_in, std::mt19937_64& rng);

/// y = x W (+ b). W is in x out.
class Dense {
 public:
  Dense() = default;
  Dense(const std::string& prefix, std::size_t in, std::size_t out, bool bias);

  void init(std::mt19937_64& rng);
  ad::Var forward(ad::Var x);
  std::vector<ad::Parameter*> parameters();

  std::size_t in() const { return W.value.rows(); }
  std::size_t out() const { return W.value.cols(); }

  ad::Parameter W;
  ad::Parameter b;  // empty when the layer has no bias
};

/// h_i = W_self f_i + mean over non-self edges (j -> i) of W_nb [f_j || e_ji].
/// Vertices without neighbours get only the self term. Returns the
/// pre-activation.
class EdgeConv {
 public:
  EdgeConv() = default;
  EdgeConv(const std::string& prefix, std::size_t in, std::size_t edge_dim, std::size_t out);

  void init(std::mt19937_64& rng);
  /// `edge_features` has one row per edge of `graph`, in the same order.
  ad::Var forward(ad::Var vertex_features, ad::Var edge_features, const EdgeList& graph);
  std::vector<ad::Parameter*> parameters();

  ad::Parameter W_self;
  ad::Parameter W_nb;
};

/// Multi-head graph attention. Head h scores edge (j -> i) as
/// LeakyReLU(a_dst[h] . (W x_i)_h + a_src[h] . (W x_j)_h), normalizes over the
/// incoming edges of i, and sums the weighted (W x_j)_h. Heads are
/// concatenated (width = heads * head_dim) or averaged (width = head_dim).
class GraphAttention {
 public:
  GraphAttention() = default;
  GraphAttention(const std::string& prefix, std::size_t in, std::size_t width, std::size_t heads,
                 bool average_heads, bool bias, double slope = 0.2);

  void init(std::mt19937_64& rng);
  /// Every vertex needs at least one incoming edge. When `attention` is given
  /// it receives the per-edge, per-head weights.
  ad::Var forward(ad::Var x, const EdgeList& graph, ad::Var* attention = nullptr);
  std::vector<ad::Parameter*> parameters();

  std::size_t heads() const { return heads_; }
  std::size_t head_dim() const { return head_dim_; }
  std::size_t out_width() const { return average_ ? head_dim_ : heads_ * head_dim_; }

  ad::Parameter W;      // in x (heads * head_dim)
  ad::Parameter a_src;  // heads x head_dim
  ad::Parameter a_dst;  // heads x head_dim
  ad::Parameter b;      // out_width, or empty

 private:
  std::size_t heads_ = 1;
  std::size_t head_dim_ = 1;
  bool average_ = false;
  double slope_ = 0.2;
};

/// Mean of the edge signals incident to each vertex (rows = edges, any
/// width). Throws std::invalid_argument for an isolated vertex.
ad::Tensor edge_init_vertex_signal(const ad::Tensor& edge_signal,
                                   std::span<const geom::Edge> edges, std::size_t vertex_count);

/// Mean over each of `items` equal blocks of consecutive rows.
ad::Var global_avg_pool(ad::Var x, std::size_t items);

}  // namespace conformer_forge::nn
