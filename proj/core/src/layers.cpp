// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "conformer_forge/nn/layers.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "conformer_forge/ad/ops.hpp"

namespace conformer_forge::nn {

void uniform_init(ad::Tensor& t, std::size_t fan_in, std::mt19937_64& rng) {
  const double bound = std::sqrt(1.0 / static_cast<double>(fan_in));
  // Explicit affine map of the raw 53-bit draw keeps values identical across
  // standard library implementations.
  for (double& v : t.values()) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    v = (2.0 * u - 1.0) * bound;
  }
}

Dense::Dense(const std::string& prefix, std::size_t in, std::size_t out, bool bias)
    : W(prefix + ".W", ad::Tensor::matrix(in, out)) {
  if (in == 0 || out == 0) throw std::invalid_argument("dense: widths must be positive");
  if (bias) b = ad::Parameter(prefix + ".b", ad::Tensor({out}, 0.0));
}

void Dense::init(std::mt19937_64& rng) {
  uniform_init(W.value, in(), rng);
  if (!b.value.empty()) b.value.fill(0.0);
}

ad::Var Dense::forward(ad::Var x) {
  ad::Tape& tape = x.tape();
  ad::Var y = ad::matmul(x, tape.parameter(W));
  if (!b.value.empty()) y = ad::add_row(y, tape.parameter(b));
  return y;
}

std::vector<ad::Parameter*> Dense::parameters() {
  std::vector<ad::Parameter*> out{&W};
  if (!b.value.empty()) out.push_back(&b);
  return out;
}

EdgeConv::EdgeConv(const std::string& prefix, std::size_t in, std::size_t edge_dim,
                   std::size_t out)
    : W_self(prefix + ".W_self", ad::Tensor::matrix(in, out)),
      W_nb(prefix + ".W_nb", ad::Tensor::matrix(in + edge_dim, out)) {
  if (in == 0 || out == 0) throw std::invalid_argument("edge_conv: widths must be positive");
}

void EdgeConv::init(std::mt19937_64& rng) {
  uniform_init(W_self.value, W_self.value.rows(), rng);
  uniform_init(W_nb.value, W_nb.value.rows(), rng);
}

ad::Var EdgeConv::forward(ad::Var f, ad::Var e, const EdgeList& graph) {
  if (f.rows() != graph.vertex_count) {
    throw std::invalid_argument("edge_conv: vertex rows do not match the graph");
  }
  if (e.rows() != graph.size()) {
    throw std::invalid_argument("edge_conv: need one edge feature row per edge");
  }
  ad::Tape& tape = f.tape();
  ad::Var self = ad::matmul(f, tape.parameter(W_self));

  std::vector<std::size_t> keep;
  std::vector<std::size_t> src;
  std::vector<std::size_t> dst;
  for (std::size_t k = 0; k < graph.size(); ++k) {
    if (graph.src[k] == graph.dst[k]) continue;
    keep.push_back(k);
    src.push_back(graph.src[k]);
    dst.push_back(graph.dst[k]);
  }
  if (keep.empty()) return self;
  ad::Var edge_rows = keep.size() == graph.size() ? e : ad::gather_rows(e, keep);
  ad::Var msg = ad::concat({ad::gather_rows(f, std::move(src)), edge_rows});
  ad::Var nb = ad::segment_mean(ad::matmul(msg, tape.parameter(W_nb)), std::move(dst),
                                graph.vertex_count);
  return ad::add(self, nb);
}

std::vector<ad::Parameter*> EdgeConv::parameters() { return {&W_self, &W_nb}; }

GraphAttention::GraphAttention(const std::string& prefix, std::size_t in, std::size_t width,
                               std::size_t heads, bool average_heads, bool bias, double slope)
    : heads_(heads), average_(average_heads), slope_(slope) {
  if (in == 0 || width == 0 || heads == 0) {
    throw std::invalid_argument("graph_attention: widths and head count must be positive");
  }
  if (average_heads) {
    head_dim_ = width;
  } else {
    if (width % heads != 0) {
      throw std::invalid_argument("graph_attention: width " + std::to_string(width) +
                                  " is not divisible by " + std::to_string(heads) + " heads");
    }
    head_dim_ = width / heads;
  }
  W = ad::Parameter(prefix + ".W", ad::Tensor::matrix(in, heads_ * head_dim_));
  a_src = ad::Parameter(prefix + ".a_src", ad::Tensor::matrix(heads_, head_dim_));
  a_dst = ad::Parameter(prefix + ".a_dst", ad::Tensor::matrix(heads_, head_dim_));
  if (bias) b = ad::Parameter(prefix + ".b", ad::Tensor({out_width()}, 0.0));
}

void GraphAttention::init(std::mt19937_64& rng) {
  uniform_init(W.value, W.value.rows(), rng);
  uniform_init(a_src.value, 2 * head_dim_, rng);
  uniform_init(a_dst.value, 2 * head_dim_, rng);
  if (!b.value.empty()) b.value.fill(0.0);
}

ad::Var GraphAttention::forward(ad::Var x, const EdgeList& graph, ad::Var* attention) {
  if (x.rows() != graph.vertex_count) {
    throw std::invalid_argument("graph_attention: vertex rows do not match the graph");
  }
  std::vector<bool> has_in(graph.vertex_count, false);
  for (std::size_t d : graph.dst) has_in[d] = true;
  for (std::size_t v = 0; v < graph.vertex_count; ++v) {
    if (!has_in[v]) {
      throw std::invalid_argument("graph_attention: vertex " + std::to_string(v) +
                                  " has no incoming edge");
    }
  }
  ad::Tape& tape = x.tape();
  ad::Var wx = ad::matmul(x, tape.parameter(W));
  ad::Var s_dst = ad::head_dot(wx, tape.parameter(a_dst));
  ad::Var s_src = ad::head_dot(wx, tape.parameter(a_src));
  ad::Var score = ad::leaky_relu(
      ad::add(ad::gather_rows(s_dst, graph.dst), ad::gather_rows(s_src, graph.src)), slope_);
  ad::Var alpha = ad::segment_softmax(score, graph.dst, graph.vertex_count);
  if (attention != nullptr) *attention = alpha;
  ad::Var y = ad::attention_aggregate(wx, alpha, graph.src, graph.dst, graph.vertex_count);
  if (average_) y = ad::head_mean(y, heads_);
  if (!b.value.empty()) y = ad::add_row(y, tape.parameter(b));
  return y;
}

std::vector<ad::Parameter*> GraphAttention::parameters() {
  std::vector<ad::Parameter*> out{&W, &a_src, &a_dst};
  if (!b.value.empty()) out.push_back(&b);
  return out;
}

ad::Tensor edge_init_vertex_signal(const ad::Tensor& edge_signal,
                                   std::span<const geom::Edge> edges, std::size_t vertex_count) {
  if (edge_signal.rows() != edges.size()) {
    throw std::invalid_argument("edge_init_vertex_signal: need one signal row per edge");
  }
  const std::size_t d = edge_signal.cols();
  ad::Tensor out = ad::Tensor::matrix(vertex_count, d);
  std::vector<std::size_t> degree(vertex_count, 0);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    for (std::size_t v : {edges[k].i, edges[k].j}) {
      if (v >= vertex_count) throw std::invalid_argument("edge_init_vertex_signal: bad vertex");
      ++degree[v];
      for (std::size_t c = 0; c < d; ++c) out[v * d + c] += edge_signal[k * d + c];
    }
  }
  for (std::size_t v = 0; v < vertex_count; ++v) {
    if (degree[v] == 0) {
      throw std::invalid_argument("edge_init_vertex_signal: vertex " + std::to_string(v) +
                                  " is isolated");
    }
    for (std::size_t c = 0; c < d; ++c) out[v * d + c] /= static_cast<double>(degree[v]);
  }
  return out;
}

ad::Var global_avg_pool(ad::Var x, std::size_t items) {
  if (items == 0 || x.rows() % items != 0) {
    throw std::invalid_argument("global_avg_pool: rows are not a whole number of items");
  }
  const std::size_t per = x.rows() / items;
  if (per == 0) throw std::invalid_argument("global_avg_pool: no vertices");
  std::vector<std::size_t> seg(x.rows());
  for (std::size_t r = 0; r < seg.size(); ++r) seg[r] = r / per;
  return ad::segment_mean(x, std::move(seg), items);
}

}  // namespace conformer_forge::nn
