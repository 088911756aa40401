// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "conformer_forge/model/progae.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

#include "conformer_forge/ad/ops.hpp"
#include "conformer_forge/geom.hpp"

namespace conformer_forge::model {

namespace {

std::string layer_name(const char* stack, std::size_t layer, const char* part) {
  return std::string(stack) + ".layer" + std::to_string(layer) + "." + part;
}

ad::Tensor stack_rows(std::span<const FrameInputs* const> frames, ad::Tensor FrameInputs::*field) {
  std::size_t rows = 0;
  std::size_t cols = 0;
  for (const FrameInputs* f : frames) {
    const ad::Tensor& t = f->*field;
    rows += t.rows();
    if (!t.empty()) cols = t.cols();
  }
  ad::Tensor out = ad::Tensor::matrix(rows, cols);
  std::size_t offset = 0;
  for (const FrameInputs* f : frames) {
    const ad::Tensor& t = f->*field;
    std::copy(t.values().begin(), t.values().end(), out.data() + offset);
    offset += t.size();
  }
  return out;
}

}  // namespace

void ModelConfig::validate() const {
  if (levels < 1) throw std::invalid_argument("model: need at least one level");
  if (encoder_widths.size() != levels) {
    throw std::invalid_argument("model: expected " + std::to_string(levels) +
                                " encoder widths, got " + std::to_string(encoder_widths.size()));
  }
  if (decoder_widths.size() != levels + 1) {
    throw std::invalid_argument("model: expected " + std::to_string(levels + 1) +
                                " decoder widths, got " + std::to_string(decoder_widths.size()));
  }
  if (decoder_widths.back() != 3) throw std::invalid_argument("model: decoder must end at width 3");
  for (std::size_t w : encoder_widths) {
    if (w == 0) throw std::invalid_argument("model: zero encoder width");
  }
  for (std::size_t w : decoder_widths) {
    if (w == 0) throw std::invalid_argument("model: zero decoder width");
  }
  if (heads == 0) throw std::invalid_argument("model: need at least one attention head");
  for (std::size_t i = 1; i < levels; ++i) {
    if (encoder_widths[i] % heads != 0 || decoder_widths[i] % heads != 0) {
      throw std::invalid_argument("model: attention widths must be divisible by the head count");
    }
  }
  if (extrinsic_dim == 0 || (use_intrinsic && intrinsic_dim == 0)) {
    throw std::invalid_argument("model: latent dimensions must be positive");
  }
  if (!(contact_cutoff > 0.0)) throw std::invalid_argument("model: contact cutoff must be > 0");
  if (!(radius0 > 0.0)) throw std::invalid_argument("model: radius0 must be > 0");
  if (!(leaky_slope >= 0.0)) throw std::invalid_argument("model: leaky slope must be >= 0");
}

std::vector<double> LatentCode::concat() const {
  std::vector<double> z = intrinsic;
  z.insert(z.end(), extrinsic.begin(), extrinsic.end());
  return z;
}

FrameInputs prepare_frame(const ModelConfig& config, std::span<const Vec3> coords) {
  const std::size_t n = coords.size();
  FrameInputs in;
  in.target = geom::center(coords);

  const geom::BackboneGraph backbone = geom::build_backbone_graph(n);
  const std::vector<Vec3> bonds = geom::extrinsic_signal(backbone, coords);
  ad::Tensor bond_rows = ad::Tensor::matrix(bonds.size(), 3);
  for (std::size_t k = 0; k < bonds.size(); ++k) {
    for (int c = 0; c < 3; ++c) bond_rows[3 * k + c] = bonds[k][c];
  }
  in.ext_vertex = nn::edge_init_vertex_signal(bond_rows, backbone.edges, n);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const geom::Edge& e : backbone.edges) pairs.emplace_back(e.i, e.j);
  const nn::EdgeList directed = nn::symmetric_edges(n, pairs, false);
  in.ext_edge = ad::Tensor::matrix(directed.size(), 3);
  for (std::size_t e = 0; e < directed.size(); ++e) {
    const std::size_t bond = std::min(directed.src[e], directed.dst[e]);
    for (int c = 0; c < 3; ++c) in.ext_edge[3 * e + c] = bonds[bond][c];
  }

  if (!config.use_intrinsic) return in;

  const geom::ContactGraph contacts =
      geom::build_contact_graph(coords, config.contact_cutoff, config.min_separation);
  std::vector<std::size_t> local(n, n);
  for (const geom::Edge& e : contacts.edges) {
    local[e.i] = 0;
    local[e.j] = 0;
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (local[v] == 0) {
      local[v] = in.active.size();
      in.active.push_back(v);
    }
  }
  const std::size_t m = in.active.size();
  std::vector<geom::Edge> local_edges;
  std::vector<std::pair<std::size_t, std::size_t>> local_pairs;
  for (const geom::Edge& e : contacts.edges) {
    local_edges.push_back({local[e.i], local[e.j]});
    local_pairs.emplace_back(local[e.i], local[e.j]);
  }
  const std::vector<double> lengths = geom::intrinsic_signal(contacts, coords);
  ad::Tensor length_rows({lengths.size(), 1}, lengths);
  in.int_vertex = m > 0 ? nn::edge_init_vertex_signal(length_rows, local_edges, m)
                        : ad::Tensor::matrix(0, 1);
  in.contact_edges = nn::symmetric_edges(m, local_pairs, false);
  in.contact_graph = nn::symmetric_edges(m, local_pairs, true);
  in.int_edge = ad::Tensor::matrix(in.contact_edges.size(), 1);
  for (std::size_t e = 0; e < in.contact_edges.size(); ++e) {
    const Vec3& a = coords[in.active[in.contact_edges.src[e]]];
    const Vec3& b = coords[in.active[in.contact_edges.dst[e]]];
    in.int_edge[e] = (a - b).norm();
  }
  return in;
}

ProGAE::ProGAE(const ModelConfig& config, std::span<const Vec3> reference, std::uint64_t seed,
               bool center_reference)
    : config_(config) {
  config_.validate();
  const std::size_t need = std::size_t{1} << (config_.levels - 1);
  if (reference.size() < std::max<std::size_t>(need, 16)) {
    throw std::invalid_argument("model: chain of " + std::to_string(reference.size()) +
                                " atoms is too short (needs at least " +
                                std::to_string(std::max<std::size_t>(need, 16)) + ")");
  }
  reference_ = center_reference ? geom::center(reference) : Coords(reference.begin(), reference.end());
  hierarchy_ = nn::build_hierarchy(reference_, config_.levels, config_.radius0,
                                   config_.chain_links);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i + 1 < reference_.size(); ++i) pairs.emplace_back(i, i + 1);
  backbone_ = nn::symmetric_edges(reference_.size(), pairs, false);

  double ss = 0.0;
  for (const Vec3& p : reference_) ss += p.squaredNorm();
  output_scale_ = std::sqrt(ss / static_cast<double>(reference_.size()));
  if (!(output_scale_ > 0.0)) throw std::invalid_argument("model: degenerate reference frame");

  build_layers();
  std::mt19937_64 rng(seed);
  ext_conv.init(rng);
  for (auto& g : ext_gat) g.init(rng);
  ext_latent.init(rng);
  if (config_.use_intrinsic) {
    int_conv.init(rng);
    for (auto& g : int_gat) g.init(rng);
    int_latent.init(rng);
  }
  dec_dense.init(rng);
  for (auto& g : dec_gat) g.init(rng);
  dec_out.init(rng);
}

void ProGAE::build_layers() {
  const auto& ew = config_.encoder_widths;
  const auto& dw = config_.decoder_widths;
  const std::size_t heads = config_.heads;
  const double slope = config_.leaky_slope;

  ext_conv = nn::EdgeConv("enc_e.layer1.edge_conv", 3, 3, ew[0]);
  ext_conv_bn = ad::BatchNorm("enc_e.layer1.bn", ew[0]);
  ext_gat.clear();
  ext_bn.clear();
  for (std::size_t l = 1; l < ew.size(); ++l) {
    ext_gat.emplace_back(layer_name("enc_e", l + 1, "attn"), ew[l - 1], ew[l], heads, false, false,
                         slope);
    ext_bn.emplace_back(layer_name("enc_e", l + 1, "bn"), ew[l]);
  }
  ext_latent = nn::Dense("enc_e.latent", ew.back(), config_.extrinsic_dim, true);

  int_gat.clear();
  int_bn.clear();
  if (config_.use_intrinsic) {
    int_conv = nn::EdgeConv("enc_i.layer1.edge_conv", 1, 1, ew[0]);
    int_conv_bn = ad::BatchNorm("enc_i.layer1.bn", ew[0]);
    for (std::size_t l = 1; l < ew.size(); ++l) {
      int_gat.emplace_back(layer_name("enc_i", l + 1, "attn"), ew[l - 1], ew[l], heads, false,
                           false, slope);
      int_bn.emplace_back(layer_name("enc_i", l + 1, "bn"), ew[l]);
    }
    int_latent = nn::Dense("enc_i.latent", ew.back(), config_.intrinsic_dim, true);
  }

  const std::size_t coarse = hierarchy_.levels.back().vertices.size();
  dec_dense = nn::Dense("dec.dense", latent_dim(), coarse * dw[0], false);
  dec_dense_bn = ad::BatchNorm("dec.dense.bn", dw[0]);
  dec_gat.clear();
  dec_bn.clear();
  for (std::size_t l = 1; l + 1 < dw.size(); ++l) {
    dec_gat.emplace_back(layer_name("dec", l, "attn"), dw[l - 1], dw[l], heads, false, false,
                         slope);
    dec_bn.emplace_back(layer_name("dec", l, "bn"), dw[l]);
  }
  dec_out = nn::GraphAttention("dec.out.attn", dw[dw.size() - 2], dw.back(), heads, true, true,
                               slope);
}

std::vector<ad::Parameter*> ProGAE::parameters() {
  std::vector<ad::Parameter*> out;
  auto append = [&out](std::vector<ad::Parameter*> ps) { out.insert(out.end(), ps.begin(), ps.end()); };
  auto bn = [&out](ad::BatchNorm& b) {
    out.push_back(&b.gamma);
    out.push_back(&b.beta);
  };
  append(ext_conv.parameters());
  bn(ext_conv_bn);
  for (std::size_t i = 0; i < ext_gat.size(); ++i) {
    append(ext_gat[i].parameters());
    bn(ext_bn[i]);
  }
  append(ext_latent.parameters());
  if (config_.use_intrinsic) {
    append(int_conv.parameters());
    bn(int_conv_bn);
    for (std::size_t i = 0; i < int_gat.size(); ++i) {
      append(int_gat[i].parameters());
      bn(int_bn[i]);
    }
    append(int_latent.parameters());
  }
  append(dec_dense.parameters());
  bn(dec_dense_bn);
  for (std::size_t i = 0; i < dec_gat.size(); ++i) {
    append(dec_gat[i].parameters());
    bn(dec_bn[i]);
  }
  append(dec_out.parameters());
  return out;
}

std::vector<const ad::Parameter*> ProGAE::parameters() const {
  auto ps = const_cast<ProGAE*>(this)->parameters();
  return {ps.begin(), ps.end()};
}

std::vector<NamedBuffer> ProGAE::buffers() {
  std::vector<NamedBuffer> out;
  auto add = [&out](ad::BatchNorm& b) {
    const std::string prefix = b.gamma.name.substr(0, b.gamma.name.size() - 6);  // strip ".gamma"
    out.push_back({prefix + ".running_mean", &b.running_mean});
    out.push_back({prefix + ".running_var", &b.running_var});
  };
  add(ext_conv_bn);
  for (auto& b : ext_bn) add(b);
  if (config_.use_intrinsic) {
    add(int_conv_bn);
    for (auto& b : int_bn) add(b);
  }
  add(dec_dense_bn);
  for (auto& b : dec_bn) add(b);
  return out;
}

std::size_t ProGAE::parameter_count() const {
  std::size_t total = 0;
  for (const ad::Parameter* p : parameters()) total += p->value.size();
  return total;
}

ad::Var ProGAE::encode_extrinsic(ad::Tape& tape, std::span<const FrameInputs* const> frames,
                                 ad::Mode mode) {
  const std::size_t batch = frames.size();
  ad::Var f0 = tape.constant(stack_rows(frames, &FrameInputs::ext_vertex));
  ad::Var e0 = tape.constant(stack_rows(frames, &FrameInputs::ext_edge));
  ad::Var x = ext_conv.forward(f0, e0, nn::replicate(backbone_, batch));
  x = ad::relu(ext_conv_bn.forward(x, mode));
  for (std::size_t l = 0; l < ext_gat.size(); ++l) {
    x = nn::downsample_signal(x, hierarchy_, l, batch);
    x = ext_gat[l].forward(x, nn::replicate(hierarchy_.levels[l + 1].graph, batch));
    x = ad::relu(ext_bn[l].forward(x, mode));
  }
  return ad::tanh(ext_latent.forward(nn::global_avg_pool(x, batch)));
}

ad::Var ProGAE::encode_intrinsic(ad::Tape& tape, std::span<const FrameInputs* const> frames,
                                 ad::Mode mode) {
  const std::size_t batch = frames.size();
  nn::EdgeList conv_edges;
  nn::EdgeList gat_edges;
  std::vector<std::size_t> owner;
  for (std::size_t b = 0; b < batch; ++b) {
    const FrameInputs& f = *frames[b];
    const std::size_t offset = owner.size();
    for (std::size_t e = 0; e < f.contact_edges.size(); ++e) {
      conv_edges.src.push_back(f.contact_edges.src[e] + offset);
      conv_edges.dst.push_back(f.contact_edges.dst[e] + offset);
    }
    for (std::size_t e = 0; e < f.contact_graph.size(); ++e) {
      gat_edges.src.push_back(f.contact_graph.src[e] + offset);
      gat_edges.dst.push_back(f.contact_graph.dst[e] + offset);
    }
    owner.insert(owner.end(), f.active.size(), b);
  }
  conv_edges.vertex_count = owner.size();
  gat_edges.vertex_count = owner.size();

  ad::Var pooled;
  if (owner.size() < 2) {
    // No contacts anywhere in the batch: the pooled feature is zero.
    pooled = tape.constant(ad::Tensor::matrix(batch, config_.encoder_widths.back()));
  } else {
    ad::Var f0 = tape.constant(stack_rows(frames, &FrameInputs::int_vertex));
    ad::Var e0 = tape.constant(stack_rows(frames, &FrameInputs::int_edge));
    ad::Var x = int_conv.forward(f0, e0, conv_edges);
    x = ad::relu(int_conv_bn.forward(x, mode));
    for (std::size_t l = 0; l < int_gat.size(); ++l) {
      x = int_gat[l].forward(x, gat_edges);
      x = ad::relu(int_bn[l].forward(x, mode));
    }
    pooled = ad::segment_mean(x, std::move(owner), batch);
  }
  return ad::tanh(int_latent.forward(pooled));
}

ProGAE::Encoded ProGAE::encode(ad::Tape& tape, std::span<const FrameInputs* const> frames,
                               ad::Mode mode) {
  if (frames.empty()) throw std::invalid_argument("encode: empty batch");
  for (const FrameInputs* f : frames) {
    if (f->ext_vertex.rows() != atom_count()) {
      throw std::invalid_argument("encode: frame has " + std::to_string(f->ext_vertex.rows()) +
                                  " atoms, model expects " + std::to_string(atom_count()));
    }
    if (config_.use_intrinsic && f->int_vertex.empty() && !f->active.empty()) {
      throw std::invalid_argument("encode: frame inputs lack the intrinsic signal");
    }
  }
  Encoded out;
  out.extrinsic = encode_extrinsic(tape, frames, mode);
  if (config_.use_intrinsic) {
    out.intrinsic = encode_intrinsic(tape, frames, mode);
    out.z = ad::concat({out.intrinsic, out.extrinsic});
  } else {
    out.z = out.extrinsic;
  }
  return out;
}

ad::Var ProGAE::decode(ad::Tape& tape, ad::Var z, ad::Mode mode) {
  (void)tape;
  if (z.cols() != latent_dim()) {
    throw std::invalid_argument("decode: expected latent width " + std::to_string(latent_dim()) +
                                ", got " + z.value().shape_string());
  }
  const std::size_t batch = z.rows();
  const std::size_t coarse = hierarchy_.levels.back().vertices.size();
  const std::size_t width = config_.decoder_widths[0];
  ad::Var x = ad::reshape(dec_dense.forward(z), {batch * coarse, width});
  x = ad::relu(dec_dense_bn.forward(x, mode));
  for (std::size_t i = 0; i < dec_gat.size(); ++i) {
    const std::size_t level = hierarchy_.depth() - 2 - i;
    x = nn::upsample_signal(x, hierarchy_, level, batch);
    x = dec_gat[i].forward(x, nn::replicate(hierarchy_.levels[level].graph, batch));
    x = ad::relu(dec_bn[i].forward(x, mode));
  }
  x = dec_out.forward(x, nn::replicate(hierarchy_.levels[0].graph, batch));
  // The network predicts the displacement from the centered reference.
  const std::size_t n = reference_.size();
  ad::Tensor base = ad::Tensor::matrix(batch * n, 3);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t i = 0; i < n; ++i) {
      for (int c = 0; c < 3; ++c) base.at(b * n + i, static_cast<std::size_t>(c)) = reference_[i][c];
    }
  }
  return ad::add(ad::scale(x, output_scale_), tape.constant(std::move(base)));
}

LatentCode ProGAE::encode_frame(std::span<const Vec3> coords) {
  const FrameInputs in = prepare_frame(config_, coords);
  const FrameInputs* ptr = &in;
  ad::Tape tape;
  Encoded e = encode(tape, std::span<const FrameInputs* const>(&ptr, 1), ad::Mode::kEval);
  LatentCode code;
  const auto& ev = e.extrinsic.value().values();
  code.extrinsic.assign(ev.begin(), ev.end());
  if (e.intrinsic.valid()) {
    const auto& iv = e.intrinsic.value().values();
    code.intrinsic.assign(iv.begin(), iv.end());
  }
  return code;
}

Coords ProGAE::decode_latent(std::span<const double> z) {
  if (z.size() != latent_dim()) {
    throw std::invalid_argument("decode_latent: expected " + std::to_string(latent_dim()) +
                                " values, got " + std::to_string(z.size()));
  }
  ad::Tape tape;
  ad::Var zv = tape.constant(ad::Tensor({1, z.size()}, std::vector<double>(z.begin(), z.end())));
  const ad::Tensor& out = decode(tape, zv, ad::Mode::kEval).value();
  Coords coords(atom_count());
  for (std::size_t i = 0; i < coords.size(); ++i) {
    coords[i] = Vec3(out[3 * i], out[3 * i + 1], out[3 * i + 2]);
  }
  return coords;
}

void ProGAE::reinit_decoder_dense(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  dec_dense.init(rng);
}

}  // namespace conformer_forge::model
