// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "conformer_forge/ad/batchnorm.hpp"
#include "conformer_forge/ad/tape.hpp"
#include "conformer_forge/common.hpp"
#include "conformer_forge/nn/hierarchy.hpp"
#include "conformer_forge/nn/layers.hpp"

namespace conformer_forge::model {

struct ModelConfig {
  std::vector<std::size_t> encoder_widths{12, 24, 48, 96, 96};
  std::vector<std::size_t> decoder_widths{128, 128, 64, 32, 16, 3};
  std::size_t intrinsic_dim = 16;
  std::size_t extrinsic_dim = 32;
  std::size_t heads = 4;
  double contact_cutoff = 8.0;
  std::size_t min_separation = 4;
  double radius0 = 2.5;
  std::size_t levels = 5;
  bool use_intrinsic = true;
  double leaky_slope = 0.2;
  bool chain_links = true;

  /// Throws std::invalid_argument on inconsistent widths or ranges.
  void validate() const;
  std::size_t latent_dim() const { return (use_intrinsic ? intrinsic_dim : 0) + extrinsic_dim; }
};

/// Parameter-independent encoder inputs derived from one conformation.
struct FrameInputs {
  ad::Tensor ext_vertex;  // n x 3, f0 over backbone bonds
  ad::Tensor ext_edge;    // one bond direction per directed backbone edge
  std::vector<std::size_t> active;  // chain indices with at least one contact
  nn::EdgeList contact_edges;       // over `active`, both directions, no self-loops
  nn::EdgeList contact_graph;       // contact_edges plus self-loops
  ad::Tensor int_vertex;            // |active| x 1, f0 over contact lengths
  ad::Tensor int_edge;              // contact length per directed contact edge
  Coords target;                    // centered coordinates
};

FrameInputs prepare_frame(const ModelConfig& config, std::span<const Vec3> coords);

/// Latent code split into its intrinsic and extrinsic parts.
struct LatentCode {
  std::vector<double> intrinsic;
  std::vector<double> extrinsic;

  std::vector<double> concat() const;
};

struct NamedBuffer {
  std::string name;
  ad::Tensor* tensor;
};

/// Intrinsic/extrinsic graph autoencoder over a fixed-length chain.
class ProGAE {
 public:
  ProGAE() = default;
  /// Builds the hierarchy from `reference` (centered first unless
  /// `center_reference` is false) and draws every parameter from
  /// std::mt19937_64(seed).
  ProGAE(const ModelConfig& config, std::span<const Vec3> reference, std::uint64_t seed,
         bool center_reference = true);

  const ModelConfig& config() const { return config_; }
  const nn::GraphHierarchy& hierarchy() const { return hierarchy_; }
  const Coords& reference() const { return reference_; }
  /// Decoder outputs are multiplied by this fixed length (the RMS radius of
  /// the centered reference), so the network works in unit-scale targets.
  double output_scale() const { return output_scale_; }
  std::size_t atom_count() const { return reference_.size(); }
  std::size_t latent_dim() const { return config_.latent_dim(); }

  /// Fixed traversal order; also the initialization order.
  std::vector<ad::Parameter*> parameters();
  std::vector<const ad::Parameter*> parameters() const;
  /// BatchNorm running statistics.
  std::vector<NamedBuffer> buffers();
  std::size_t parameter_count() const;

  struct Encoded {
    ad::Var intrinsic;  // B x intrinsic_dim; invalid when use_intrinsic is false
    ad::Var extrinsic;  // B x extrinsic_dim
    ad::Var z;          // B x latent_dim, [intrinsic, extrinsic]
  };

  Encoded encode(ad::Tape& tape, std::span<const FrameInputs* const> frames, ad::Mode mode);
  /// B x latent_dim -> (B * n) x 3 centered coordinates: the centered
  /// reference plus output_scale() times the last layer's output.
  ad::Var decode(ad::Tape& tape, ad::Var z, ad::Mode mode);

  /// Eval-mode helpers that manage their own tape.
  LatentCode encode_frame(std::span<const Vec3> coords);
  Coords decode_latent(std::span<const double> z);

  /// Re-draws only the latent-to-decoder dense layer.
  void reinit_decoder_dense(std::uint64_t seed);

  nn::EdgeConv ext_conv;
  ad::BatchNorm ext_conv_bn;
  std::vector<nn::GraphAttention> ext_gat;
  std::vector<ad::BatchNorm> ext_bn;
  nn::Dense ext_latent;

  nn::EdgeConv int_conv;
  ad::BatchNorm int_conv_bn;
  std::vector<nn::GraphAttention> int_gat;
  std::vector<ad::BatchNorm> int_bn;
  nn::Dense int_latent;

  nn::Dense dec_dense;
  ad::BatchNorm dec_dense_bn;
  std::vector<nn::GraphAttention> dec_gat;
  std::vector<ad::BatchNorm> dec_bn;
  nn::GraphAttention dec_out;

 private:
  void build_layers();
  ad::Var encode_extrinsic(ad::Tape& tape, std::span<const FrameInputs* const> frames,
                           ad::Mode mode);
  ad::Var encode_intrinsic(ad::Tape& tape, std::span<const FrameInputs* const> frames,
                           ad::Mode mode);

  ModelConfig config_;
  Coords reference_;
  nn::GraphHierarchy hierarchy_;
  nn::EdgeList backbone_;  // level-0 bonds, both directions
  double output_scale_ = 1.0;
};

}  // namespace conformer_forge::model
