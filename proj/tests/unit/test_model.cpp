// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "conformer_forge/ad/grad_check.hpp"
#include "conformer_forge/model/checkpoint.hpp"
#include "conformer_forge/model/loss.hpp"
#include "conformer_forge/model/progae.hpp"
#include "test_util.hpp"

namespace conformer_forge::model {
namespace {

using conformer_forge::testing::random_chain;
using conformer_forge::testing::random_motion;
using conformer_forge::testing::ScratchDir;

// Reference chain dense enough to have contacts everywhere.
Coords compact_chain(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_chain(n, rng, 3.0);
}

// Closed-form count from the layer widths.
std::size_t expected_parameter_count(const ModelConfig& c, std::size_t coarse) {
  const auto& ew = c.encoder_widths;
  const auto& dw = c.decoder_widths;
  auto gat = [](std::size_t in, std::size_t width) { return in * width + 2 * width; };
  std::size_t ext = 3 * ew[0] + 6 * ew[0] + 2 * ew[0];
  for (std::size_t l = 1; l < ew.size(); ++l) ext += gat(ew[l - 1], ew[l]) + 2 * ew[l];
  ext += ew.back() * c.extrinsic_dim + c.extrinsic_dim;
  std::size_t in = 0;
  if (c.use_intrinsic) {
    in = ew[0] + 2 * ew[0] + 2 * ew[0];
    for (std::size_t l = 1; l < ew.size(); ++l) in += gat(ew[l - 1], ew[l]) + 2 * ew[l];
    in += ew.back() * c.intrinsic_dim + c.intrinsic_dim;
  }
  std::size_t dec = c.latent_dim() * coarse * dw[0] + 2 * dw[0];
  for (std::size_t l = 1; l + 1 < dw.size(); ++l) dec += gat(dw[l - 1], dw[l]) + 2 * dw[l];
  const std::size_t last_in = dw[dw.size() - 2];
  dec += last_in * c.heads * dw.back() + 2 * c.heads * dw.back() + dw.back();
  return ext + in + dec;
}

TEST(Loss, HuberBranches) {
  EXPECT_DOUBLE_EQ(huber(2.0, 2.0), 2.0);
  EXPECT_DOUBLE_EQ(huber(5.0, 2.0), 8.0);
  EXPECT_DOUBLE_EQ(huber(-5.0, 2.0), 8.0);
  EXPECT_DOUBLE_EQ(huber(1.0, 2.0), 0.5);
  EXPECT_DOUBLE_EQ(huber(0.0, 2.0), 0.0);
}

TEST(Loss, FrameLossPieces) {
  const Coords t{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0)};
  EXPECT_EQ(frame_loss(t, t), 0.0);
  Coords p = t;
  p[2].y() = 5.0;  // one residual of 5; bond 1-2 stretches from 1 to sqrt(26)
  const double bond = std::sqrt(26.0) - 1.0;
  EXPECT_NEAR(frame_loss(p, t), 8.0 + 0.5 * (bond * bond) / 2.0, 1e-12);
}

TEST(Loss, BatchLossMatchesFrameLoss) {
  std::mt19937_64 rng(3);
  const Coords a = random_chain(10, rng);
  const Coords b = random_chain(10, rng);
  const Coords pa = random_chain(10, rng);
  const Coords pb = random_chain(10, rng);
  const Coords* targets[] = {&a, &b};
  const Coords* preds[] = {&pa, &pb};
  ad::Tape tape;
  ad::Var pred = tape.constant(stack_coords(preds));
  const double v = batch_loss(pred, stack_coords(targets), 2).value()[0];
  EXPECT_NEAR(v, 0.5 * (frame_loss(pa, a) + frame_loss(pb, b)), 1e-10);

  const auto r = ad::grad_check(
      [&](ad::Tape&, const std::vector<ad::Var>& in) {
        return batch_loss(in[0], stack_coords(targets), 2);
      },
      {stack_coords(preds)});
  EXPECT_LT(r.max_rel_error, 1e-6);
}

TEST(Model, InitIsDeterministicAndCountMatchesWidths) {
  const Coords ref = compact_chain(40, 1);
  ModelConfig cfg;
  ProGAE a(cfg, ref, 5);
  ProGAE b(cfg, ref, 5);
  EXPECT_EQ(parameter_hash(a), parameter_hash(b));
  ProGAE c(cfg, ref, 6);
  EXPECT_NE(parameter_hash(a), parameter_hash(c));

  const std::size_t coarse = a.hierarchy().levels.back().vertices.size();
  EXPECT_EQ(coarse, 3u);
  EXPECT_EQ(a.parameter_count(), expected_parameter_count(cfg, coarse));
  cfg.use_intrinsic = false;
  ProGAE d(cfg, ref, 5);
  EXPECT_EQ(d.parameter_count(), expected_parameter_count(cfg, coarse));
  EXPECT_EQ(d.latent_dim(), 32u);
}

TEST(Model, InitialBiasesAreZeroAndWeightsBounded) {
  ProGAE m(ModelConfig{}, compact_chain(32, 2), 1);
  for (const ad::Parameter* p : m.parameters()) {
    const bool bias = p->name.ends_with(".b") || p->name.ends_with(".beta");
    const bool gamma = p->name.ends_with(".gamma");
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      if (bias) EXPECT_EQ(p->value[i], 0.0) << p->name;
      if (gamma) EXPECT_EQ(p->value[i], 1.0) << p->name;
      EXPECT_LE(std::abs(p->value[i]), 1.0) << p->name;
    }
  }
}

TEST(Model, ShortChainIsRejected) {
  EXPECT_THROW(ProGAE(ModelConfig{}, compact_chain(15, 3), 1), std::invalid_argument);
}

TEST(Model, LatentCodesAreBoundedAndTranslationInvariant) {
  const Coords ref = compact_chain(32, 4);
  ProGAE m(ModelConfig{}, ref, 2);
  std::mt19937_64 rng(9);
  const Coords frame = compact_chain(32, 5);
  const LatentCode z = m.encode_frame(frame);
  ASSERT_EQ(z.intrinsic.size(), 16u);
  ASSERT_EQ(z.extrinsic.size(), 32u);
  for (double v : z.concat()) {
    EXPECT_GT(v, -1.0);
    EXPECT_LT(v, 1.0);
  }
  Coords shifted = frame;
  for (auto& p : shifted) p += Vec3(13.5, -7.25, 40.0);
  const LatentCode zs = m.encode_frame(shifted);
  for (std::size_t i = 0; i < 16; ++i) EXPECT_NEAR(zs.intrinsic[i], z.intrinsic[i], 1e-9);
  for (std::size_t i = 0; i < 32; ++i) EXPECT_NEAR(zs.extrinsic[i], z.extrinsic[i], 1e-9);

  const geom::RigidTransform t = random_motion(rng);
  const LatentCode zr = m.encode_frame(t.apply(frame));
  double ext_change = 0.0;
  for (std::size_t i = 0; i < 16; ++i) EXPECT_NEAR(zr.intrinsic[i], z.intrinsic[i], 1e-9);
  for (std::size_t i = 0; i < 32; ++i) ext_change += std::abs(zr.extrinsic[i] - z.extrinsic[i]);
  EXPECT_GT(ext_change, 1e-6);
}

TEST(Model, ExtrinsicOnlyIgnoresTheIntrinsicBranch) {
  ModelConfig cfg;
  cfg.use_intrinsic = false;
  ProGAE m(cfg, compact_chain(24, 6), 3);
  const LatentCode z = m.encode_frame(compact_chain(24, 7));
  EXPECT_TRUE(z.intrinsic.empty());
  EXPECT_EQ(z.concat().size(), 32u);
  for (const ad::Parameter* p : m.parameters()) EXPECT_FALSE(p->name.starts_with("enc_i")) << p->name;
}

TEST(Model, LengthMismatchIsRejected) {
  ProGAE m(ModelConfig{}, compact_chain(24, 8), 3);
  EXPECT_THROW(m.encode_frame(compact_chain(25, 8)), std::invalid_argument);
  EXPECT_THROW(m.decode_latent(std::vector<double>(47, 0.0)), std::invalid_argument);
}

TEST(Model, DecodeIsDeterministicAndContinuous) {
  ProGAE m(ModelConfig{}, compact_chain(24, 9), 4);
  std::vector<double> z(48);
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  for (auto& v : z) v = u(rng);
  const Coords a = m.decode_latent(z);
  const Coords b = m.decode_latent(z);
  ASSERT_EQ(a.size(), 24u);
  EXPECT_EQ(a, b);

  // A 1e-6 nudge moves the output by a bounded multiple of the nudge.
  std::vector<double> z2 = z;
  for (auto& v : z2) v += 1e-6;
  const Coords c = m.decode_latent(z2);
  double moved = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) moved = std::max(moved, (c[i] - a[i]).norm());
  EXPECT_GT(moved, 0.0);
  EXPECT_LT(moved / 1e-6, 1e4);
}

TEST(Model, ReconstructionMetricsAreConsistent) {
  ProGAE m(ModelConfig{}, compact_chain(24, 11), 5);
  const Coords frame = compact_chain(24, 12);
  const Reconstruction r = reconstruct(m, frame);
  double ms = 0.0;
  for (double e : r.atom_error) {
    EXPECT_GE(e, 0.0);
    ms += e * e;
  }
  EXPECT_LE(r.rmsd, std::sqrt(ms / 24.0) + 1e-12);
  EXPECT_NEAR(r.loss, frame_loss(r.predicted, r.target), 1e-12);
  EXPECT_LT(geom::centroid(r.target).norm(), 1e-9);
}

// Reference plus isotropic Gaussian jitter.
Coords jittered(const Coords& ref, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, sigma);
  Coords out = ref;
  for (auto& p : out) p += Vec3(g(rng), g(rng), g(rng));
  return out;
}

// Every parameter of the full model against central differences with
// h = 1e-5, on four jittered copies of a 16-atom chain in train mode (batch
// statistics in every BatchNorm).
TEST(Model, EndToEndGradientCheck) {
  const auto start = std::chrono::steady_clock::now();
  const Coords ref = compact_chain(16, 13);
  ProGAE m(ModelConfig{}, ref, 7);
  std::vector<FrameInputs> inputs;
  for (std::uint64_t s = 0; s < 4; ++s) inputs.push_back(prepare_frame(m.config(), jittered(ref, 0.5, 20 + s)));
  std::vector<const FrameInputs*> frames;
  std::vector<const Coords*> targets;
  for (const auto& f : inputs) {
    frames.push_back(&f);
    targets.push_back(&f.target);
  }
  const ad::Tensor target = stack_coords(targets);
  ad::GradCheckOptions opts;
  opts.max_per_tensor = 24;
  const auto r = ad::grad_check_params(
      [&](ad::Tape& tape) {
        ProGAE::Encoded e = m.encode(tape, frames, ad::Mode::kTrain);
        return batch_loss(m.decode(tape, e.z, ad::Mode::kTrain), target, frames.size());
      },
      m.parameters(), opts);
  EXPECT_LT(r.max_rel_error, 1e-4) << m.parameters()[r.worst_input]->name << "[" << r.worst_index
                                   << "] " << r.worst_analytic << " vs " << r.worst_numeric;
  EXPECT_GT(r.checked, 500u);
  EXPECT_LT(r.skipped, r.checked / 20);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(seconds, 60.0);
}

TEST(Checkpoint, RoundTripIsBitExact) {
  ScratchDir dir;
  const Coords ref = compact_chain(20, 16);
  ProGAE m(ModelConfig{}, ref, 8);
  m.dec_bn[0].running_mean.fill(0.375);
  save_checkpoint(m, dir.path());
  ProGAE back = load_checkpoint(dir.path());
  EXPECT_EQ(parameter_hash(back), parameter_hash(m));
  const auto pa = m.parameters();
  const auto pb = back.parameters();
  ASSERT_EQ(pa.size(), pb.size());
  for (std::size_t k = 0; k < pa.size(); ++k) {
    EXPECT_EQ(pa[k]->name, pb[k]->name);
    for (std::size_t i = 0; i < pa[k]->value.size(); ++i) {
      EXPECT_EQ(std::bit_cast<std::uint64_t>(pa[k]->value[i]),
                std::bit_cast<std::uint64_t>(pb[k]->value[i]));
    }
  }
  EXPECT_EQ(back.dec_bn[0].running_mean[0], 0.375);
  EXPECT_EQ(back.output_scale(), m.output_scale());
  const Coords frame = compact_chain(20, 17);
  EXPECT_EQ(reconstruct(back, frame).predicted, reconstruct(m, frame).predicted);
}

TEST(Checkpoint, CorruptionIsDetected) {
  ScratchDir dir;
  ProGAE m(ModelConfig{}, compact_chain(20, 18), 9);
  save_checkpoint(m, dir.path());
  const auto payload = dir / kPayloadFile;
  std::filesystem::resize_file(payload, std::filesystem::file_size(payload) - 8);
  EXPECT_THROW(load_checkpoint(dir.path()), DataError);
  std::filesystem::remove(payload);
  EXPECT_THROW(load_checkpoint(dir.path()), DataError);
  {
    std::ofstream bad(dir / kManifestFile);
    bad << "{not json";
  }
  EXPECT_THROW(load_checkpoint(dir.path()), DataError);
}

}  // namespace
}  // namespace conformer_forge::model
