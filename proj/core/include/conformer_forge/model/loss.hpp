// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "conformer_forge/ad/tape.hpp"
#include "conformer_forge/common.hpp"
#include "conformer_forge/model/progae.hpp"

namespace conformer_forge::model {

struct LossConfig {
  double delta = 2.0;        // Huber transition
  double bond_weight = 0.5;  // weight of the bond-length penalty
};

/// h(d) = d^2/2 for |d| <= delta, delta |d| - delta^2/2 otherwise.
double huber(double d, double delta);

/// Per-frame objective: Huber summed over all coordinates plus
/// bond_weight * mean over bonds of (|pred bond| - |true bond|)^2.
double frame_loss(std::span<const Vec3> pred, std::span<const Vec3> target,
                  const LossConfig& config = {});

/// Mean of frame_loss over `frames` stacked frames. `pred` is
/// (frames * n) x 3 and `target` holds the matching centered coordinates.
ad::Var batch_loss(ad::Var pred, const ad::Tensor& target, std::size_t frames,
                   const LossConfig& config = {});

/// Row-stacked coordinates of several frames, for use as a batch target.
ad::Tensor stack_coords(std::span<const Coords* const> frames);

struct Reconstruction {
  Coords predicted;                // centered frame coordinates
  Coords target;                   // the centered input
  std::vector<double> atom_error;  // per-atom L2 distance, unaligned
  double mean_error = 0.0;
  double rmsd = 0.0;               // after Kabsch superposition
  double loss = 0.0;
};

/// decode(encode(center(frame))) in eval mode, with metrics against the
/// centered input.
Reconstruction reconstruct(ProGAE& model, std::span<const Vec3> frame,
                           const LossConfig& config = {});

/// Metrics for an externally produced prediction.
Reconstruction score_prediction(Coords predicted, std::span<const Vec3> frame,
                                const LossConfig& config = {});

}  // namespace conformer_forge::model
