// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

#include "conformer_forge/model/loss.hpp"
#include "conformer_forge/model/progae.hpp"
#include "conformer_forge/trajdata.hpp"

namespace conformer_forge::train {

struct EvalReport {
  std::size_t frames = 0;
  double loss = 0.0;              // mean per-frame objective
  double avg_l2 = 0.0;            // mean per-atom L2 error (Angstrom)
  double contact_recovery = 0.0;  // mean contact Jaccard at 8 Angstrom
  double rmsd = 0.0;              // mean Kabsch RMSD (Angstrom)
};

/// Maps a raw frame to predicted centered coordinates.
using Predictor = std::function<Coords(const Coords& frame)>;

/// Worker count from CONFORMER_FORGE_THREADS (default and minimum 1).
std::size_t evaluation_threads();

/// Scores `predict` on every frame of a split. Frames are spread over
/// `threads` workers (0 = evaluation_threads()); results are reduced in
/// frame order, so the report does not depend on the worker count.
/// Throws std::invalid_argument on an empty split.
EvalReport evaluate_predictions(const Predictor& predict,
                                const trajdata::TrajectoryDataset& dataset, trajdata::Split split,
                                const model::LossConfig& loss = {}, std::size_t threads = 0);

/// Eval-mode reconstruction metrics of `model` over a split.
EvalReport evaluate(model::ProGAE& model, const trajdata::TrajectoryDataset& dataset,
                    trajdata::Split split, const model::LossConfig& loss = {},
                    std::size_t threads = 0);

}  // namespace conformer_forge::train
