// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "conformer_forge/latent/probes.hpp"
#include "conformer_forge/model/progae.hpp"
#include "conformer_forge/trajdata.hpp"

namespace conformer_forge::latent {

struct ProbeSuite {
  std::size_t test_frames = 0;
  double extrinsic_accuracy = 0.0;
  double intrinsic_accuracy = 0.0;  // NaN without the intrinsic branch
  /// One entry per property: value = extrinsic-latent error, baseline = PCA error.
  std::vector<ProbeResult> regressions;
};

/// One-shot classification with the first train-split frame of every class as
/// exemplar, scored on `split`; held-out property regression on the `split`
/// embeddings against PCA scores of the raw extrinsic signal with the same
/// number of components. An empty `properties` list means all of them.
ProbeSuite run_probe_suite(model::ProGAE& model, const trajdata::TrajectoryDataset& dataset,
                           trajdata::Split split, std::uint64_t seed = 0,
                           const std::vector<std::string>& properties = {});

}  // namespace conformer_forge::latent
