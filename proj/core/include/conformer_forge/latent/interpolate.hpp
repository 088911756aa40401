// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "conformer_forge/common.hpp"
#include "conformer_forge/model/progae.hpp"

namespace conformer_forge::latent {

struct InterpolationPoint {
  double alpha = 0.0;
  Coords coords;
  double rmsd_to_a = 0.0;  // Kabsch RMSD to the centered endpoint A
  double rmsd_to_b = 0.0;
};

/// Decodes z(alpha) = (1 - alpha) z_A + alpha z_B at `steps` evenly spaced
/// alphas in [0, 1]. Throws std::invalid_argument for steps < 2 or frames of
/// the wrong length.
std::vector<InterpolationPoint> interpolate_latent(model::ProGAE& model,
                                                   std::span<const Vec3> frame_a,
                                                   std::span<const Vec3> frame_b,
                                                   std::size_t steps = 11);

}  // namespace conformer_forge::latent
