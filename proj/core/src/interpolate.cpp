// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "conformer_forge/latent/interpolate.hpp"

#include <stdexcept>
#include <string>

#include "conformer_forge/geom.hpp"

namespace conformer_forge::latent {

std::vector<InterpolationPoint> interpolate_latent(model::ProGAE& model,
                                                   std::span<const Vec3> frame_a,
                                                   std::span<const Vec3> frame_b,
                                                   std::size_t steps) {
  if (steps < 2) throw std::invalid_argument("interpolate: need at least 2 steps");
  if (frame_a.size() != model.atom_count() || frame_b.size() != model.atom_count()) {
    throw std::invalid_argument("interpolate: frames must have " +
                                std::to_string(model.atom_count()) + " atoms");
  }
  const std::vector<double> za = model.encode_frame(frame_a).concat();
  const std::vector<double> zb = model.encode_frame(frame_b).concat();
  const Coords ta = geom::center(frame_a);
  const Coords tb = geom::center(frame_b);

  std::vector<InterpolationPoint> path;
  path.reserve(steps);
  std::vector<double> z(za.size());
  for (std::size_t k = 0; k < steps; ++k) {
    InterpolationPoint p;
    p.alpha = static_cast<double>(k) / static_cast<double>(steps - 1);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = (1.0 - p.alpha) * za[i] + p.alpha * zb[i];
    p.coords = model.decode_latent(z);
    p.rmsd_to_a = geom::kabsch_rmsd(p.coords, ta).rmsd;
    p.rmsd_to_b = geom::kabsch_rmsd(p.coords, tb).rmsd;
    path.push_back(std::move(p));
  }
  return path;
}

}  // namespace conformer_forge::latent
