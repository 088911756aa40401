// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "conformer_forge/model/progae.hpp"
#include "conformer_forge/trajdata.hpp"

namespace conformer_forge::latent {

/// Latent codes of a list of frames, one row per frame.
struct Embeddings {
  std::vector<std::size_t> frame_index;
  std::vector<int> labels;
  Eigen::MatrixXd intrinsic;  // rows x intrinsic_dim (0 columns without the intrinsic branch)
  Eigen::MatrixXd extrinsic;  // rows x extrinsic_dim
};

Embeddings embed_frames(model::ProGAE& model, const trajdata::TrajectoryDataset& dataset,
                        const std::vector<std::size_t>& indices);

/// Flattened backbone bond directions, one row of 3(n-1) values per frame.
Eigen::MatrixXd extrinsic_signal_matrix(const trajdata::TrajectoryDataset& dataset,
                                        const std::vector<std::size_t>& indices);

/// Per-frame property values in `indices` order. Throws std::invalid_argument
/// for an unknown property.
Eigen::VectorXd property_vector(const trajdata::TrajectoryDataset& dataset,
                                const std::vector<std::size_t>& indices, const std::string& name);

}  // namespace conformer_forge::latent
