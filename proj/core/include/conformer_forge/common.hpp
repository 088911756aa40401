// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace conformer_forge {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Ordered 3D positions in Angstrom, one per vertex of the chain.
using Coords = std::vector<Vec3>;

/// Malformed or inconsistent on-disk data (dataset directories, checkpoints).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace conformer_forge
