// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>

#include "conformer_forge/ad/tape.hpp"

namespace conformer_forge::ad {

enum class Mode { kTrain, kEval };

/// Per-feature batch normalization over the rows of a matrix, with a learned
/// affine map. Train mode normalizes with the batch statistics (biased
/// variance) and folds them into the running estimates; eval mode uses the
/// running estimates only.
class BatchNorm {
 public:
  BatchNorm() = default;
  BatchNorm(const std::string& prefix, std::size_t features);

  /// Rows are samples. Throws std::invalid_argument for fewer than two rows in
  /// train mode or a width mismatch.
  Var forward(Var x, Mode mode, bool update_running = true);

  std::size_t features() const { return gamma.value.size(); }

  Parameter gamma;
  Parameter beta;
  Tensor running_mean;
  Tensor running_var;  // unbiased running estimate
  double momentum = 0.1;
  double eps = 1e-5;
};

}  // namespace conformer_forge::ad
