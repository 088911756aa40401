// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "conformer_forge/ad/tape.hpp"

namespace conformer_forge::train {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 5e-5;  // decoupled: theta -= lr * wd * theta before the Adam step
};

/// Bias-corrected Adam with decoupled weight decay over a fixed parameter set.
class Adam {
 public:
  Adam() = default;
  Adam(std::vector<ad::Parameter*> params, AdamConfig config = {});

  /// Applies one update from the gradients currently held by the parameters.
  /// Throws std::invalid_argument if a gradient shape does not match.
  void step(double lr);

  std::size_t steps() const { return t_; }
  const std::vector<ad::Tensor>& first_moments() const { return m_; }
  const std::vector<ad::Tensor>& second_moments() const { return v_; }

 private:
  std::vector<ad::Parameter*> params_;
  AdamConfig config_;
  std::vector<ad::Tensor> m_;
  std::vector<ad::Tensor> v_;
  std::size_t t_ = 0;
};

}  // namespace conformer_forge::train
