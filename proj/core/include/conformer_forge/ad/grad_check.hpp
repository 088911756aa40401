// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "conformer_forge/ad/tape.hpp"

namespace conformer_forge::ad {

struct GradCheckOptions {
  double step = 1e-5;
  /// Coordinates with |x| below this are skipped (kinks of relu-like ops at 0).
  double kink_guard = 0.0;
  /// Skip coordinates whose central difference changes when the step is
  /// halved; that only happens when the stencil straddles a kink.
  bool skip_nonsmooth = true;
  double nonsmooth_tolerance = 1e-4;
  /// Coordinates where both gradients are below this are counted as zeros
  /// instead of checked: a central difference cannot resolve them from the
  /// rounding noise of f, which is about 1e-16 |f| / step.
  double zero_tolerance = 1e-9;
  /// When nonzero, only this many evenly spaced coordinates of each input
  /// tensor are perturbed. Keeps whole-model checks fast.
  std::size_t max_per_tensor = 0;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::size_t zeros = 0;
  std::size_t worst_input = 0;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

/// Builds a scalar from leaves created for each input tensor.
using InputFn = std::function<Var(Tape&, const std::vector<Var>&)>;
/// Builds a scalar from Parameters captured by the closure.
using ParamFn = std::function<Var(Tape&)>;

/// Reverse-mode gradient vs central differences on every input coordinate.
/// Relative error is |a - n| / max(|a|, |n|, 1e-8).
GradCheckResult grad_check(const InputFn& fn, const std::vector<Tensor>& inputs,
                           const GradCheckOptions& options = {});

/// Same check over Parameter values, perturbed in place and restored.
/// Parameter gradients are zeroed first and left holding the analytic result.
GradCheckResult grad_check_params(const ParamFn& fn, const std::vector<Parameter*>& params,
                                  const GradCheckOptions& options = {});

}  // namespace conformer_forge::ad
