// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "conformer_forge/ad/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace conformer_forge::ad {

namespace {

// Evaluates d f / d x[k] for a coordinate reachable through `slot`, where
// `eval` recomputes the scalar from the current buffer contents.
template <typename Eval>
void check_coordinate(double& slot, double analytic, const Eval& eval,
                      const GradCheckOptions& options, std::size_t input, std::size_t index,
                      GradCheckResult& result) {
  const double x0 = slot;
  if (options.kink_guard > 0.0 && std::abs(x0) < options.kink_guard) {
    ++result.skipped;
    return;
  }
  auto central = [&](double h) {
    slot = x0 + h;
    const double fp = eval();
    slot = x0 - h;
    const double fm = eval();
    slot = x0;
    return (fp - fm) / (2.0 * h);
  };
  const double numeric = central(options.step);
  if (options.skip_nonsmooth) {
    const double half = central(0.5 * options.step);
    const double scale = std::max(std::abs(numeric), std::abs(half));
    if (std::abs(numeric - half) > options.nonsmooth_tolerance * scale + 1e-9) {
      ++result.skipped;
      return;
    }
  }
  if (std::abs(analytic) <= options.zero_tolerance && std::abs(numeric) <= options.zero_tolerance) {
    ++result.zeros;
    return;
  }
  const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
  const double err = std::abs(analytic - numeric) / denom;
  ++result.checked;
  if (err > result.max_rel_error || result.checked == 1) {
    result.max_rel_error = std::max(result.max_rel_error, err);
    result.worst_input = input;
    result.worst_index = index;
    result.worst_analytic = analytic;
    result.worst_numeric = numeric;
  }
}

// Every coordinate, or `limit` evenly spaced ones when the tensor is larger.
std::vector<std::size_t> coordinates(std::size_t size, std::size_t limit) {
  std::vector<std::size_t> out;
  if (limit == 0 || size <= limit) {
    for (std::size_t i = 0; i < size; ++i) out.push_back(i);
  } else {
    for (std::size_t k = 0; k < limit; ++k) out.push_back(k * size / limit);
  }
  return out;
}

double scalar_of(Var v) {
  if (v.value().size() != 1) throw std::invalid_argument("grad_check: function is not scalar");
  return v.value()[0];
}

}  // namespace

GradCheckResult grad_check(const InputFn& fn, const std::vector<Tensor>& inputs,
                           const GradCheckOptions& options) {
  std::vector<Tensor> work = inputs;
  std::vector<Tensor> analytic;
  {
    Tape tape;
    std::vector<Var> leaves;
    for (const Tensor& t : work) leaves.push_back(tape.variable(t));
    Var y = fn(tape, leaves);
    tape.backward(y);
    for (std::size_t k = 0; k < leaves.size(); ++k) {
      const Tensor& g = tape.grad(leaves[k]);
      analytic.push_back(g.empty() ? Tensor(work[k].shape(), 0.0) : g);
    }
  }
  auto eval = [&]() {
    Tape tape;
    std::vector<Var> leaves;
    for (const Tensor& t : work) leaves.push_back(tape.constant(t));
    return scalar_of(fn(tape, leaves));
  };
  GradCheckResult result;
  for (std::size_t k = 0; k < work.size(); ++k) {
    for (std::size_t i : coordinates(work[k].size(), options.max_per_tensor)) {
      check_coordinate(work[k][i], analytic[k][i], eval, options, k, i, result);
    }
  }
  return result;
}

GradCheckResult grad_check_params(const ParamFn& fn, const std::vector<Parameter*>& params,
                                  const GradCheckOptions& options) {
  for (Parameter* p : params) {
    p->grad = Tensor(p->value.shape(), 0.0);
  }
  {
    Tape tape;
    tape.backward(fn(tape));
  }
  auto eval = [&]() {
    Tape tape;
    return scalar_of(fn(tape));
  };
  GradCheckResult result;
  for (std::size_t k = 0; k < params.size(); ++k) {
    Parameter& p = *params[k];
    for (std::size_t i : coordinates(p.value.size(), options.max_per_tensor)) {
      check_coordinate(p.value[i], p.grad[i], eval, options, k, i, result);
    }
  }
  return result;
}

}  // namespace conformer_forge::ad
