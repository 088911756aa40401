// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "conformer_forge/train/adam.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace conformer_forge::train {

Adam::Adam(std::vector<ad::Parameter*> params, AdamConfig config)
    : params_(std::move(params)), config_(config) {
  for (ad::Parameter* p : params_) {
    m_.emplace_back(p->value.shape(), 0.0);
    v_.emplace_back(p->value.shape(), 0.0);
  }
}

void Adam::step(double lr) {
  for (ad::Parameter* p : params_) {
    if (p->grad.shape() != p->value.shape()) {
      throw std::invalid_argument("adam: gradient shape " + p->grad.shape_string() +
                                  " does not match parameter " + p->name + " " +
                                  p->value.shape_string());
    }
  }
  ++t_;
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  const double decay = lr * config_.weight_decay;
  for (std::size_t k = 0; k < params_.size(); ++k) {
    ad::Tensor& w = params_[k]->value;
    const ad::Tensor& g = params_[k]->grad;
    ad::Tensor& m = m_[k];
    ad::Tensor& v = v_[k];
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] -= decay * w[i];
      m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g[i];
      v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g[i] * g[i];
      w[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + config_.eps);
    }
  }
}

}  // namespace conformer_forge::train
