// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "conformer_forge/ad/tape.hpp"

#include <stdexcept>

namespace conformer_forge::ad {

Parameter::Parameter(std::string n, Tensor v)
    : name(std::move(n)), value(std::move(v)), grad(value.shape(), 0.0) {}

const Tensor& Var::value() const { return tape_->value(id_); }

Var Tape::push(Node node) {
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Var Tape::constant(Tensor value) {
  Node n;
  n.value = std::move(value);
  return push(std::move(n));
}

Var Tape::variable(Tensor value) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = true;
  return push(std::move(n));
}

Var Tape::parameter(Parameter& param) {
  Node n;
  n.value = param.value;
  n.param = &param;
  n.requires_grad = true;
  return push(std::move(n));
}

Var Tape::record(Tensor value, std::initializer_list<Var> inputs, Backward backward) {
  Node n;
  n.value = std::move(value);
  for (const Var& v : inputs) {
    if (v.tape_ != this) throw std::invalid_argument("tape: input recorded on a different tape");
    n.requires_grad = n.requires_grad || nodes_[v.id_].requires_grad;
  }
  if (n.requires_grad) n.backward = std::move(backward);
  return push(std::move(n));
}

Var Tape::record(Tensor value, const std::vector<Var>& inputs, Backward backward) {
  Node n;
  n.value = std::move(value);
  for (const Var& v : inputs) {
    if (v.tape_ != this) throw std::invalid_argument("tape: input recorded on a different tape");
    n.requires_grad = n.requires_grad || nodes_[v.id_].requires_grad;
  }
  if (n.requires_grad) n.backward = std::move(backward);
  return push(std::move(n));
}

Tensor* Tape::grad_buffer(std::size_t id) {
  Node& n = nodes_[id];
  if (!n.requires_grad) return nullptr;
  if (n.grad.empty()) n.grad = Tensor(n.value.shape(), 0.0);
  return &n.grad;
}

void Tape::backward(Var loss) {
  if (loss.tape_ != this) throw std::invalid_argument("backward: loss is not on this tape");
  if (nodes_[loss.id_].value.size() != 1) {
    throw std::invalid_argument("backward: loss must be a scalar, got shape " +
                                nodes_[loss.id_].value.shape_string());
  }
  for (auto& n : nodes_) n.grad = Tensor();
  if (!nodes_[loss.id_].requires_grad) return;
  grad_buffer(loss.id_)->fill(1.0);

  for (std::size_t id = loss.id_ + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (n.grad.empty()) continue;
    if (n.backward) n.backward(*this, n.value, n.grad);
    if (n.param != nullptr) {
      Tensor& acc = n.param->grad;
      if (acc.size() != n.grad.size()) acc = Tensor(n.param->value.shape(), 0.0);
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += n.grad[i];
    }
  }
}

const Tensor& Tape::grad(Var v) const {
  static const Tensor kEmpty;
  const Node& n = nodes_[v.id_];
  return n.grad.empty() ? kEmpty : n.grad;
}

}  // namespace conformer_forge::ad
