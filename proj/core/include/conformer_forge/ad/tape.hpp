// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <initializer_list>
#include <string>

#include "conformer_forge/ad/tensor.hpp"

namespace conformer_forge::ad {

/// A trainable tensor with a gradient accumulator of the same shape.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;

  Parameter() = default;
  Parameter(std::string name, Tensor value);
  void zero_grad() { grad.fill(0.0); }
};

class Tape;

/// Handle to a node recorded on a Tape. Cheap to copy; valid as long as the
/// tape is alive and has not been cleared.
class Var {
 public:
  Var() = default;

  const Tensor& value() const;
  const std::vector<std::size_t>& shape() const { return value().shape(); }
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
  Tape& tape() const { return *tape_; }
  std::size_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Records forward computations in topological order and replays them in
/// reverse to accumulate gradients. Single-writer: one thread builds and
/// consumes a tape.
class Tape {
 public:
  /// Called during backward with the node's forward value and its gradient.
  using Backward = std::function<void(Tape&, const Tensor& value, const Tensor& grad)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor value);
  /// Leaf whose gradient is kept on the tape (see grad()).
  Var variable(Tensor value);
  /// Leaf whose gradient is added into `param.grad` by backward().
  Var parameter(Parameter& param);

  Var record(Tensor value, std::initializer_list<Var> inputs, Backward backward);
  Var record(Tensor value, const std::vector<Var>& inputs, Backward backward);

  const Tensor& value(std::size_t id) const { return nodes_[id].value; }
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }
  /// Gradient accumulator for node `id`, or nullptr when nothing upstream of
  /// it needs a gradient.
  Tensor* grad_buffer(std::size_t id);

  /// Reverse sweep from a single-element node. Intermediate gradients are
  /// reset at the start of every call, while parameter gradients accumulate,
  /// so calling it twice doubles Parameter::grad.
  void backward(Var loss);

  /// Gradient of a variable() leaf after backward().
  const Tensor& grad(Var v) const;

  std::size_t size() const { return nodes_.size(); }
  void clear() { nodes_.clear(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    Backward backward;
    Parameter* param = nullptr;
    bool requires_grad = false;
  };

  Var push(Node node);

  std::deque<Node> nodes_;
};

}  // namespace conformer_forge::ad
