/*
 * Copyright 2026 The dagflow Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "dagflow/tensor.hpp"

namespace dagflow::ad {

class Tape;

// Handle to a node recorded on a Tape. Cheap to copy; only valid while the
// owning tape is alive.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape& tape() const { return *tape_; }
  std::size_t id() const noexcept { return id_; }
  bool valid() const noexcept { return tape_ != nullptr; }

  const Tensor& value() const;
  const Tensor& grad() const;
  bool requires_grad() const;
  const std::vector<std::size_t>& shape() const { return value().shape(); }

 private:
  Tape* tape_ = nullptr;
  std::size_t id_ = std::numeric_limits<std::size_t>::max();
};

// Linear record of tensor operations. Nodes are appended in evaluation order,
// so every node's inputs precede it and a single reverse sweep suffices for
// backward. One tape must be driven from a single thread.
class Tape {
 public:
  // Called during backward with the node's own id; the function reads
  // grad(id) and accumulates into its inputs via accumulate().
  using BackwardFn = std::function<void(Tape&, std::size_t)>;

  Tape();
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var leaf(Tensor value, bool requires_grad = true);
  Var constant(Tensor value) { return leaf(std::move(value), false); }

  // Appends a node. Throws a numerical error naming `op` if `value` holds a
  // non-finite entry.
  Var record(const char* op, Tensor value, std::initializer_list<Var> inputs, BackwardFn backward);

  // Reverse sweep from a scalar loss. Every gradient buffer is reset first, so
  // calling backward twice on the same tape yields identical gradients.
  void backward(Var loss);

  const Tensor& value(std::size_t id) const { return nodes_[id].value; }
  const Tensor& grad(std::size_t id) const;
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }

  // Gradient buffer of node `id`, zero-initialised on first touch.
  Tensor& accumulate(std::size_t id);

  std::size_t size() const noexcept { return nodes_.size(); }
  const std::string& op_name(std::size_t id) const { return nodes_[id].op; }

 private:
  struct Node {
    std::string op;
    Tensor value;
    Tensor grad;
    bool requires_grad = false;
    BackwardFn backward;
  };
  std::vector<Node> nodes_;
};

}  // namespace dagflow::ad
