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

#include "dagflow/tape.hpp"

#include <mutex>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "dagflow/errors.hpp"

namespace dagflow::ad {

namespace {

// Tapes allocate and release many multi-megabyte buffers per step. Keeping
// them on the heap instead of fresh mmap pages avoids a page fault storm.
void tune_allocator() {
#if defined(__GLIBC__)
  static std::once_flag once;
  std::call_once(once, [] {
    mallopt(M_MMAP_THRESHOLD, 256 * 1024 * 1024);
    mallopt(M_TRIM_THRESHOLD, 512 * 1024 * 1024);
  });
#endif
}

}  // namespace

Tape::Tape() { tune_allocator(); }

const Tensor& Var::value() const { return tape_->value(id_); }
const Tensor& Var::grad() const { return tape_->grad(id_); }
bool Var::requires_grad() const { return tape_->requires_grad(id_); }

Var Tape::leaf(Tensor value, bool requires_grad) {
  if (!value.all_finite()) throw numerical_error("leaf tensor has non-finite entries");
  nodes_.push_back(Node{"leaf", std::move(value), Tensor{}, requires_grad, nullptr});
  return Var(this, nodes_.size() - 1);
}

Var Tape::record(const char* op, Tensor value, std::initializer_list<Var> inputs,
                 BackwardFn backward) {
  if (!value.all_finite()) {
    throw numerical_error(std::string("non-finite result in op '") + op + "' " +
                          value.shape_string());
  }
  bool needs = false;
  for (const Var& v : inputs) {
    if (&v.tape() != this) throw invalid_argument(std::string(op) + ": input from another tape");
    needs = needs || nodes_[v.id()].requires_grad;
  }
  nodes_.push_back(Node{op, std::move(value), Tensor{}, needs, needs ? std::move(backward) : nullptr});
  return Var(this, nodes_.size() - 1);
}

const Tensor& Tape::grad(std::size_t id) const {
  const Node& n = nodes_[id];
  if (n.grad.empty() && !n.value.empty()) {
    // Untouched by the last backward pass: report an all-zero gradient.
    const_cast<Node&>(n).grad = Tensor(n.value.shape(), 0.0);
  }
  return n.grad;
}

Tensor& Tape::accumulate(std::size_t id) {
  Node& n = nodes_[id];
  if (n.grad.empty()) n.grad = Tensor(n.value.shape(), 0.0);
  return n.grad;
}

void Tape::backward(Var loss) {
  if (&loss.tape() != this) throw invalid_argument("backward: loss belongs to another tape");
  const Tensor& lv = nodes_[loss.id()].value;
  if (lv.size() != 1) {
    throw invalid_argument("backward: loss must be a scalar, got shape " + lv.shape_string());
  }
  for (Node& n : nodes_) n.grad = Tensor{};
  accumulate(loss.id())[0] = 1.0;
  for (std::size_t i = loss.id() + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.requires_grad || !n.backward || n.grad.empty()) continue;
    n.backward(*this, i);
  }
}

}  // namespace dagflow::ad
