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

#include <stdexcept>
#include <string>

namespace dagflow {

// Broad failure classes. The CLI maps each one to a distinct exit code.
enum class ErrorCategory {
  kInvalidArgument = 2,
  kIo = 3,
  kParse = 4,
  kNumerical = 5,
  kDivergence = 6,
};

const char* category_name(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

inline Error invalid_argument(const std::string& what) {
  return Error(ErrorCategory::kInvalidArgument, what);
}

inline Error numerical_error(const std::string& what) {
  return Error(ErrorCategory::kNumerical, what);
}

}  // namespace dagflow
