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

#include <filesystem>
#include <string>

#include "dagflow/made.hpp"

namespace dagflow {

// Versioned JSON container holding everything needed to rebuild a FlowModel:
// dimension, orderings, hidden degrees, masks, and all weights and biases.
// Doubles are written in shortest round-trip form, so save/load is bitwise.
inline constexpr int kCheckpointVersion = 1;

std::string checkpoint_to_json(const FlowModel& flow);
FlowModel checkpoint_from_json(const std::string& text);

void save_checkpoint(const std::filesystem::path& path, const FlowModel& flow);
FlowModel load_checkpoint(const std::filesystem::path& path);

}  // namespace dagflow
