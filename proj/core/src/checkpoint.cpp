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

#include "dagflow/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dagflow/errors.hpp"

namespace dagflow {

namespace {

using nlohmann::json;

json matrix_json(const DenseMatrix& m) {
  auto d = m.data();
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::vector<double>(d.begin(), d.end())}};
}

DenseMatrix matrix_from_json(const json& j) {
  return DenseMatrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                     j.at("data").get<std::vector<double>>());
}

}  // namespace

std::string checkpoint_to_json(const FlowModel& flow) {
  json root;
  root["format"] = "dagflow-checkpoint";
  root["version"] = kCheckpointVersion;
  root["dim"] = flow.dim();
  root["num_blocks"] = flow.num_blocks();
  json blocks = json::array();
  for (const MadeBlock& b : flow.blocks()) {
    json jb;
    jb["alpha_clamp"] = b.alpha_clamp();
    jb["ordering"] = b.masks().ordering;
    jb["hidden_degrees"] = b.masks().hidden_degrees;
    json masks = json::array();
    for (const DenseMatrix& m : b.masks().masks) masks.push_back(matrix_json(m));
    jb["masks"] = std::move(masks);
    json params = json::array();
    for (const ad::Tensor& p : b.params()) {
      auto d = p.data();
      params.push_back(json{{"shape", p.shape()}, {"data", std::vector<double>(d.begin(), d.end())}});
    }
    jb["params"] = std::move(params);
    blocks.push_back(std::move(jb));
  }
  root["blocks"] = std::move(blocks);
  return root.dump(1);
}

FlowModel checkpoint_from_json(const std::string& text) {
  try {
    const json root = json::parse(text);
    if (root.at("format").get<std::string>() != "dagflow-checkpoint") {
      throw Error(ErrorCategory::kParse, "checkpoint: unknown format tag");
    }
    const int version = root.at("version").get<int>();
    if (version != kCheckpointVersion) {
      throw Error(ErrorCategory::kParse, "checkpoint: unsupported version " + std::to_string(version));
    }
    const auto d = root.at("dim").get<std::size_t>();
    std::vector<MadeBlock> blocks;
    for (const json& jb : root.at("blocks")) {
      MaskSet set;
      set.dim = d;
      set.ordering = jb.at("ordering").get<std::vector<std::size_t>>();
      set.hidden_degrees = jb.at("hidden_degrees").get<std::vector<std::vector<int>>>();
      set.variable_degrees.assign(d, 0);
      for (std::size_t pos = 0; pos < set.ordering.size(); ++pos)
        set.variable_degrees.at(set.ordering[pos]) = static_cast<int>(pos) + 1;
      for (const json& jm : jb.at("masks")) set.masks.push_back(matrix_from_json(jm));
      MadeBlock block(std::move(set), jb.at("alpha_clamp").get<double>());
      const json& params = jb.at("params");
      if (params.size() != block.params().size()) {
        throw Error(ErrorCategory::kParse, "checkpoint: parameter count mismatch");
      }
      for (std::size_t i = 0; i < params.size(); ++i) {
        ad::Tensor t(params[i].at("shape").get<std::vector<std::size_t>>(),
                     params[i].at("data").get<std::vector<double>>());
        if (t.shape() != block.params()[i].shape()) {
          throw Error(ErrorCategory::kParse, "checkpoint: parameter shape mismatch");
        }
        block.params()[i] = std::move(t);
      }
      blocks.push_back(std::move(block));
    }
    FlowModel flow(std::move(blocks));
    if (flow.num_blocks() != root.at("num_blocks").get<std::size_t>()) {
      throw Error(ErrorCategory::kParse, "checkpoint: block count mismatch");
    }
    return flow;
  } catch (const json::exception& e) {
    throw Error(ErrorCategory::kParse, std::string("checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const FlowModel& flow) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCategory::kIo, "cannot write checkpoint " + path.string());
  out << checkpoint_to_json(flow) << '\n';
}

FlowModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::kIo, "cannot read checkpoint " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return checkpoint_from_json(buf.str());
}

}  // namespace dagflow
