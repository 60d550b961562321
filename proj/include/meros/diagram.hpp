// Copyright 2026 The meros-tools Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Graphviz DOT rendering of running systems in the rqt_graph idiom:
// components are ellipses, topics are boxes, intrasystems are clusters and
// communication mediums are dashed undirected edges.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "meros/model.hpp"
#include "meros/validator.hpp"

namespace meros {

enum class RenderMode {
  Blocks,  // one box per topic, publisher -> topic -> subscriber
  Edges,   // one labeled edge per (publisher, subscriber) pair
};

enum class RenderLevel {
  System,      // intrasystem containers and the mediums between them
  Medium,      // medium members collapsed into one edge per medium
  Connection,  // everything
};

struct RenderOptions {
  RenderMode mode = RenderMode::Blocks;
  RenderLevel level = RenderLevel::Connection;
  bool show_infrastructure = false;  // ROS master and rosout
  bool expand_actions = false;
};

std::optional<RenderMode> parse_render_mode(std::string_view text);
std::optional<RenderLevel> parse_render_level(std::string_view text);

class RenderRefused : public std::runtime_error {
 public:
  explicit RenderRefused(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

// Byte-identical output for identical input. Throws RenderRefused when the
// system has validation errors.
std::string render(const RunningSystem& system, const RenderOptions& options = {});

}  // namespace meros
