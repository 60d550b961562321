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

// Computation-graph snapshots and their lifting into running-system models.
//
// A snapshot is a JSON document:
//
//   {"nodes": ["/a", ...],
//    "topics": [{"name": "/t", "type": "pkg/Msg",
//                "publishers": [...], "subscribers": [...]}, ...],
//    "services": [{"name": "/s", "type": "pkg/Srv",
//                  "server": "/a" | null, "clients": [...]}, ...]}
//
// "clients" is optional; ROS introspection does not report service clients.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "meros/model.hpp"

namespace meros {

struct SnapshotTopic {
  std::string name;
  std::string type;
  std::vector<std::string> publishers;
  std::vector<std::string> subscribers;

  friend bool operator==(const SnapshotTopic&, const SnapshotTopic&) = default;
};

struct SnapshotService {
  std::string name;
  std::string type;
  std::optional<std::string> server;
  std::vector<std::string> clients;

  friend bool operator==(const SnapshotService&, const SnapshotService&) = default;
};

struct GraphSnapshot {
  std::vector<std::string> nodes;
  std::vector<SnapshotTopic> topics;
  std::vector<SnapshotService> services;

  friend bool operator==(const GraphSnapshot&, const GraphSnapshot&) = default;
};

struct IngestDiagnostic {
  Severity severity = Severity::Error;
  std::string message;
};

struct SnapshotParseResult {
  std::optional<GraphSnapshot> snapshot;  // absent iff an error was reported
  std::vector<IngestDiagnostic> diagnostics;
};

SnapshotParseResult parse_snapshot(std::string_view text);

// Serializes in the same document format; used to write test corpora.
std::string snapshot_to_json(const GraphSnapshot& snapshot);

struct ActionCandidate {
  std::string prefix;
  std::optional<std::string> server;
  std::vector<std::string> clients;  // sorted
  // The matched topics in the order goal, cancel, status, feedback, result.
  std::vector<SnapshotTopic> evidence;

  friend bool operator==(const ActionCandidate&, const ActionCandidate&) = default;
};

struct ActionDetection {
  std::vector<ActionCandidate> candidates;  // sorted by prefix
  std::vector<std::string> warnings;        // ambiguity demotions
};

// A non-empty prefix P is an action when P/goal, P/cancel, P/status, P/feedback and
// P/result all exist and exactly one node subscribes to both request topics
// while publishing all three response topics. Clients are the publishers of
// P/goal.
ActionDetection detect_actions(const GraphSnapshot& snapshot);

struct LiftOptions {
  std::string name = "snapshot";
  bool compact = false;
  bool detect_actions = true;
};

struct LiftResult {
  RunningSystem system;
  std::vector<std::string> warnings;
};

LiftResult lift(const GraphSnapshot& snapshot, const LiftOptions& options = {});

}  // namespace meros
