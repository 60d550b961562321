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

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "meros/model.hpp"

namespace meros {

struct ManifestSummary {
  std::string name;
  bool is_metapackage = false;
  std::vector<std::string> dependencies;  // build/run dependencies, sorted
  std::filesystem::path path;
};

class ManifestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws ManifestError when the manifest has no <name> element.
ManifestSummary classify_manifest(std::string_view manifest_text,
                                  std::filesystem::path path = {});

// Bodies of an .action file. Goal, result and feedback sections are
// separated by lines consisting exactly of "---".
struct ActionFileSections {
  std::string goal;
  std::string result;
  std::string feedback;
};

// nullopt unless the text has exactly three sections.
std::optional<ActionFileSections> split_action_file(std::string_view text);

// Data structure names of the action defined in `<stem>.action`.
ActionDataStructure action_data_for_file(std::string_view stem);

struct ScanDiagnostic {
  Severity severity = Severity::Error;
  std::string path;
  std::string message;
};

struct ScanResult {
  std::optional<Workspace> workspace;  // absent iff an error was reported
  std::vector<ScanDiagnostic> diagnostics;
};

// One package per directory holding a package.xml. Files belong to the
// package whose directory is their nearest ancestor. Traversal is
// path-sorted, so identical trees give identical workspaces.
ScanResult scan(const std::filesystem::path& root);

}  // namespace meros
