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

#include <string>
#include <vector>

#include "meros/model.hpp"

namespace meros {

struct Rule {
  std::string id;           // "MR-" + three digits
  std::string requirement;  // requirement label such as "R3.2.2", or "—"
  Severity severity = Severity::Error;
  std::string description;
};

struct Diagnostic {
  std::string rule;
  Severity severity = Severity::Error;
  std::string subject;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct ValidateOptions {
  bool treat_warnings_as_errors = false;
  // Validate every running system as if it were declared compact.
  bool assume_compact = false;
};

// Sorted by id.
const std::vector<Rule>& list_rules();

// Sorted by (rule, subject, message). Empty iff the model conforms.
std::vector<Diagnostic> validate(const RosSystem& model,
                                 const ValidateOptions& options = {});

std::vector<Diagnostic> validate(const RunningSystem& system,
                                 const ValidateOptions& options = {});

bool has_errors(const std::vector<Diagnostic>& diagnostics);

// `<rule-id> <severity> <subject>: <message>`
std::string format_diagnostic(const Diagnostic& diagnostic);

}  // namespace meros
