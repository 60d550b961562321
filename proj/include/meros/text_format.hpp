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

// The `.meros` text format.
//
//   model       := (system | workspace)* ;
//   system      := "system" STRING ["compact"] "{" item* "}" ;
//   item        := component | channel | medium | group ;
//   component   := kind STRING ["manager" STRING] ["host" STRING] "{" port* "}" ;
//   kind        := "node" | "nodelet" | "plugin" | "library" | "nonros" ;
//   group       := "intrasystem" STRING "{" item* "}" ;
//   port        := pdir STRING ":" STRING ";" ;
//   pdir        := "publishes" | "subscribes" | "serves" | "calls"
//                | "provides_action" | "uses_action" | "nonros_link" ;
//   channel     := "topic" STRING ":" STRING ";"
//                | "service" STRING ":" STRING "->" STRING ";"
//                | "action" STRING ":" STRING "/" STRING "/" STRING ";" ;
//   medium      := "medium" STRING "{" mref* "}" ;
//   mref        := ("topic" | "service" | "action" | "nonros") STRING ";" ;
//   workspace   := "workspace" STRING "{" (package | metapackage)* "}" ;
//   package     := "package" STRING "{" art* "}" ;
//   art         := ("node" | "nodelet" | "plugin" | "library" | "msg" | "srv"
//                 | "actiondef" | "misc") STRING ";" ;
//   metapackage := "metapackage" STRING "{" (("package" | "misc") STRING ";")* "}" ;
//
// Comments run from "#" to the end of the line. Action data is written in
// goal / feedback / result order.

#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "meros/model.hpp"

namespace meros {

struct SourceSpan {
  int line = 1;    // 1-based
  int column = 1;  // 1-based, in bytes
  int length = 1;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

struct ParseDiagnostic {
  SourceSpan span;
  std::string message;
  Severity severity = Severity::Error;
};

// `<line>:<column>: <severity>: <message>`
std::string format_diagnostic(const ParseDiagnostic& diagnostic);

using ParseResult = std::variant<RosSystem, std::vector<ParseDiagnostic>>;

// Non-compact systems receive the master and rosout nodes when the text does
// not declare them.
ParseResult parse_model(std::string_view text);

// Canonical text: declarations sorted within each block, two-space indent,
// one declaration per line, LF endings.
std::string serialize_model(const RosSystem& model);

// Double-quoted form with the escapes the parser accepts.
std::string quote_string(std::string_view value);

}  // namespace meros
