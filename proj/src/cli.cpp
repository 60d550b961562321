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

#include "meros/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "meros/action_protocol.hpp"
#include "meros/diagram.hpp"
#include "meros/graph_ingest.hpp"
#include "meros/model.hpp"
#include "meros/text_format.hpp"
#include "meros/validator.hpp"
#include "meros/workspace_scan.hpp"

namespace meros {

namespace {

struct InputFailure {
  std::string message;
};

std::string read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputFailure{path + ": cannot read file"};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

RosSystem load_model(const std::string& path) {
  auto parsed = parse_model(read_input(path));
  if (auto* diags = std::get_if<std::vector<ParseDiagnostic>>(&parsed)) {
    std::string message;
    for (const auto& d : *diags) {
      if (!message.empty()) message += "\n";
      message += path + ":" + format_diagnostic(d);
    }
    throw InputFailure{message};
  }
  return std::get<RosSystem>(std::move(parsed));
}

// Stdout when `path` is empty.
void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file || !(file << text)) throw InputFailure{path + ": cannot write file"};
}

struct Options {
  std::string input;
  std::string output;
  bool compact = false;
  bool warnings_as_errors = false;
  bool no_actions = false;
  std::string mode = "blocks";
  std::string level = "connection";
  bool expand_actions = false;
  bool infra = false;
  std::string system;
  std::string table;
};

int cmd_validate(const Options& o, std::ostream& out) {
  const RosSystem model = load_model(o.input);
  ValidateOptions options;
  options.assume_compact = o.compact;
  options.treat_warnings_as_errors = o.warnings_as_errors;
  const auto diags = validate(model, options);
  for (const auto& d : diags) out << format_diagnostic(d) << "\n";
  return has_errors(diags) ? kExitFindings : kExitOk;
}

int cmd_ingest(const Options& o, std::ostream& out, std::ostream& err) {
  auto parsed = parse_snapshot(read_input(o.input));
  for (const auto& d : parsed.diagnostics) {
    err << o.input << ": " << to_string(d.severity) << ": " << d.message << "\n";
  }
  if (!parsed.snapshot) return kExitInput;
  LiftOptions options;
  options.name = std::filesystem::path(o.input).stem().string();
  options.compact = o.compact;
  options.detect_actions = !o.no_actions;
  auto lifted = lift(*parsed.snapshot, options);
  for (const auto& w : lifted.warnings) err << o.input << ": warning: " << w << "\n";
  RosSystem model;
  model.name = options.name;
  model.running_systems.push_back(std::move(lifted.system));
  write_output(o.output, serialize_model(model), out);
  return kExitOk;
}

int cmd_render(const Options& o, std::ostream& out, std::ostream& err) {
  RenderOptions options;
  auto mode = parse_render_mode(o.mode);
  auto level = parse_render_level(o.level);
  if (!mode || !level) {
    err << "render: unknown " << (mode ? "level '" + o.level : "mode '" + o.mode) << "'\n";
    return kExitUsage;
  }
  options.mode = *mode;
  options.level = *level;
  options.expand_actions = o.expand_actions;
  options.show_infrastructure = o.infra;

  const RosSystem model = load_model(o.input);
  const RunningSystem* chosen = nullptr;
  for (const auto& rs : model.running_systems) {
    if (o.system.empty() || rs.name == o.system) {
      chosen = &rs;
      break;
    }
  }
  if (!chosen) {
    throw InputFailure{o.input + ": " +
                       (o.system.empty() ? std::string("model has no running system")
                                         : "no running system named '" + o.system + "'")};
  }
  try {
    write_output(o.output, render(*chosen, options), out);
  } catch (const RenderRefused& refused) {
    err << "render: refusing to draw a model with validation errors\n";
    for (const auto& d : refused.diagnostics()) err << format_diagnostic(d) << "\n";
    return kExitFindings;
  }
  return kExitOk;
}

int cmd_scan(const Options& o, std::ostream& out, std::ostream& err) {
  const ScanResult result = scan(o.input);
  for (const auto& d : result.diagnostics) {
    err << d.path << ": " << to_string(d.severity) << ": " << d.message << "\n";
  }
  if (!result.workspace) return kExitInput;
  RosSystem model;
  model.name = result.workspace->name;
  model.workspaces.push_back(*result.workspace);
  write_output(o.output, serialize_model(model), out);
  const auto diags = validate(model);
  for (const auto& d : diags) err << format_diagnostic(d) << "\n";
  return has_errors(diags) ? kExitFindings : kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  std::optional<TransitionTable> table;
  if (!o.table.empty()) {
    try {
      table = TransitionTable::parse(read_input(o.table));
    } catch (const TableError& e) {
      throw InputFailure{o.table + ":" + e.what()};
    }
  }
  std::vector<ProtocolEvent> trace;
  try {
    trace = parse_trace(read_input(o.input));
  } catch (const TraceParseError& e) {
    throw InputFailure{o.input + ":" + e.what()};
  }
  const TraceReport report =
      simulate(trace, table ? *table : TransitionTable::standard());
  out << report.to_text();
  return report.verdict.accepted ? kExitOk : kExitFindings;
}

int cmd_stats(const Options& o, std::ostream& out) {
  const RosSystem model = load_model(o.input);
  for (const auto& [key, count] : compute_stats(model).entries()) {
    out << key << ": " << count << "\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Model, check and draw ROS 1 systems", "meros"};
  app.require_subcommand(1);
  Options o;

  auto* validate_cmd = app.add_subcommand("validate", "Check a .meros model");
  validate_cmd->add_option("model", o.input, "Model file")->required();
  validate_cmd->add_flag("--compact", o.compact, "Treat running systems as compact");
  validate_cmd->add_flag("--warnings-as-errors", o.warnings_as_errors,
                         "Fail on warnings too");

  auto* ingest_cmd = app.add_subcommand("ingest", "Lift a graph snapshot to a model");
  ingest_cmd->add_option("snapshot", o.input, "Snapshot JSON file")->required();
  ingest_cmd->add_flag("--no-actions", o.no_actions, "Keep action topics as plain topics");
  ingest_cmd->add_flag("--compact", o.compact, "Omit the master and rosout nodes");
  ingest_cmd->add_option("-o,--output", o.output, "Output file");

  auto* render_cmd = app.add_subcommand("render", "Draw a running system as DOT");
  render_cmd->add_option("model", o.input, "Model file")->required();
  render_cmd->add_option("--mode", o.mode, "blocks or edges");
  render_cmd->add_option("--level", o.level, "system, medium or connection");
  render_cmd->add_flag("--expand-actions", o.expand_actions, "Draw the five action topics");
  render_cmd->add_flag("--infra", o.infra, "Draw the master and rosout");
  render_cmd->add_option("--system", o.system, "Running system name");
  render_cmd->add_option("-o,--output", o.output, "Output file");

  auto* scan_cmd = app.add_subcommand("scan", "Build a workspace model from a directory");
  scan_cmd->add_option("dir", o.input, "Workspace root")->required();
  scan_cmd->add_option("-o,--output", o.output, "Output file");

  auto* simulate_cmd = app.add_subcommand("simulate", "Run an action protocol trace");
  simulate_cmd->add_option("trace", o.input, "Trace file")->required();
  simulate_cmd->add_option("--table", o.table, "Transition table file");

  auto* stats_cmd = app.add_subcommand("stats", "Count model elements");
  stats_cmd->add_option("model", o.input, "Model file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(o, out);
    if (ingest_cmd->parsed()) return cmd_ingest(o, out, err);
    if (render_cmd->parsed()) return cmd_render(o, out, err);
    if (scan_cmd->parsed()) return cmd_scan(o, out, err);
    if (simulate_cmd->parsed()) return cmd_simulate(o, out);
    if (stats_cmd->parsed()) return cmd_stats(o, out);
  } catch (const InputFailure& failure) {
    err << failure.message << "\n";
    return kExitInput;
  } catch (const ModelError& e) {
    err << o.input << ": " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}

}  // namespace meros
