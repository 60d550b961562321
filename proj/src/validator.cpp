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

#include "meros/validator.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace meros {

const std::vector<Rule>& list_rules() {
  static const std::vector<Rule> rules = {
      {"MR-001", "R3.2.2", Severity::Error,
       "a service or action has more than one server"},
      {"MR-002", "R3.2.3", Severity::Error,
       "an action's constituent topic is used with a conflicting type"},
      {"MR-003", "R3.2.3.1", Severity::Error,
       "an action data structure lacks a goal, feedback or result type"},
      {"MR-004", "R3.1.1.1", Severity::Error,
       "a running system lacks the ROS master or rosout node "
       "(warning for compact systems)"},
      {"MR-005", "R3.2.1.1", Severity::Error,
       "publishers and subscribers of a topic disagree on its message type"},
      {"MR-006", "R3.3.2", Severity::Error,
       "a metapackage owns file artifacts"},
      {"MR-007", "R3.2.3.1", Severity::Error,
       "an action constituent type is listed as a plain message"},
      {"MR-008", "R2.1", Severity::Error,
       "a communication medium member resolves to no connection"},
      {"MR-009", "—", Severity::Warning,
       "a connection has a side with no endpoints"},
      {"MR-010", "R3.3.2", Severity::Warning,
       "a metapackage references a package outside the workspace"},
      {"MR-011", "R3.1.2", Severity::Error,
       "a nodelet manager names no component"},
      {"MR-012", "R3.1.3", Severity::Error,
       "a plugin host names no component"},
      {"MR-013", "—", Severity::Error, "a name is declared twice in one scope"},
      {"MR-014", "—", Severity::Error,
       "an element has an empty name or channel, or an intrasystem lacks its "
       "contents"},
  };
  return rules;
}

namespace {

class Checker {
 public:
  explicit Checker(const ValidateOptions& options) : options_(options) {}

  void report(std::string rule, Severity severity, std::string subject,
              std::string message) {
    if (options_.treat_warnings_as_errors) severity = Severity::Error;
    out_.push_back({std::move(rule), severity, std::move(subject),
                    std::move(message)});
  }

  void check_running_system(const RunningSystem& system) {
    const bool compact = system.compact || options_.assume_compact;
    for (auto [name, requirement] :
         {std::pair{kMasterName, "ROS master"}, std::pair{kRosoutName, "rosout"}}) {
      bool present = std::any_of(
          system.components.begin(), system.components.end(),
          [&](const auto& c) { return c.name == name && role_of(c) != ComponentRole::None; });
      if (!present) {
        report("MR-004", compact ? Severity::Warning : Severity::Error,
               system.name,
               std::string("running system lacks the ") + requirement + " node");
      }
    }
    channels_ = collect_channels(system);
    check_structure(system, "");
    check_channels();
    check_mediums(system, "");
    check_bindings(system);
  }

  void check_workspace(const Workspace& workspace) {
    std::set<std::string> declared;
    for (const auto& p : workspace.packages) {
      duplicate(declared, p.name, workspace.name, "package");
      check_package(p);
    }
    for (const auto& m : workspace.metapackages) {
      duplicate(declared, m.name, workspace.name, "package");
      if (m.name.empty()) report("MR-014", Severity::Error, workspace.name, "metapackage with empty name");
    }
    for (const auto& m : workspace.metapackages) {
      for (const auto& file : m.misc) {
        report("MR-006", Severity::Error, m.name,
               "metapackage owns file '" + file + "'");
      }
      for (const auto& ref : m.packages) {
        if (!declared.count(ref)) {
          report("MR-010", Severity::Warning, m.name,
                 "references package '" + ref + "' not found in workspace '" +
                     workspace.name + "'");
        }
      }
    }
  }

  void duplicate(std::set<std::string>& seen, const std::string& name,
                 const std::string& scope, std::string_view what) {
    if (!seen.insert(name).second) {
      report("MR-013", Severity::Error, scope,
             std::string(what) + " '" + name + "' declared more than once");
    }
  }

  std::vector<Diagnostic> finish() {
    std::sort(out_.begin(), out_.end(), [](const auto& a, const auto& b) {
      return std::tie(a.rule, a.subject, a.message, a.severity) <
             std::tie(b.rule, b.subject, b.message, b.severity);
    });
    out_.erase(std::unique(out_.begin(), out_.end()), out_.end());
    return std::move(out_);
  }

 private:
  static std::string qualify(const std::string& prefix, const std::string& name) {
    return prefix.empty() ? name : prefix + "::" + name;
  }

  void check_package(const Package& p) {
    if (p.name.empty()) report("MR-014", Severity::Error, p.name, "package with empty name");
    std::set<std::string> msgs(p.msg_data.begin(), p.msg_data.end());
    for (const auto& action : p.action_data) {
      for (const char* suffix : {"Action", "ActionGoal", "ActionFeedback",
                                 "ActionResult", "Goal", "Feedback", "Result"}) {
        const std::string constituent = action + suffix;
        if (msgs.count(constituent)) {
          report("MR-007", Severity::Error, p.name,
                 "message '" + constituent + "' belongs to action '" + action +
                     "' and must not be listed under msg");
        }
      }
    }
  }

  // Name uniqueness and well-formedness, recursively.
  void check_structure(const Intrasystem& system, const std::string& prefix) {
    const std::string scope = prefix.empty() ? system.name : prefix;
    std::set<std::string> components;
    for (const auto& c : system.components) {
      const std::string qualified = qualify(prefix, c.name);
      duplicate(components, c.name, scope, "component");
      if (c.name.empty()) {
        report("MR-014", Severity::Error, scope, "component with empty name");
      }
      if ((c.kind == ComponentKind::Intrasystem) != bool(c.nested)) {
        report("MR-014", Severity::Error, qualified,
               "intrasystem kind and nested contents disagree");
      }
      std::set<std::string> ports;
      for (const auto& port : c.ports) {
        if (port.channel.empty()) {
          report("MR-014", Severity::Error, qualified, "port with empty channel");
          continue;
        }
        const std::string key = std::string(to_string(port.direction)) + " " +
                                (port.direction == PortDirection::NonRos
                                     ? port.channel
                                     : normalize_channel(port.channel));
        duplicate(ports, key, qualified, "port");
      }
      if (c.kind == ComponentKind::Intrasystem && c.nested) {
        check_structure(*c.nested, qualified);
      }
    }
    std::set<std::string> topics, services, actions, mediums;
    for (const auto& t : system.declared_topics) {
      duplicate(topics, normalize_channel(t.name), scope, "topic");
    }
    for (const auto& s : system.declared_services) {
      duplicate(services, normalize_channel(s.name), scope, "service");
    }
    for (const auto& a : system.declared_actions) {
      duplicate(actions, normalize_channel(a.name), scope, "action");
      if (a.data.goal.empty() || a.data.feedback.empty() || a.data.result.empty()) {
        report("MR-003", Severity::Error, normalize_channel(a.name),
               "action data structure must name goal, feedback and result types");
      }
    }
    for (const auto& m : system.mediums) duplicate(mediums, m.name, scope, "medium");
  }

  const ChannelUse* find_channel(ConnectionKind kind, const std::string& name) const {
    for (const auto& use : channels_) {
      if (use.kind == kind && use.name == name) return &use;
    }
    return nullptr;
  }

  static std::set<std::string> topic_types(const ChannelUse& use) {
    std::set<std::string> types;
    for (const auto& d : use.topic_decls) types.insert(d.message);
    for (const auto& e : use.providers) types.insert(e.payload_type);
    for (const auto& e : use.consumers) types.insert(e.payload_type);
    return types;
  }

  static std::string join(const std::set<std::string>& values) {
    std::string out;
    for (const auto& v : values) {
      if (!out.empty()) out += ", ";
      out += "'" + v + "'";
    }
    return out;
  }

  void check_channels() {
    for (const auto& use : channels_) {
      std::set<std::string> providers, consumers;
      for (const auto& e : use.providers) providers.insert(e.component);
      for (const auto& e : use.consumers) consumers.insert(e.component);
      switch (use.kind) {
        case ConnectionKind::Topic: {
          auto types = topic_types(use);
          if (types.size() > 1) {
            report("MR-005", Severity::Error, use.name,
                   "topic carries conflicting message types " + join(types));
          }
          if (providers.empty() || consumers.empty()) {
            report("MR-009", Severity::Warning, use.name,
                   providers.empty() ? "topic has no publishers"
                                     : "topic has no subscribers");
          }
          break;
        }
        case ConnectionKind::Service:
        case ConnectionKind::Action: {
          const std::string what(to_string(use.kind));
          if (providers.size() > 1) {
            std::string names;
            for (const auto& p : providers) names += (names.empty() ? "" : ", ") + p;
            report("MR-001", Severity::Error, use.name,
                   what + " has " + std::to_string(providers.size()) +
                       " servers: " + names);
          }
          if (providers.empty()) {
            report("MR-009", Severity::Warning, use.name, what + " has no server");
          } else if (use.kind == ConnectionKind::Action && consumers.empty()) {
            report("MR-009", Severity::Warning, use.name, "action has no clients");
          }
          if (use.kind == ConnectionKind::Action) check_action_expansion(use);
          break;
        }
        case ConnectionKind::NonRos:
          if (providers.size() < 2) {
            report("MR-009", Severity::Warning, use.name,
                   "non-ROS link has fewer than two endpoints");
          }
          break;
      }
    }
  }

  void check_action_expansion(const ChannelUse& use) {
    ActionDataStructure data;
    if (!use.action_decls.empty()) {
      data = use.action_decls.front().data;
    } else {
      const auto& ends = use.providers.empty() ? use.consumers : use.providers;
      if (ends.empty()) return;
      data = action_data_for_type(ends.front().payload_type);
    }
    for (const auto& expected : expand_action({use.name, data}, std::nullopt, {})) {
      const ChannelUse* topic = find_channel(ConnectionKind::Topic, expected.topic.name);
      if (!topic) continue;
      for (const auto& type : topic_types(*topic)) {
        if (type != expected.topic.message) {
          report("MR-002", Severity::Error, use.name,
                 "topic '" + expected.topic.name + "' has type '" + type +
                     "' but the action expects '" + expected.topic.message + "'");
        }
      }
    }
  }

  void check_mediums(const Intrasystem& system, const std::string& prefix) {
    for (const auto& medium : system.mediums) {
      const std::string subject = qualify(prefix, medium.name);
      if (medium.members.empty()) {
        report("MR-008", Severity::Error, subject, "medium has no members");
      }
      for (const auto& ref : medium.members) {
        const std::string key = ref.kind == ConnectionKind::NonRos
                                    ? ref.channel
                                    : normalize_channel(ref.channel);
        if (!find_channel(ref.kind, key)) {
          report("MR-008", Severity::Error, subject,
                 std::string(to_string(ref.kind)) + " '" + ref.channel +
                     "' resolves to no connection");
        }
      }
    }
    for (const auto& c : system.components) {
      if (c.kind == ComponentKind::Intrasystem && c.nested) {
        check_mediums(*c.nested, qualify(prefix, c.name));
      }
    }
  }

  void check_bindings(const Intrasystem& root) {
    std::set<std::string> qualified_names;
    collect_names(root, "", qualified_names);
    bind_level(root, "", qualified_names);
  }

  void collect_names(const Intrasystem& system, const std::string& prefix,
                     std::set<std::string>& names) {
    for (const auto& c : system.components) {
      names.insert(qualify(prefix, c.name));
      if (c.nested) collect_names(*c.nested, qualify(prefix, c.name), names);
    }
  }

  void bind_level(const Intrasystem& system, const std::string& prefix,
                  const std::set<std::string>& all) {
    for (const auto& c : system.components) {
      auto bound = [&](const std::string& target) {
        if (all.count(target)) return true;
        return all.count(qualify(prefix, target)) > 0;
      };
      const std::string qualified = qualify(prefix, c.name);
      if (c.manager && !bound(*c.manager)) {
        report("MR-011", Severity::Error, qualified,
               "manager '" + *c.manager + "' names no component");
      }
      if (c.host && !bound(*c.host)) {
        report("MR-012", Severity::Error, qualified,
               "host '" + *c.host + "' names no component");
      }
      if (c.nested) bind_level(*c.nested, qualified, all);
    }
  }

  ValidateOptions options_;
  std::vector<ChannelUse> channels_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> validate(const RosSystem& model,
                                 const ValidateOptions& options) {
  Checker checker(options);
  std::set<std::string> systems, workspaces;
  for (const auto& system : model.running_systems) {
    checker.duplicate(systems, system.name, model.name, "running system");
    checker.check_running_system(system);
  }
  for (const auto& workspace : model.workspaces) {
    checker.duplicate(workspaces, workspace.name, model.name, "workspace");
    checker.check_workspace(workspace);
  }
  return checker.finish();
}

std::vector<Diagnostic> validate(const RunningSystem& system,
                                 const ValidateOptions& options) {
  Checker checker(options);
  checker.check_running_system(system);
  return checker.finish();
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(), [](const auto& d) {
    return d.severity == Severity::Error;
  });
}

std::string format_diagnostic(const Diagnostic& diagnostic) {
  return diagnostic.rule + " " + std::string(to_string(diagnostic.severity)) +
         " " + diagnostic.subject + ": " + diagnostic.message;
}

}  // namespace meros
