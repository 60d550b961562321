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

#include "meros/graph_ingest.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "json.hpp"

namespace meros {

using nlohmann::json;

namespace {

class SnapshotReader {
 public:
  SnapshotParseResult read(std::string_view text) {
    json doc;
    try {
      doc = json::parse(text.begin(), text.end());
    } catch (const json::exception& e) {
      error(std::string("malformed document: ") + e.what());
      return finish();
    }
    if (!doc.is_object()) {
      error("malformed document: top level must be an object");
      return finish();
    }
    warn_unknown(doc, {"nodes", "topics", "services"}, "document");
    read_strings(doc, "nodes", "document", snapshot_.nodes, true);
    if (auto* topics = array_field(doc, "topics", "document")) {
      for (std::size_t i = 0; i < topics->size(); ++i) read_topic((*topics)[i], i);
    }
    if (auto* services = array_field(doc, "services", "document")) {
      for (std::size_t i = 0; i < services->size(); ++i) {
        read_service((*services)[i], i);
      }
    }
    check_references();
    return finish();
  }

 private:
  void error(std::string message) {
    failed_ = true;
    diagnostics_.push_back({Severity::Error, std::move(message)});
  }

  void warn(std::string message) {
    diagnostics_.push_back({Severity::Warning, std::move(message)});
  }

  void warn_unknown(const json& object, std::initializer_list<const char*> known,
                    const std::string& where) {
    for (const auto& [key, value] : object.items()) {
      bool ok = std::any_of(known.begin(), known.end(),
                            [&](const char* k) { return key == k; });
      if (!ok) warn("unknown field '" + key + "' in " + where + " ignored");
    }
  }

  const json* array_field(const json& object, const char* key,
                          const std::string& where) {
    auto it = object.find(key);
    if (it == object.end()) {
      error(where + ": missing field '" + key + "'");
      return nullptr;
    }
    if (!it->is_array()) {
      error(where + ": field '" + key + "' must be an array");
      return nullptr;
    }
    return &*it;
  }

  bool read_strings(const json& object, const char* key, const std::string& where,
                    std::vector<std::string>& out, bool required) {
    if (!required && !object.contains(key)) return true;
    const json* array = array_field(object, key, where);
    if (!array) return false;
    for (const auto& item : *array) {
      if (!item.is_string()) {
        error(where + ": field '" + key + "' must contain only strings");
        return false;
      }
      out.push_back(item.get<std::string>());
    }
    return true;
  }

  bool read_string(const json& object, const char* key, const std::string& where,
                   std::string& out) {
    auto it = object.find(key);
    if (it == object.end() || !it->is_string()) {
      error(where + ": field '" + key + "' must be a string");
      return false;
    }
    out = it->get<std::string>();
    return true;
  }

  void read_topic(const json& item, std::size_t index) {
    const std::string where = "topics[" + std::to_string(index) + "]";
    if (!item.is_object()) {
      error(where + " must be an object");
      return;
    }
    warn_unknown(item, {"name", "type", "publishers", "subscribers"}, where);
    SnapshotTopic topic;
    bool ok = read_string(item, "name", where, topic.name);
    ok = read_string(item, "type", where, topic.type) && ok;
    ok = read_strings(item, "publishers", where, topic.publishers, true) && ok;
    ok = read_strings(item, "subscribers", where, topic.subscribers, true) && ok;
    if (ok) snapshot_.topics.push_back(std::move(topic));
  }

  void read_service(const json& item, std::size_t index) {
    const std::string where = "services[" + std::to_string(index) + "]";
    if (!item.is_object()) {
      error(where + " must be an object");
      return;
    }
    warn_unknown(item, {"name", "type", "server", "clients"}, where);
    SnapshotService service;
    bool ok = read_string(item, "name", where, service.name);
    ok = read_string(item, "type", where, service.type) && ok;
    auto server = item.find("server");
    if (server == item.end()) {
      error(where + ": missing field 'server'");
      ok = false;
    } else if (server->is_string()) {
      service.server = server->get<std::string>();
    } else if (!server->is_null()) {
      error(where + ": field 'server' must be a string or null");
      ok = false;
    }
    ok = read_strings(item, "clients", where, service.clients, false) && ok;
    if (ok) snapshot_.services.push_back(std::move(service));
  }

  void check_references() {
    std::set<std::string> nodes;
    for (const auto& node : snapshot_.nodes) {
      if (!nodes.insert(node).second) error("duplicate node '" + node + "'");
    }
    auto check = [&](const std::string& endpoint, const std::string& channel) {
      if (!nodes.count(endpoint)) {
        error("dangling endpoint '" + endpoint + "' on '" + channel + "'");
      }
    };
    std::set<std::string> names;
    for (const auto& topic : snapshot_.topics) {
      if (!names.insert(topic.name).second) {
        error("duplicate topic '" + topic.name + "'");
      }
      for (const auto& n : topic.publishers) check(n, topic.name);
      for (const auto& n : topic.subscribers) check(n, topic.name);
    }
    names.clear();
    for (const auto& service : snapshot_.services) {
      if (!names.insert(service.name).second) {
        error("duplicate service '" + service.name + "'");
      }
      if (service.server) check(*service.server, service.name);
      for (const auto& n : service.clients) check(n, service.name);
    }
  }

  SnapshotParseResult finish() {
    SnapshotParseResult result;
    if (!failed_) result.snapshot = std::move(snapshot_);
    result.diagnostics = std::move(diagnostics_);
    return result;
  }

  GraphSnapshot snapshot_;
  std::vector<IngestDiagnostic> diagnostics_;
  bool failed_ = false;
};

std::set<std::string> as_set(const std::vector<std::string>& names) {
  return {names.begin(), names.end()};
}

std::vector<std::string> sorted_unique(std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  return names;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

SnapshotParseResult parse_snapshot(std::string_view text) {
  return SnapshotReader().read(text);
}

std::string snapshot_to_json(const GraphSnapshot& snapshot) {
  json doc;
  doc["nodes"] = snapshot.nodes;
  doc["topics"] = json::array();
  for (const auto& t : snapshot.topics) {
    doc["topics"].push_back({{"name", t.name},
                             {"type", t.type},
                             {"publishers", t.publishers},
                             {"subscribers", t.subscribers}});
  }
  doc["services"] = json::array();
  for (const auto& s : snapshot.services) {
    json item = {{"name", s.name}, {"type", s.type}, {"clients", s.clients}};
    item["server"] = s.server ? json(*s.server) : json(nullptr);
    doc["services"].push_back(std::move(item));
  }
  return doc.dump(2) + "\n";
}

ActionDetection detect_actions(const GraphSnapshot& snapshot) {
  std::map<std::string, const SnapshotTopic*> by_name;
  for (const auto& topic : snapshot.topics) by_name[topic.name] = &topic;

  ActionDetection detection;
  for (const auto& [name, goal] : by_name) {
    if (!ends_with(name, "/goal")) continue;
    const std::string prefix = name.substr(0, name.size() - 5);
    if (prefix.empty()) continue;
    std::vector<const SnapshotTopic*> parts;
    for (auto suffix : kActionSuffixes) {
      auto it = by_name.find(prefix + "/" + std::string(suffix));
      if (it == by_name.end()) break;
      parts.push_back(it->second);
    }
    if (parts.size() != std::size(kActionSuffixes)) continue;

    // parts: goal, cancel, status, feedback, result
    std::vector<std::string> servers;
    for (const auto& node : as_set(parts[0]->subscribers)) {
      const bool request = as_set(parts[1]->subscribers).count(node) > 0;
      const bool response = as_set(parts[2]->publishers).count(node) &&
                            as_set(parts[3]->publishers).count(node) &&
                            as_set(parts[4]->publishers).count(node);
      if (request && response) servers.push_back(node);
    }
    if (servers.empty()) continue;
    if (servers.size() > 1) {
      detection.warnings.push_back("ambiguous action server for '" + prefix +
                                   "' (" + servers[0] + ", " + servers[1] +
                                   "); keeping its topics as plain topics");
      continue;
    }
    ActionCandidate candidate;
    candidate.prefix = prefix;
    candidate.server = servers.front();
    candidate.clients = sorted_unique(parts[0]->publishers);
    for (const auto* part : parts) candidate.evidence.push_back(*part);
    detection.candidates.push_back(std::move(candidate));
  }
  std::sort(detection.candidates.begin(), detection.candidates.end(),
            [](const auto& a, const auto& b) { return a.prefix < b.prefix; });
  return detection;
}

LiftResult lift(const GraphSnapshot& snapshot, const LiftOptions& options) {
  const std::set<std::string> node_set = as_set(snapshot.nodes);
  auto component_name = [&](const std::string& node) {
    if (node == "/rosout" && !node_set.count(std::string(kRosoutName))) {
      return std::string(kRosoutName);
    }
    return node;
  };

  std::map<std::string, CommunicatingComponent> components;
  for (const auto& node : snapshot.nodes) {
    std::string name = component_name(node);
    components.emplace(name, make_component(name, ComponentKind::Node));
  }
  auto add_port = [&](const std::string& node, PortDirection direction,
                      const std::string& channel, const std::string& type) {
    auto& ports = components.at(component_name(node)).ports;
    Port port{direction, channel, type};
    if (std::find(ports.begin(), ports.end(), port) == ports.end()) {
      ports.push_back(std::move(port));
    }
  };

  LiftResult result;
  RunningSystem& system = result.system;
  system.name = options.name;
  system.compact = options.compact;

  std::set<std::string> consumed;
  if (options.detect_actions) {
    ActionDetection detection = detect_actions(snapshot);
    result.warnings = std::move(detection.warnings);
    for (const auto& candidate : detection.candidates) {
      const auto& evidence = candidate.evidence;
      Action action{candidate.prefix,
                    {evidence[0].type, evidence[3].type, evidence[4].type}};
      std::string action_type = action.data.goal;
      if (ends_with(action_type, "ActionGoal")) {
        action_type.resize(action_type.size() - std::string_view("ActionGoal").size());
      }
      if (candidate.server) {
        add_port(*candidate.server, PortDirection::ActionServe, action.name,
                 action_type);
      }
      for (const auto& client : candidate.clients) {
        add_port(client, PortDirection::ActionCall, action.name, action_type);
      }
      for (const auto& topic : evidence) consumed.insert(topic.name);
      system.declared_actions.push_back(std::move(action));
    }
  }

  for (const auto& topic : snapshot.topics) {
    if (consumed.count(topic.name)) continue;
    system.declared_topics.push_back({topic.name, topic.type});
    for (const auto& n : topic.publishers) {
      add_port(n, PortDirection::Publish, topic.name, topic.type);
    }
    for (const auto& n : topic.subscribers) {
      add_port(n, PortDirection::Subscribe, topic.name, topic.type);
    }
  }

  for (const auto& service : snapshot.services) {
    system.declared_services.push_back(
        {service.name, {service.type + "Request", service.type + "Response"}});
    if (service.server) {
      add_port(*service.server, PortDirection::Serve, service.name, service.type);
    }
    for (const auto& n : service.clients) {
      add_port(n, PortDirection::Call, service.name, service.type);
    }
  }

  if (!options.compact) {
    for (auto name : {kMasterName, kRosoutName}) {
      components.try_emplace(std::string(name),
                             make_component(std::string(name), ComponentKind::Node));
    }
  }
  for (auto& [name, component] : components) {
    std::sort(component.ports.begin(), component.ports.end());
    system.components.push_back(std::move(component));
  }
  return result;
}

}  // namespace meros
