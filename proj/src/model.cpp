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

#include "meros/model.hpp"

#include <algorithm>
#include <set>
#include <tuple>
#include <utility>

namespace meros {

std::string_view to_string(Severity severity) {
  return severity == Severity::Error ? "error" : "warning";
}

std::string_view to_string(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::Node: return "node";
    case ComponentKind::Nodelet: return "nodelet";
    case ComponentKind::Plugin: return "plugin";
    case ComponentKind::Library: return "library";
    case ComponentKind::NonRos: return "nonros";
    case ComponentKind::Intrasystem: return "intrasystem";
  }
  return "?";
}

std::string_view to_string(PortDirection direction) {
  switch (direction) {
    case PortDirection::Publish: return "publishes";
    case PortDirection::Subscribe: return "subscribes";
    case PortDirection::Serve: return "serves";
    case PortDirection::Call: return "calls";
    case PortDirection::ActionServe: return "provides_action";
    case PortDirection::ActionCall: return "uses_action";
    case PortDirection::NonRos: return "nonros_link";
  }
  return "?";
}

std::string_view to_string(ConnectionKind kind) {
  switch (kind) {
    case ConnectionKind::Topic: return "topic";
    case ConnectionKind::Service: return "service";
    case ConnectionKind::Action: return "action";
    case ConnectionKind::NonRos: return "nonros";
  }
  return "?";
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidIdentifier: return "invalid-identifier";
    case ErrorCode::DuplicateComponent: return "duplicate-component";
    case ErrorCode::DuplicateMedium: return "duplicate-medium";
    case ErrorCode::UnknownComponent: return "unknown-component";
    case ErrorCode::MultipleServers: return "multiple-server";
    case ErrorCode::DanglingMediumMember: return "dangling-medium-member";
  }
  return "?";
}

ModelError::ModelError(ErrorCode code, std::string message,
                       std::vector<std::string> subjects)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      subjects_(std::move(subjects)) {}

ConnectionKind connection_kind_of(PortDirection direction) {
  switch (direction) {
    case PortDirection::Publish:
    case PortDirection::Subscribe: return ConnectionKind::Topic;
    case PortDirection::Serve:
    case PortDirection::Call: return ConnectionKind::Service;
    case PortDirection::ActionServe:
    case PortDirection::ActionCall: return ConnectionKind::Action;
    case PortDirection::NonRos: return ConnectionKind::NonRos;
  }
  return ConnectionKind::NonRos;
}

namespace {

bool is_provider(PortDirection direction) {
  return direction == PortDirection::Publish ||
         direction == PortDirection::Serve ||
         direction == PortDirection::ActionServe ||
         direction == PortDirection::NonRos;
}

std::string channel_key(ConnectionKind kind, std::string_view channel) {
  return kind == ConnectionKind::NonRos ? std::string(channel)
                                        : normalize_channel(channel);
}

template <typename T>
void sort_unique(std::vector<T>& values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
}

std::vector<std::string> component_names(const std::vector<Endpoint>& ends) {
  std::vector<std::string> names;
  names.reserve(ends.size());
  for (const auto& end : ends) names.push_back(end.component);
  sort_unique(names);
  return names;
}

std::string qualify(const std::string& prefix, const std::string& name) {
  return prefix.empty() ? name : prefix + "::" + name;
}

using ChannelMap = std::map<std::pair<ConnectionKind, std::string>, ChannelUse>;

ChannelUse& use_for(ChannelMap& channels, ConnectionKind kind,
                    std::string_view channel) {
  auto key = std::make_pair(kind, channel_key(kind, channel));
  auto [it, inserted] = channels.try_emplace(key);
  if (inserted) {
    it->second.kind = kind;
    it->second.name = key.second;
  }
  return it->second;
}

void collect_into(const Intrasystem& system, const std::string& prefix,
                  ChannelMap& channels) {
  for (const auto& topic : system.declared_topics) {
    use_for(channels, ConnectionKind::Topic, topic.name)
        .topic_decls.push_back(topic);
  }
  for (const auto& service : system.declared_services) {
    use_for(channels, ConnectionKind::Service, service.name)
        .service_decls.push_back(service);
  }
  for (const auto& action : system.declared_actions) {
    use_for(channels, ConnectionKind::Action, action.name)
        .action_decls.push_back(action);
  }
  for (const auto& component : system.components) {
    const std::string qualified = qualify(prefix, component.name);
    if (component.kind == ComponentKind::Intrasystem) {
      if (component.nested) collect_into(*component.nested, qualified, channels);
      continue;
    }
    for (const auto& port : component.ports) {
      ChannelUse& use = use_for(channels, connection_kind_of(port.direction),
                                port.channel);
      Endpoint end{qualified, port.payload_type};
      if (is_provider(port.direction)) {
        use.providers.push_back(std::move(end));
      } else {
        use.consumers.push_back(std::move(end));
      }
    }
  }
}

// Payload type observed on a channel: declaration first, then ports in
// sorted order.
std::string observed_payload(const ChannelUse& use) {
  if (!use.providers.empty()) return use.providers.front().payload_type;
  if (!use.consumers.empty()) return use.consumers.front().payload_type;
  return {};
}

void collect_leaves(const Intrasystem& system, const std::string& prefix,
                    std::vector<CommunicatingComponent>& out) {
  for (const auto& component : system.components) {
    std::string qualified = qualify(prefix, component.name);
    if (component.kind == ComponentKind::Intrasystem) {
      if (component.nested) collect_leaves(*component.nested, qualified, out);
      continue;
    }
    CommunicatingComponent leaf = component;
    leaf.name = std::move(qualified);
    leaf.nested.reset();
    out.push_back(std::move(leaf));
  }
}

void require_identifier(std::string_view name, std::string_view what) {
  if (name.empty()) {
    throw ModelError(ErrorCode::InvalidIdentifier,
                     std::string(what) + " name must not be empty");
  }
}

void count_into(const Intrasystem& system,
                std::map<ComponentKind, std::size_t>& counts,
                std::size_t& mediums) {
  mediums += system.mediums.size();
  for (const auto& component : system.components) {
    ++counts[component.kind];
    if (component.kind == ComponentKind::Intrasystem && component.nested) {
      count_into(*component.nested, counts, mediums);
    }
  }
}

Intrasystem canonical_intrasystem(const Intrasystem& system);

CommunicatingComponent canonical_component(const CommunicatingComponent& c) {
  CommunicatingComponent out = c;
  std::sort(out.ports.begin(), out.ports.end());
  if (out.nested) {
    out.nested = std::make_shared<const Intrasystem>(
        canonical_intrasystem(*out.nested));
  }
  return out;
}

Intrasystem canonical_intrasystem(const Intrasystem& system) {
  Intrasystem out;
  out.name = system.name;
  for (const auto& component : system.components) {
    out.components.push_back(canonical_component(component));
  }
  std::sort(out.components.begin(), out.components.end(),
            [](const auto& a, const auto& b) { return a.name < b.name; });
  out.mediums = system.mediums;
  for (auto& medium : out.mediums) {
    std::sort(medium.members.begin(), medium.members.end());
  }
  std::sort(out.mediums.begin(), out.mediums.end(),
            [](const auto& a, const auto& b) { return a.name < b.name; });
  out.declared_topics = system.declared_topics;
  std::sort(out.declared_topics.begin(), out.declared_topics.end());
  out.declared_services = system.declared_services;
  std::sort(out.declared_services.begin(), out.declared_services.end());
  out.declared_actions = system.declared_actions;
  std::sort(out.declared_actions.begin(), out.declared_actions.end());
  return out;
}

}  // namespace

bool operator==(const CommunicatingComponent& a,
                const CommunicatingComponent& b) {
  if (std::tie(a.name, a.kind, a.ports, a.manager, a.host) !=
      std::tie(b.name, b.kind, b.ports, b.manager, b.host)) {
    return false;
  }
  if (!a.nested || !b.nested) return !a.nested && !b.nested;
  return *a.nested == *b.nested;
}

ConnectionKind kind_of(const Connection& connection) {
  return std::visit(
      [](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, TopicConnection>) {
          return ConnectionKind::Topic;
        } else if constexpr (std::is_same_v<T, ServiceConnection>) {
          return ConnectionKind::Service;
        } else if constexpr (std::is_same_v<T, ActionConnection>) {
          return ConnectionKind::Action;
        } else {
          return ConnectionKind::NonRos;
        }
      },
      connection);
}

const std::string& channel_of(const Connection& connection) {
  return std::visit(
      [](const auto& c) -> const std::string& {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, TopicConnection>) {
          return c.topic.name;
        } else if constexpr (std::is_same_v<T, ServiceConnection>) {
          return c.service.name;
        } else if constexpr (std::is_same_v<T, ActionConnection>) {
          return c.action.name;
        } else {
          return c.label;
        }
      },
      connection);
}

ConnectionRef ref_of(const Connection& connection) {
  return {kind_of(connection), channel_of(connection)};
}

std::string normalize_channel(std::string_view channel) {
  if (channel.empty() || channel.front() == '/') return std::string(channel);
  return "/" + std::string(channel);
}

ComponentRole role_of(const CommunicatingComponent& component) {
  if (component.kind != ComponentKind::Node) return ComponentRole::None;
  if (component.name == kMasterName) return ComponentRole::Master;
  if (component.name == kRosoutName) return ComponentRole::Rosout;
  return ComponentRole::None;
}

CommunicatingComponent make_component(std::string name, ComponentKind kind,
                                      std::vector<Port> ports) {
  CommunicatingComponent component;
  component.name = std::move(name);
  component.kind = kind;
  component.ports = std::move(ports);
  return component;
}

CommunicatingComponent make_intrasystem_component(Intrasystem nested) {
  CommunicatingComponent component;
  component.name = nested.name;
  component.kind = ComponentKind::Intrasystem;
  component.nested = std::make_shared<const Intrasystem>(std::move(nested));
  return component;
}

RunningSystem new_running_system(std::string name, bool compact) {
  require_identifier(name, "running system");
  RunningSystem system;
  system.name = std::move(name);
  system.compact = compact;
  if (!compact) {
    system.components.push_back(
        make_component(std::string(kMasterName), ComponentKind::Node));
    system.components.push_back(
        make_component(std::string(kRosoutName), ComponentKind::Node));
  }
  return system;
}

Intrasystem add_component(const Intrasystem& system,
                          CommunicatingComponent component) {
  require_identifier(component.name, "component");
  for (const auto& existing : system.components) {
    if (existing.name == component.name) {
      throw ModelError(ErrorCode::DuplicateComponent,
                       "component '" + component.name + "' already exists in '" +
                           system.name + "'",
                       {component.name});
    }
  }
  if ((component.kind == ComponentKind::Intrasystem) != bool(component.nested)) {
    throw ModelError(ErrorCode::InvalidIdentifier,
                     "component '" + component.name +
                         "' must carry a nested system iff it is an intrasystem",
                     {component.name});
  }
  Intrasystem out = system;
  out.components.push_back(std::move(component));
  return out;
}

RunningSystem add_component(const RunningSystem& system,
                            CommunicatingComponent component) {
  RunningSystem out;
  static_cast<Intrasystem&>(out) =
      add_component(static_cast<const Intrasystem&>(system), std::move(component));
  out.compact = system.compact;
  return out;
}

Intrasystem remove_component(const Intrasystem& system, std::string_view name) {
  Intrasystem out = system;
  auto it = std::find_if(out.components.begin(), out.components.end(),
                         [&](const auto& c) { return c.name == name; });
  if (it == out.components.end()) {
    throw ModelError(ErrorCode::UnknownComponent,
                     "no component '" + std::string(name) + "' in '" +
                         system.name + "'",
                     {std::string(name)});
  }
  out.components.erase(it);
  return out;
}

std::vector<CommunicatingComponent> flatten(const Intrasystem& system) {
  std::vector<CommunicatingComponent> leaves;
  collect_leaves(system, "", leaves);
  std::sort(leaves.begin(), leaves.end(),
            [](const auto& a, const auto& b) { return a.name < b.name; });
  return leaves;
}

std::size_t count_components(const Intrasystem& system) {
  std::size_t total = 0;
  for (const auto& component : system.components) {
    ++total;
    if (component.nested) total += count_components(*component.nested);
  }
  return total;
}

std::vector<ChannelUse> collect_channels(const Intrasystem& system) {
  ChannelMap channels;
  collect_into(system, "", channels);
  std::vector<ChannelUse> out;
  out.reserve(channels.size());
  for (auto& [key, use] : channels) {
    std::sort(use.providers.begin(), use.providers.end());
    std::sort(use.consumers.begin(), use.consumers.end());
    std::sort(use.topic_decls.begin(), use.topic_decls.end());
    std::sort(use.service_decls.begin(), use.service_decls.end());
    std::sort(use.action_decls.begin(), use.action_decls.end());
    out.push_back(std::move(use));
  }
  return out;
}

ActionDataStructure action_data_for_type(std::string_view action_type) {
  std::string base(action_type);
  return {base + "ActionGoal", base + "ActionFeedback", base + "ActionResult"};
}

std::vector<Connection> resolve_connections(const Intrasystem& system) {
  std::vector<Connection> connections;
  for (const auto& use : collect_channels(system)) {
    switch (use.kind) {
      case ConnectionKind::Topic: {
        TopicConnection c;
        c.topic.name = use.name;
        c.topic.message = use.topic_decls.empty()
                              ? observed_payload(use)
                              : use.topic_decls.front().message;
        c.publishers = component_names(use.providers);
        c.subscribers = component_names(use.consumers);
        connections.emplace_back(std::move(c));
        break;
      }
      case ConnectionKind::Service:
      case ConnectionKind::Action: {
        auto servers = component_names(use.providers);
        if (servers.size() > 1) {
          std::vector<std::string> subjects{use.name};
          subjects.insert(subjects.end(), servers.begin(), servers.end());
          throw ModelError(ErrorCode::MultipleServers,
                           std::string(to_string(use.kind)) + " '" + use.name +
                               "' has servers " + servers[0] + " and " +
                               servers[1],
                           std::move(subjects));
        }
        std::optional<std::string> server;
        if (!servers.empty()) server = servers.front();
        if (use.kind == ConnectionKind::Service) {
          ServiceConnection c;
          if (!use.service_decls.empty()) {
            c.service = use.service_decls.front();
          } else {
            const std::string type = observed_payload(use);
            c.service = {use.name, {type + "Request", type + "Response"}};
          }
          c.service.name = use.name;
          c.server = std::move(server);
          c.clients = component_names(use.consumers);
          connections.emplace_back(std::move(c));
        } else {
          ActionConnection c;
          if (!use.action_decls.empty()) {
            c.action = use.action_decls.front();
          } else {
            c.action = {use.name, action_data_for_type(observed_payload(use))};
          }
          c.action.name = use.name;
          c.server = std::move(server);
          c.clients = component_names(use.consumers);
          connections.emplace_back(std::move(c));
        }
        break;
      }
      case ConnectionKind::NonRos: {
        NonRosConnection c;
        c.label = use.name;
        c.endpoints = component_names(use.providers);
        connections.emplace_back(std::move(c));
        break;
      }
    }
  }
  return connections;
}

std::vector<TopicConnection> expand_action(
    const Action& action, const std::optional<std::string>& server,
    const std::vector<std::string>& clients) {
  std::vector<std::string> server_side;
  if (server) server_side.push_back(*server);
  std::vector<std::string> client_side = clients;
  sort_unique(client_side);

  const std::string base = normalize_channel(action.name);
  const std::string payloads[] = {
      action.data.goal, std::string(kCancelPayloadType),
      std::string(kStatusPayloadType), action.data.feedback, action.data.result};

  std::vector<TopicConnection> topics;
  for (std::size_t i = 0; i < std::size(kActionSuffixes); ++i) {
    TopicConnection c;
    c.topic.name = base + "/" + std::string(kActionSuffixes[i]);
    c.topic.message = payloads[i];
    // goal and cancel form the request half; the rest flow back.
    const bool request = i < 2;
    c.publishers = request ? client_side : server_side;
    c.subscribers = request ? server_side : client_side;
    topics.push_back(std::move(c));
  }
  return topics;
}

bool resolves(const Intrasystem& system, const ConnectionRef& ref) {
  const std::string key = channel_key(ref.kind, ref.channel);
  for (const auto& use : collect_channels(system)) {
    if (use.kind == ref.kind && use.name == key) return true;
  }
  return false;
}

Intrasystem group_medium(const Intrasystem& system, std::string name,
                         std::vector<ConnectionRef> refs) {
  require_identifier(name, "medium");
  for (const auto& medium : system.mediums) {
    if (medium.name == name) {
      throw ModelError(ErrorCode::DuplicateMedium,
                       "medium '" + name + "' already exists", {name});
    }
  }
  if (refs.empty()) {
    throw ModelError(ErrorCode::DanglingMediumMember,
                     "medium '" + name + "' has no members", {name});
  }
  for (const auto& ref : refs) {
    if (!resolves(system, ref)) {
      throw ModelError(ErrorCode::DanglingMediumMember,
                       "medium '" + name + "' member " +
                           std::string(to_string(ref.kind)) + " '" +
                           ref.channel + "' resolves to no connection",
                       {name, ref.channel});
    }
  }
  Intrasystem out = system;
  out.mediums.push_back({std::move(name), std::move(refs)});
  return out;
}

RunningSystem group_medium(const RunningSystem& system, std::string name,
                           std::vector<ConnectionRef> refs) {
  RunningSystem out;
  static_cast<Intrasystem&>(out) = group_medium(
      static_cast<const Intrasystem&>(system), std::move(name), std::move(refs));
  out.compact = system.compact;
  return out;
}

std::size_t SystemStats::components() const {
  std::size_t total = 0;
  for (const auto& [kind, count] : components_by_kind) total += count;
  return total;
}

std::vector<std::pair<std::string, std::size_t>> SystemStats::entries() const {
  std::vector<std::pair<std::string, std::size_t>> out;
  for (auto kind : {ComponentKind::Node, ComponentKind::Nodelet,
                    ComponentKind::Plugin, ComponentKind::Library,
                    ComponentKind::NonRos, ComponentKind::Intrasystem}) {
    auto it = components_by_kind.find(kind);
    out.emplace_back("components." + std::string(to_string(kind)),
                     it == components_by_kind.end() ? 0 : it->second);
  }
  out.emplace_back("actions", actions);
  out.emplace_back("components", components());
  out.emplace_back("mediums", mediums);
  out.emplace_back("metapackages", metapackages);
  out.emplace_back("packages", packages);
  out.emplace_back("services", services);
  out.emplace_back("topics", topics);
  std::sort(out.begin(), out.end());
  return out;
}

SystemStats compute_stats(const RosSystem& system) {
  SystemStats stats;
  for (const auto& running : system.running_systems) {
    count_into(running, stats.components_by_kind, stats.mediums);
    for (const auto& use : collect_channels(running)) {
      switch (use.kind) {
        case ConnectionKind::Topic: ++stats.topics; break;
        case ConnectionKind::Service: ++stats.services; break;
        case ConnectionKind::Action: ++stats.actions; break;
        case ConnectionKind::NonRos: break;
      }
    }
  }
  for (const auto& workspace : system.workspaces) {
    stats.packages += workspace.packages.size();
    stats.metapackages += workspace.metapackages.size();
  }
  return stats;
}

RosSystem canonicalize(const RosSystem& system) {
  RosSystem out;
  out.name = system.name;
  for (const auto& running : system.running_systems) {
    RunningSystem r;
    static_cast<Intrasystem&>(r) = canonical_intrasystem(running);
    r.compact = running.compact;
    out.running_systems.push_back(std::move(r));
  }
  std::sort(out.running_systems.begin(), out.running_systems.end(),
            [](const auto& a, const auto& b) { return a.name < b.name; });
  for (auto workspace : system.workspaces) {
    for (auto& p : workspace.packages) {
      for (auto* list : {&p.nodes, &p.nodelets, &p.plugins, &p.libraries,
                         &p.msg_data, &p.srv_data, &p.action_data, &p.misc}) {
        std::sort(list->begin(), list->end());
      }
    }
    std::sort(workspace.packages.begin(), workspace.packages.end(),
              [](const auto& a, const auto& b) { return a.name < b.name; });
    for (auto& m : workspace.metapackages) {
      std::sort(m.packages.begin(), m.packages.end());
      std::sort(m.misc.begin(), m.misc.end());
    }
    std::sort(workspace.metapackages.begin(), workspace.metapackages.end(),
              [](const auto& a, const auto& b) { return a.name < b.name; });
    out.workspaces.push_back(std::move(workspace));
  }
  std::sort(out.workspaces.begin(), out.workspaces.end(),
            [](const auto& a, const auto& b) { return a.name < b.name; });
  return out;
}

bool structurally_equal(const RosSystem& a, const RosSystem& b) {
  RosSystem ca = canonicalize(a);
  RosSystem cb = canonicalize(b);
  ca.name.clear();
  cb.name.clear();
  return ca == cb;
}

}  // namespace meros
