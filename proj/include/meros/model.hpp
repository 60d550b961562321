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

// Core MeROS data model: running systems, intrasystems, communicating
// components, communication methods, and developer workspaces.
//
// All values are plain aggregates. Operations in this header never mutate
// their arguments; they return new values.

#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace meros {

enum class Severity { Error, Warning };

enum class ComponentKind { Node, Nodelet, Plugin, Library, NonRos, Intrasystem };

enum class PortDirection {
  Publish,
  Subscribe,
  Serve,
  Call,
  ActionServe,
  ActionCall,
  NonRos,
};

enum class ConnectionKind { Topic, Service, Action, NonRos };

// Master and rosout are ordinary nodes distinguished by name.
enum class ComponentRole { None, Master, Rosout };

inline constexpr std::string_view kMasterName = "ROS master";
inline constexpr std::string_view kRosoutName = "rosout";

// Payload types of the two action topics that do not carry user data.
inline constexpr std::string_view kCancelPayloadType = "actionlib_msgs/GoalID";
inline constexpr std::string_view kStatusPayloadType =
    "actionlib_msgs/GoalStatusArray";

std::string_view to_string(Severity severity);
std::string_view to_string(ComponentKind kind);
std::string_view to_string(PortDirection direction);
std::string_view to_string(ConnectionKind kind);

ConnectionKind connection_kind_of(PortDirection direction);

enum class ErrorCode {
  InvalidIdentifier,
  DuplicateComponent,
  DuplicateMedium,
  UnknownComponent,
  MultipleServers,
  DanglingMediumMember,
};

std::string_view to_string(ErrorCode code);

class ModelError : public std::runtime_error {
 public:
  ModelError(ErrorCode code, std::string message,
             std::vector<std::string> subjects = {});

  ErrorCode code() const { return code_; }
  // Element names involved in the failure, e.g. both servers for
  // MultipleServers.
  const std::vector<std::string>& subjects() const { return subjects_; }

 private:
  ErrorCode code_;
  std::vector<std::string> subjects_;
};

struct Port {
  PortDirection direction = PortDirection::Publish;
  std::string channel;
  std::string payload_type;

  friend bool operator==(const Port&, const Port&) = default;
  friend auto operator<=>(const Port&, const Port&) = default;
};

struct Topic {
  std::string name;
  std::string message;

  friend bool operator==(const Topic&, const Topic&) = default;
  friend auto operator<=>(const Topic&, const Topic&) = default;
};

struct ServiceDataStructure {
  std::string request;
  std::string response;

  friend bool operator==(const ServiceDataStructure&,
                         const ServiceDataStructure&) = default;
  friend auto operator<=>(const ServiceDataStructure&,
                          const ServiceDataStructure&) = default;
};

struct Service {
  std::string name;
  ServiceDataStructure data;

  friend bool operator==(const Service&, const Service&) = default;
  friend auto operator<=>(const Service&, const Service&) = default;
};

// Message types of the goal, feedback and result topics of an action.
struct ActionDataStructure {
  std::string goal;
  std::string feedback;
  std::string result;

  friend bool operator==(const ActionDataStructure&,
                         const ActionDataStructure&) = default;
  friend auto operator<=>(const ActionDataStructure&,
                          const ActionDataStructure&) = default;
};

struct Action {
  std::string name;
  ActionDataStructure data;

  friend bool operator==(const Action&, const Action&) = default;
  friend auto operator<=>(const Action&, const Action&) = default;
};

struct ConnectionRef {
  ConnectionKind kind = ConnectionKind::Topic;
  std::string channel;

  friend bool operator==(const ConnectionRef&, const ConnectionRef&) = default;
  friend auto operator<=>(const ConnectionRef&, const ConnectionRef&) = default;
};

struct CommMedium {
  std::string name;
  std::vector<ConnectionRef> members;

  friend bool operator==(const CommMedium&, const CommMedium&) = default;
};

struct Intrasystem;

struct CommunicatingComponent {
  std::string name;
  ComponentKind kind = ComponentKind::Node;
  std::vector<Port> ports;
  std::optional<std::string> manager;  // Nodelet only
  std::optional<std::string> host;     // Plugin only
  // Present iff kind == Intrasystem. Shared because values are immutable.
  std::shared_ptr<const Intrasystem> nested;

  friend bool operator==(const CommunicatingComponent& a,
                         const CommunicatingComponent& b);
};

struct Intrasystem {
  std::string name;
  std::vector<CommunicatingComponent> components;
  std::vector<CommMedium> mediums;
  std::vector<Topic> declared_topics;
  std::vector<Service> declared_services;
  std::vector<Action> declared_actions;

  friend bool operator==(const Intrasystem&, const Intrasystem&) = default;
};

struct RunningSystem : Intrasystem {
  // Master/rosout elision, as used for compact diagrams.
  bool compact = false;

  friend bool operator==(const RunningSystem&, const RunningSystem&) = default;
};

struct Package {
  std::string name;
  std::vector<std::string> nodes;
  std::vector<std::string> nodelets;
  std::vector<std::string> plugins;
  std::vector<std::string> libraries;
  std::vector<std::string> msg_data;
  std::vector<std::string> srv_data;
  std::vector<std::string> action_data;
  std::vector<std::string> misc;

  friend bool operator==(const Package&, const Package&) = default;
};

struct Metapackage {
  std::string name;
  std::vector<std::string> packages;
  // Files owned directly by the metapackage. Conforming models keep this
  // empty; it exists so that violations can be represented and reported.
  std::vector<std::string> misc;

  friend bool operator==(const Metapackage&, const Metapackage&) = default;
};

struct Workspace {
  std::string name;
  std::vector<Package> packages;
  std::vector<Metapackage> metapackages;

  friend bool operator==(const Workspace&, const Workspace&) = default;
};

struct RosSystem {
  std::string name;
  std::vector<Workspace> workspaces;
  std::vector<RunningSystem> running_systems;

  friend bool operator==(const RosSystem&, const RosSystem&) = default;
};

// ---------------------------------------------------------------------------
// Connections

struct TopicConnection {
  Topic topic;
  std::vector<std::string> publishers;
  std::vector<std::string> subscribers;

  friend bool operator==(const TopicConnection&,
                         const TopicConnection&) = default;
};

struct ServiceConnection {
  Service service;
  std::optional<std::string> server;
  std::vector<std::string> clients;

  friend bool operator==(const ServiceConnection&,
                         const ServiceConnection&) = default;
};

struct ActionConnection {
  Action action;
  std::optional<std::string> server;
  std::vector<std::string> clients;

  friend bool operator==(const ActionConnection&,
                         const ActionConnection&) = default;
};

struct NonRosConnection {
  std::string label;
  std::vector<std::string> endpoints;

  friend bool operator==(const NonRosConnection&,
                         const NonRosConnection&) = default;
};

using Connection = std::variant<TopicConnection, ServiceConnection,
                                ActionConnection, NonRosConnection>;

ConnectionKind kind_of(const Connection& connection);
const std::string& channel_of(const Connection& connection);
ConnectionRef ref_of(const Connection& connection);

// One endpoint of a channel as seen from the ports of a flattened component.
struct Endpoint {
  std::string component;  // qualified name
  std::string payload_type;

  friend bool operator==(const Endpoint&, const Endpoint&) = default;
  friend auto operator<=>(const Endpoint&, const Endpoint&) = default;
};

// Everything known about one channel, without enforcing any rule. Providers
// are publishers, servers, or non-ROS endpoints; consumers are subscribers
// or clients. Endpoint lists are sorted.
struct ChannelUse {
  ConnectionKind kind = ConnectionKind::Topic;
  std::string name;
  std::vector<Endpoint> providers;
  std::vector<Endpoint> consumers;
  // All declarations of this channel found in the system and its nested
  // intrasystems, sorted.
  std::vector<Topic> topic_decls;
  std::vector<Service> service_decls;
  std::vector<Action> action_decls;
};

// Lenient channel table, sorted by (kind, name). Used by the validator to
// report rule violations that resolve_connections would reject outright.
std::vector<ChannelUse> collect_channels(const Intrasystem& system);

// ---------------------------------------------------------------------------
// Operations

// ROS names without a leading slash resolve against the global namespace.
std::string normalize_channel(std::string_view channel);

ComponentRole role_of(const CommunicatingComponent& component);

CommunicatingComponent make_component(std::string name, ComponentKind kind,
                                      std::vector<Port> ports = {});
CommunicatingComponent make_intrasystem_component(Intrasystem nested);

RunningSystem new_running_system(std::string name, bool compact);

// Throws ModelError(DuplicateComponent) or (InvalidIdentifier).
Intrasystem add_component(const Intrasystem& system,
                          CommunicatingComponent component);
RunningSystem add_component(const RunningSystem& system,
                            CommunicatingComponent component);

// Throws ModelError(UnknownComponent) when no such top-level component.
Intrasystem remove_component(const Intrasystem& system, std::string_view name);

// Depth-first enumeration of leaf components, qualified as outer::inner and
// sorted by qualified name. Returned components carry no nested system.
std::vector<CommunicatingComponent> flatten(const Intrasystem& system);

// Number of components at every nesting level, containers included.
std::size_t count_components(const Intrasystem& system);

// Throws ModelError(MultipleServers) naming the channel and both servers.
std::vector<Connection> resolve_connections(const Intrasystem& system);

// The five topics an action is carried on, in the order goal, cancel,
// status, feedback, result.
std::vector<TopicConnection> expand_action(
    const Action& action, const std::optional<std::string>& server,
    const std::vector<std::string>& clients);

inline constexpr std::string_view kActionSuffixes[] = {
    "goal", "cancel", "status", "feedback", "result"};

// Action data derived from an action type name such as "pkg/MoveBase".
ActionDataStructure action_data_for_type(std::string_view action_type);

bool resolves(const Intrasystem& system, const ConnectionRef& ref);

// Throws ModelError(DanglingMediumMember) for an empty or unresolved member
// list and ModelError(DuplicateMedium) for a reused name.
Intrasystem group_medium(const Intrasystem& system, std::string name,
                         std::vector<ConnectionRef> refs);
RunningSystem group_medium(const RunningSystem& system, std::string name,
                           std::vector<ConnectionRef> refs);

struct SystemStats {
  std::map<ComponentKind, std::size_t> components_by_kind;
  std::size_t topics = 0;
  std::size_t services = 0;
  std::size_t actions = 0;
  std::size_t mediums = 0;
  std::size_t packages = 0;
  std::size_t metapackages = 0;

  std::size_t components() const;
  // Stable `key: count` view, sorted by key.
  std::vector<std::pair<std::string, std::size_t>> entries() const;

  friend bool operator==(const SystemStats&, const SystemStats&) = default;
};

SystemStats compute_stats(const RosSystem& system);

// Copy with every list sorted, recursively. Two models are structurally
// equal when their canonical forms compare equal, ignoring the root name.
RosSystem canonicalize(const RosSystem& system);
bool structurally_equal(const RosSystem& a, const RosSystem& b);

}  // namespace meros
