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

#include "meros/diagram.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

namespace meros {

std::optional<RenderMode> parse_render_mode(std::string_view text) {
  if (text == "blocks") return RenderMode::Blocks;
  if (text == "edges") return RenderMode::Edges;
  return std::nullopt;
}

std::optional<RenderLevel> parse_render_level(std::string_view text) {
  if (text == "system") return RenderLevel::System;
  if (text == "medium") return RenderLevel::Medium;
  if (text == "connection") return RenderLevel::Connection;
  return std::nullopt;
}

RenderRefused::RenderRefused(std::vector<Diagnostic> diagnostics)
    : std::runtime_error("model has validation errors"),
      diagnostics_(std::move(diagnostics)) {}

namespace {

std::string dot_quote(std::string_view value) {
  std::string out = "\"";
  for (char c : value) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': break;
      default: out.push_back(c);
    }
  }
  return out + "\"";
}

std::string component_id(const std::string& qualified) { return "c:" + qualified; }
std::string topic_id(const std::string& name) { return "t:" + name; }
std::string cluster_id(const std::string& qualified) { return "cluster_" + qualified; }

// Attributes in the fixed order label, shape, style, then the rest.
struct Attrs {
  std::optional<std::string> label{}, shape{}, style{}, dir{}, lhead{}, ltail{};

  std::string str() const {
    std::vector<std::string> parts;
    auto add = [&](const char* key, const std::optional<std::string>& value) {
      if (value) parts.push_back(std::string(key) + "=" + dot_quote(*value));
    };
    add("label", label);
    add("shape", shape);
    add("style", style);
    add("dir", dir);
    add("lhead", lhead);
    add("ltail", ltail);
    if (parts.empty()) return {};
    std::string out = " [";
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) out += ", ";
      out += parts[i];
    }
    return out + "]";
  }
};

std::string node_stmt(const std::string& id, const Attrs& attrs) {
  return dot_quote(id) + attrs.str() + ";";
}

std::string edge_stmt(const std::string& from, const std::string& to,
                      const Attrs& attrs = {}) {
  return dot_quote(from) + " -> " + dot_quote(to) + attrs.str() + ";";
}

struct Cluster {
  std::string qualified;
  std::string label;
  std::vector<std::string> nodes;
  std::vector<Cluster> children;
};

struct Leaf {
  std::string label;
  std::vector<std::string> containers;  // qualified, outermost first
};

struct MediumInfo {
  std::string qualified;
  std::string owner;  // qualified name of the declaring intrasystem, "" = root
  std::vector<ConnectionRef> members;
};

class Renderer {
 public:
  Renderer(const RunningSystem& system, const RenderOptions& options)
      : system_(system), options_(options) {}

  std::string run() {
    index(system_, "", {});
    for (const auto& c : system_.components) {
      if (role_of(c) != ComponentRole::None && !options_.show_infrastructure) {
        hidden_.insert(c.name);
      }
    }
    connections_ = resolve_connections(system_);

    if (options_.level == RenderLevel::System) {
      render_system_level();
    } else {
      if (options_.level == RenderLevel::Medium) render_mediums();
      for (const auto& connection : connections_) {
        if (collapsed_.count(key(ref_of(connection)))) continue;
        render_connection(connection);
      }
      root_ = build_cluster(system_, "", "");
    }
    return emit();
  }

 private:
  static std::pair<ConnectionKind, std::string> key(const ConnectionRef& ref) {
    return {ref.kind, ref.kind == ConnectionKind::NonRos
                          ? ref.channel
                          : normalize_channel(ref.channel)};
  }

  static std::string qualify(const std::string& prefix, const std::string& name) {
    return prefix.empty() ? name : prefix + "::" + name;
  }

  void index(const Intrasystem& system, const std::string& prefix,
             const std::vector<std::string>& containers) {
    for (const auto& medium : system.mediums) {
      mediums_.push_back({qualify(prefix, medium.name), prefix, medium.members});
    }
    for (const auto& c : system.components) {
      const std::string qualified = qualify(prefix, c.name);
      if (c.kind == ComponentKind::Intrasystem) {
        containers_.insert(qualified);
        auto inner = containers;
        inner.push_back(qualified);
        if (c.nested) index(*c.nested, qualified, inner);
      } else {
        leaves_[qualified] = {c.name, containers};
      }
    }
  }

  bool visible(const std::string& component) const {
    return !hidden_.count(component);
  }

  Cluster build_cluster(const Intrasystem& system, const std::string& prefix,
                        const std::string& label) {
    Cluster cluster{prefix, label, {}, {}};
    for (const auto& c : system.components) {
      const std::string qualified = qualify(prefix, c.name);
      if (c.kind == ComponentKind::Intrasystem) {
        if (c.nested) cluster.children.push_back(build_cluster(*c.nested, qualified, c.name));
      } else if (visible(qualified)) {
        cluster.nodes.push_back(node_stmt(
            component_id(qualified), {.label = c.name, .shape = "ellipse"}));
      }
    }
    std::sort(cluster.nodes.begin(), cluster.nodes.end());
    std::sort(cluster.children.begin(), cluster.children.end(),
              [](const Cluster& a, const Cluster& b) { return a.qualified < b.qualified; });
    return cluster;
  }

  void render_topic(const TopicConnection& topic) {
    if (options_.mode == RenderMode::Blocks) {
      top_nodes_.push_back(node_stmt(topic_id(topic.topic.name),
                                     {.label = topic.topic.name, .shape = "box"}));
      for (const auto& p : topic.publishers) {
        if (visible(p)) edges_.push_back(edge_stmt(component_id(p), topic_id(topic.topic.name)));
      }
      for (const auto& s : topic.subscribers) {
        if (visible(s)) edges_.push_back(edge_stmt(topic_id(topic.topic.name), component_id(s)));
      }
      return;
    }
    for (const auto& p : topic.publishers) {
      for (const auto& s : topic.subscribers) {
        if (visible(p) && visible(s)) {
          edges_.push_back(edge_stmt(component_id(p), component_id(s),
                                     {.label = topic.topic.name}));
        }
      }
    }
  }

  void render_request(const std::string& name, const std::optional<std::string>& server,
                      const std::vector<std::string>& clients, std::string_view tag) {
    if (!server || !visible(*server)) return;
    for (const auto& client : clients) {
      if (!visible(client)) continue;
      edges_.push_back(edge_stmt(component_id(client), component_id(*server),
                                 {.label = name + " [" + std::string(tag) + "]"}));
    }
  }

  void render_connection(const Connection& connection) {
    if (const auto* topic = std::get_if<TopicConnection>(&connection)) {
      render_topic(*topic);
    } else if (const auto* service = std::get_if<ServiceConnection>(&connection)) {
      render_request(service->service.name, service->server, service->clients, "srv");
    } else if (const auto* action = std::get_if<ActionConnection>(&connection)) {
      if (options_.expand_actions) {
        for (const auto& topic :
             expand_action(action->action, action->server, action->clients)) {
          render_topic(topic);
        }
      } else {
        render_request(action->action.name, action->server, action->clients, "action");
      }
    } else if (const auto* link = std::get_if<NonRosConnection>(&connection)) {
      std::vector<std::string> ends;
      for (const auto& e : link->endpoints) {
        if (visible(e)) ends.push_back(e);
      }
      for (std::size_t i = 1; i < ends.size(); ++i) {
        edges_.push_back(edge_stmt(component_id(ends[0]), component_id(ends[i]),
                                   {.label = link->label + " [nonros]",
                                    .style = "dotted",
                                    .dir = "none"}));
      }
    }
  }

  static std::vector<std::string> endpoints_of(const Connection& connection) {
    std::vector<std::string> out;
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, TopicConnection>) {
            out.insert(out.end(), c.publishers.begin(), c.publishers.end());
            out.insert(out.end(), c.subscribers.begin(), c.subscribers.end());
          } else if constexpr (std::is_same_v<T, NonRosConnection>) {
            out = c.endpoints;
          } else {
            if (c.server) out.push_back(*c.server);
            out.insert(out.end(), c.clients.begin(), c.clients.end());
          }
        },
        connection);
    return out;
  }

  // The component directly inside `owner` that contains `leaf`; outside of
  // `owner` the leaf's top-level ancestor stands in.
  std::string representative(const std::string& leaf, const std::string& owner) const {
    const auto& containers = leaves_.at(leaf).containers;
    if (owner.empty()) return containers.empty() ? leaf : containers.front();
    auto it = std::find(containers.begin(), containers.end(), owner);
    if (it == containers.end()) return containers.empty() ? leaf : containers.front();
    ++it;
    return it == containers.end() ? leaf : *it;
  }

  // Edge anchor for a representative: the component itself, or for a
  // container its first visible leaf together with the cluster to clip at.
  std::optional<std::pair<std::string, std::optional<std::string>>> anchor(
      const std::string& rep) const {
    if (!containers_.count(rep)) return std::pair{component_id(rep), std::optional<std::string>{}};
    for (const auto& [name, leaf] : leaves_) {
      if (!visible(name)) continue;
      if (std::find(leaf.containers.begin(), leaf.containers.end(), rep) !=
          leaf.containers.end()) {
        return std::pair{component_id(name), std::optional<std::string>{cluster_id(rep)}};
      }
    }
    return std::nullopt;
  }

  std::set<std::string> medium_endpoints(const MediumInfo& medium,
                                         const std::string& owner) const {
    std::set<std::pair<ConnectionKind, std::string>> members;
    for (const auto& ref : medium.members) members.insert(key(ref));
    std::set<std::string> reps;
    for (const auto& connection : connections_) {
      if (!members.count(key(ref_of(connection)))) continue;
      for (const auto& e : endpoints_of(connection)) {
        if (visible(e)) reps.insert(representative(e, owner));
      }
    }
    return reps;
  }

  void medium_edges(const MediumInfo& medium, const std::vector<std::string>& ends) {
    const std::string& name = medium.qualified;
    if (ends.size() == 1 || ends.size() == 2) {
      auto from = anchor(ends.front());
      auto to = anchor(ends.back());
      if (!from || !to) return;
      edges_.push_back(edge_stmt(from->first, to->first,
                                 {.label = name, .style = "dashed", .dir = "none",
                                  .lhead = to->second, .ltail = from->second}));
      return;
    }
    const std::string hub = "m:" + name;
    top_nodes_.push_back(node_stmt(hub, {.label = name, .shape = "diamond", .style = "dashed"}));
    for (const auto& end : ends) {
      auto a = anchor(end);
      if (!a) continue;
      edges_.push_back(edge_stmt(hub, a->first,
                                 {.style = "dashed", .dir = "none", .lhead = a->second}));
    }
  }

  void render_mediums() {
    for (const auto& medium : mediums_) {
      for (const auto& ref : medium.members) collapsed_.insert(key(ref));
      auto reps = medium_endpoints(medium, medium.owner);
      medium_edges(medium, {reps.begin(), reps.end()});
    }
  }

  void render_system_level() {
    for (const auto& c : system_.components) {
      if (c.kind == ComponentKind::Intrasystem) {
        top_nodes_.push_back(node_stmt(component_id(c.name),
                                       {.label = c.name, .shape = "folder"}));
      }
    }
    for (const auto& medium : mediums_) {
      std::vector<std::string> ends;
      for (const auto& rep : medium_endpoints(medium, "")) {
        if (containers_.count(rep)) ends.push_back(rep);
      }
      if (ends.size() < 2) continue;
      if (ends.size() == 2) {
        edges_.push_back(edge_stmt(component_id(ends[0]), component_id(ends[1]),
                                   {.label = medium.qualified, .style = "dashed",
                                    .dir = "none"}));
        continue;
      }
      const std::string hub = "m:" + medium.qualified;
      top_nodes_.push_back(node_stmt(
          hub, {.label = medium.qualified, .shape = "diamond", .style = "dashed"}));
      for (const auto& end : ends) {
        edges_.push_back(edge_stmt(hub, component_id(end),
                                   {.style = "dashed", .dir = "none"}));
      }
    }
  }

  void emit_cluster(const Cluster& cluster, int depth, std::string& out) const {
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    out += pad + "subgraph " + dot_quote(cluster_id(cluster.qualified)) + " {\n";
    out += pad + "  label=" + dot_quote(cluster.label) + ";\n";
    for (const auto& stmt : cluster.nodes) out += pad + "  " + stmt + "\n";
    for (const auto& child : cluster.children) emit_cluster(child, depth + 1, out);
    out += pad + "}\n";
  }

  std::string emit() {
    std::string out = "digraph " + dot_quote(system_.name) + " {\n";
    out += "  compound=true;\n";
    std::vector<std::string> nodes = top_nodes_;
    nodes.insert(nodes.end(), root_.nodes.begin(), root_.nodes.end());
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    for (const auto& stmt : nodes) out += "  " + stmt + "\n";
    for (const auto& child : root_.children) emit_cluster(child, 1, out);
    std::sort(edges_.begin(), edges_.end());
    for (const auto& stmt : edges_) out += "  " + stmt + "\n";
    out += "}\n";
    return out;
  }

  const RunningSystem& system_;
  RenderOptions options_;
  std::map<std::string, Leaf> leaves_;
  std::set<std::string> containers_;
  std::set<std::string> hidden_;
  std::vector<MediumInfo> mediums_;
  std::vector<Connection> connections_;
  std::set<std::pair<ConnectionKind, std::string>> collapsed_;
  std::vector<std::string> top_nodes_;
  std::vector<std::string> edges_;
  Cluster root_;
};

}  // namespace

std::string render(const RunningSystem& system, const RenderOptions& options) {
  auto diagnostics = validate(system);
  if (has_errors(diagnostics)) throw RenderRefused(std::move(diagnostics));
  return Renderer(system, options).run();
}

}  // namespace meros
