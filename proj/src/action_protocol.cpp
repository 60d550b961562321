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

#include "meros/action_protocol.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace meros {

namespace {

constexpr std::string_view kStandardTable = R"(
# Goal state transitions of the ROS 1 action protocol.
# <machine> <state> <event> <next-state>

# Server
server Pending SetAccepted Active
server Pending SetRejected Rejected
server Pending SendCancel Recalling
server Recalling SetCancelled Recalled
server Recalling SetRejected Rejected
server Recalling SetAccepted Preempting
server Active SetSucceeded Succeeded
server Active SetAborted Aborted
server Active SendCancel Preempting
server Preempting SetCancelled Preempted
server Preempting SetSucceeded Succeeded
server Preempting SetAborted Aborted

# Client
client WaitingForGoalAck StatusUpdate:Pending Pending
client WaitingForGoalAck StatusUpdate:Active Active
client WaitingForGoalAck StatusUpdate:Recalling Recalling
client WaitingForGoalAck StatusUpdate:Preempting Preempting
client WaitingForGoalAck StatusUpdate:Rejected WaitingForResult
client WaitingForGoalAck StatusUpdate:Recalled WaitingForResult
client WaitingForGoalAck StatusUpdate:Preempted WaitingForResult
client WaitingForGoalAck StatusUpdate:Succeeded WaitingForResult
client WaitingForGoalAck StatusUpdate:Aborted WaitingForResult
client WaitingForGoalAck SendCancel WaitingForCancelAck
client Pending StatusUpdate:Active Active
client Pending StatusUpdate:Recalling Recalling
client Pending StatusUpdate:Preempting Preempting
client Pending StatusUpdate:Rejected WaitingForResult
client Pending StatusUpdate:Recalled WaitingForResult
client Pending StatusUpdate:Preempted WaitingForResult
client Pending StatusUpdate:Succeeded WaitingForResult
client Pending StatusUpdate:Aborted WaitingForResult
client Pending SendCancel WaitingForCancelAck
client Active StatusUpdate:Preempting Preempting
client Active StatusUpdate:Rejected WaitingForResult
client Active StatusUpdate:Recalled WaitingForResult
client Active StatusUpdate:Preempted WaitingForResult
client Active StatusUpdate:Succeeded WaitingForResult
client Active StatusUpdate:Aborted WaitingForResult
client Active SendCancel WaitingForCancelAck
client WaitingForCancelAck StatusUpdate:Recalling Recalling
client WaitingForCancelAck StatusUpdate:Preempting Preempting
client WaitingForCancelAck StatusUpdate:Rejected WaitingForResult
client WaitingForCancelAck StatusUpdate:Recalled WaitingForResult
client WaitingForCancelAck StatusUpdate:Preempted WaitingForResult
client WaitingForCancelAck StatusUpdate:Succeeded WaitingForResult
client WaitingForCancelAck StatusUpdate:Aborted WaitingForResult
client Recalling StatusUpdate:Preempting Preempting
client Recalling StatusUpdate:Rejected WaitingForResult
client Recalling StatusUpdate:Recalled WaitingForResult
client Recalling StatusUpdate:Preempted WaitingForResult
client Recalling StatusUpdate:Succeeded WaitingForResult
client Recalling StatusUpdate:Aborted WaitingForResult
client Preempting StatusUpdate:Rejected WaitingForResult
client Preempting StatusUpdate:Recalled WaitingForResult
client Preempting StatusUpdate:Preempted WaitingForResult
client Preempting StatusUpdate:Succeeded WaitingForResult
client Preempting StatusUpdate:Aborted WaitingForResult
client WaitingForResult ReceiveResult Done
)";

constexpr std::string_view kServerNames[] = {
    "Pending",  "Active",    "Recalling", "Preempting", "Rejected",
    "Recalled", "Preempted", "Succeeded", "Aborted"};
constexpr std::string_view kClientNames[] = {
    "WaitingForGoalAck",   "Pending",   "Active",     "WaitingForResult",
    "WaitingForCancelAck", "Recalling", "Preempting", "Done"};
constexpr std::string_view kEventNames[] = {
    "SendGoal",     "SendCancel", "SetAccepted",  "SetRejected",  "SetSucceeded",
    "SetAborted",   "SetCancelled", "StatusUpdate", "ReceiveResult"};

template <typename E, std::size_t N>
std::optional<E> lookup(const std::string_view (&names)[N], std::string_view text) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == text) return static_cast<E>(i);
  }
  return std::nullopt;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string pair_text(std::string_view state, const ProtocolEvent& e) {
  return std::string(state) + "+" + to_string(e) + " undefined";
}

}  // namespace

bool ProtocolEvent::operator<(const ProtocolEvent& o) const {
  if (type != o.type) return type < o.type;
  if (type != EventType::StatusUpdate) return false;
  return status < o.status;
}

std::vector<ProtocolEvent> all_events() {
  std::vector<ProtocolEvent> out;
  for (std::size_t i = 0; i < std::size(kEventNames); ++i) {
    const auto type = static_cast<EventType>(i);
    if (type == EventType::StatusUpdate) {
      for (auto s : kAllServerStates) out.push_back(ProtocolEvent::status_update(s));
    } else {
      out.push_back(ProtocolEvent::of(type));
    }
  }
  return out;
}

bool is_terminal(ServerState s) {
  switch (s) {
    case ServerState::Rejected:
    case ServerState::Recalled:
    case ServerState::Preempted:
    case ServerState::Succeeded:
    case ServerState::Aborted:
      return true;
    default:
      return false;
  }
}

bool is_terminal(ClientState s) { return s == ClientState::Done; }

bool is_client_originated(const ProtocolEvent& e) {
  return e.type == EventType::SendGoal || e.type == EventType::SendCancel;
}

bool is_server_api(const ProtocolEvent& e) {
  switch (e.type) {
    case EventType::SetAccepted:
    case EventType::SetRejected:
    case EventType::SetSucceeded:
    case EventType::SetAborted:
    case EventType::SetCancelled:
      return true;
    default:
      return false;
  }
}

std::string_view to_string(ServerState s) { return kServerNames[static_cast<int>(s)]; }
std::string_view to_string(ClientState s) { return kClientNames[static_cast<int>(s)]; }

std::string to_string(const ProtocolEvent& e) {
  std::string out(kEventNames[static_cast<int>(e.type)]);
  if (e.type == EventType::StatusUpdate) out += ":" + std::string(to_string(e.status));
  return out;
}

std::optional<ServerState> parse_server_state(std::string_view text) {
  return lookup<ServerState>(kServerNames, text);
}

std::optional<ClientState> parse_client_state(std::string_view text) {
  return lookup<ClientState>(kClientNames, text);
}

std::optional<ProtocolEvent> parse_event(std::string_view text) {
  const auto colon = text.find(':');
  if (colon != std::string_view::npos) {
    if (text.substr(0, colon) != "StatusUpdate") return std::nullopt;
    auto s = parse_server_state(text.substr(colon + 1));
    if (!s) return std::nullopt;
    return ProtocolEvent::status_update(*s);
  }
  auto type = lookup<EventType>(kEventNames, text);
  if (!type || *type == EventType::StatusUpdate) return std::nullopt;
  return ProtocolEvent::of(*type);
}

const TransitionTable& TransitionTable::standard() {
  static const TransitionTable table = parse(kStandardTable);
  return table;
}

TransitionTable TransitionTable::parse(std::string_view text) {
  TransitionTable table;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    std::istringstream words(line);
    std::string machine, from, event, to, extra;
    words >> machine >> from >> event >> to;
    auto fail = [&](const std::string& message) {
      throw TableError("line " + std::to_string(line_no) + ": " + message);
    };
    if (to.empty() || (words >> extra)) fail("expected four fields");
    auto e = parse_event(event);
    if (!e) fail("unknown event '" + event + "'");
    if (machine == "server") {
      auto a = parse_server_state(from), b = parse_server_state(to);
      if (!a || !b) fail("unknown server state");
      if (table.next(*a, *e)) fail("duplicate row");
      table.add(*a, *e, *b);
    } else if (machine == "client") {
      auto a = parse_client_state(from), b = parse_client_state(to);
      if (!a || !b) fail("unknown client state");
      if (table.next(*a, *e)) fail("duplicate row");
      table.add(*a, *e, *b);
    } else {
      fail("unknown machine '" + machine + "'");
    }
  }
  return table;
}

void TransitionTable::add(ServerState from, const ProtocolEvent& e, ServerState to) {
  server_[{from, e}] = to;
}

void TransitionTable::add(ClientState from, const ProtocolEvent& e, ClientState to) {
  client_[{from, e}] = to;
}

void TransitionTable::remove(Machine machine, const ProtocolEvent& event) {
  auto drop = [&](auto& rows) {
    for (auto it = rows.begin(); it != rows.end();) {
      it = it->first.second == event ? rows.erase(it) : std::next(it);
    }
  };
  if (machine == Machine::Server) {
    drop(server_);
  } else {
    drop(client_);
  }
}

std::optional<ServerState> TransitionTable::next(ServerState from,
                                                 const ProtocolEvent& e) const {
  auto it = server_.find({from, e});
  if (it == server_.end()) return std::nullopt;
  return it->second;
}

std::optional<ClientState> TransitionTable::next(ClientState from,
                                                 const ProtocolEvent& e) const {
  auto it = client_.find({from, e});
  if (it == client_.end()) return std::nullopt;
  return it->second;
}

std::string TransitionTable::to_text() const {
  std::string out;
  for (const auto& [key, to] : server_) {
    out += "server " + std::string(to_string(key.first)) + " " + to_string(key.second) +
           " " + std::string(to_string(to)) + "\n";
  }
  for (const auto& [key, to] : client_) {
    out += "client " + std::string(to_string(key.first)) + " " + to_string(key.second) +
           " " + std::string(to_string(to)) + "\n";
  }
  return out;
}

std::variant<ServerState, ProtocolError> server_step(ServerState state,
                                                     const ProtocolEvent& event,
                                                     const TransitionTable& table) {
  if (!is_client_originated(event) && !is_server_api(event)) {
    return ProtocolError{"server: " + to_string(event) + " is not a server input"};
  }
  if (auto next = table.next(state, event)) return *next;
  return ProtocolError{"server: " + pair_text(to_string(state), event)};
}

std::variant<ClientState, ProtocolError> client_step(ClientState state,
                                                     const ProtocolEvent& event,
                                                     const TransitionTable& table) {
  if (is_server_api(event)) {
    return ProtocolError{"client: " + to_string(event) + " is not a client input"};
  }
  if (auto next = table.next(state, event)) return *next;
  return ProtocolError{"client: " + pair_text(to_string(state), event)};
}

namespace {

template <typename State, typename Rows>
std::set<State> closure(const Rows& rows, State from) {
  std::set<State> seen{from};
  std::deque<State> queue{from};
  while (!queue.empty()) {
    const State s = queue.front();
    queue.pop_front();
    for (const auto& [key, to] : rows) {
      if (key.first == s && seen.insert(to).second) queue.push_back(to);
    }
  }
  return seen;
}

}  // namespace

std::set<ServerState> reachable_server_states(const TransitionTable& table,
                                              ServerState from) {
  return closure(table.server_rows(), from);
}

std::set<ClientState> reachable_client_states(const TransitionTable& table,
                                              ClientState from) {
  return closure(table.client_rows(), from);
}

std::set<std::string> enumerate_reachable(Machine machine, const TransitionTable& table) {
  std::set<std::string> out;
  if (machine == Machine::Server) {
    for (auto s : reachable_server_states(table)) out.emplace(to_string(s));
  } else {
    for (auto s : reachable_client_states(table)) out.emplace(to_string(s));
  }
  return out;
}

namespace {

class Simulator {
 public:
  explicit Simulator(const TransitionTable& table) : table_(table) {}

  TraceReport run(const std::vector<ProtocolEvent>& trace) {
    if (trace.empty()) return finish(reject(0, "empty trace"));
    for (std::size_t i = 0; i < trace.size(); ++i) {
      if (auto verdict = apply(i + 1, trace[i])) return finish(std::move(*verdict));
    }
    if (client_ != ClientState::Done) {
      std::string state = client_ ? std::string(to_string(*client_)) : "-";
      return finish(reject(trace.size(), "client ended in " + state + ", not Done"));
    }
    return finish({true, 0, {}});
  }

 private:
  static TraceVerdict reject(std::size_t n, std::string reason) {
    return {false, n, std::move(reason)};
  }

  TraceReport finish(TraceVerdict verdict) {
    report_.verdict = std::move(verdict);
    report_.final_server = server_;
    report_.final_client = client_;
    return std::move(report_);
  }

  void record(std::size_t n, const ProtocolEvent& e, std::optional<ServerState> s_before,
              std::optional<ClientState> c_before, std::string via) {
    report_.steps.push_back({n, e, s_before, server_, c_before, client_, std::move(via)});
  }

  std::optional<TraceVerdict> deliver(std::size_t n, const ProtocolEvent& e,
                                      const std::string& via) {
    const auto before = client_;
    auto step = client_step(*client_, e, table_);
    if (auto* err = std::get_if<ProtocolError>(&step)) return reject(n, err->message);
    client_ = std::get<ClientState>(step);
    record(n, e, server_, before, via);
    return std::nullopt;
  }

  // Status publication after a server state change.
  std::optional<TraceVerdict> publish(std::size_t n) {
    if (auto v = deliver(n, ProtocolEvent::status_update(*server_), "/status")) return v;
    if (is_terminal(*server_)) {
      return deliver(n, ProtocolEvent::of(EventType::ReceiveResult), "/result");
    }
    return std::nullopt;
  }

  std::optional<TraceVerdict> apply(std::size_t n, const ProtocolEvent& e) {
    if (e.type == EventType::SendGoal) {
      if (server_) return reject(n, "client: goal already in flight");
      server_ = ServerState::Pending;
      client_ = ClientState::WaitingForGoalAck;
      record(n, e, std::nullopt, std::nullopt, "/goal");
      return publish(n);
    }
    if (!server_) return reject(n, "trace must begin with SendGoal");

    if (e.type == EventType::SendCancel) {
      const auto s_before = server_;
      const auto c_before = client_;
      auto c = client_step(*client_, e, table_);
      if (auto* err = std::get_if<ProtocolError>(&c)) return reject(n, err->message);
      auto s = server_step(*server_, e, table_);
      if (auto* err = std::get_if<ProtocolError>(&s)) return reject(n, err->message);
      client_ = std::get<ClientState>(c);
      server_ = std::get<ServerState>(s);
      record(n, e, s_before, c_before, "/cancel");
      return server_ != s_before ? publish(n) : std::nullopt;
    }
    if (is_server_api(e)) {
      const auto s_before = server_;
      auto s = server_step(*server_, e, table_);
      if (auto* err = std::get_if<ProtocolError>(&s)) return reject(n, err->message);
      server_ = std::get<ServerState>(s);
      record(n, e, s_before, client_, "-");
      return server_ != s_before ? publish(n) : std::nullopt;
    }
    return deliver(n, e, e.type == EventType::StatusUpdate ? "/status" : "/result");
  }

  const TransitionTable& table_;
  std::optional<ServerState> server_;
  std::optional<ClientState> client_;
  TraceReport report_;
};

template <typename S>
std::string state_text(const std::optional<S>& s) {
  return s ? std::string(to_string(*s)) : "none";
}

}  // namespace

std::string TraceReport::to_text() const {
  std::string out;
  for (const auto& s : steps) {
    out += "#" + std::to_string(s.index) + " " + to_string(s.event) +
           " server:" + state_text(s.server_before) + "->" + state_text(s.server_after) +
           " client:" + state_text(s.client_before) + "->" + state_text(s.client_after) +
           " via:" + s.via + "\n";
  }
  out += "verdict: ";
  if (verdict.accepted) {
    out += "accepted\n";
  } else {
    out += "rejected@" + std::to_string(verdict.step) + " " + verdict.reason + "\n";
  }
  return out;
}

TraceReport simulate(const std::vector<ProtocolEvent>& trace, const TransitionTable& table) {
  return Simulator(table).run(trace);
}

std::vector<ProtocolEvent> parse_trace(std::string_view text) {
  std::vector<ProtocolEvent> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    auto e = parse_event(line);
    if (!e) throw TraceParseError(line_no, "unknown event '" + line + "'");
    out.push_back(*e);
  }
  return out;
}

}  // namespace meros
