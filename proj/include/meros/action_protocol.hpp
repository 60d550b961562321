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

// Goal state machines of the ROS 1 action protocol (actionlib), for a
// single goal, plus a simulator that couples server and client through the
// goal, cancel, status and result topics.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace meros {

enum class ServerState {
  Pending,
  Active,
  Recalling,
  Preempting,
  Rejected,
  Recalled,
  Preempted,
  Succeeded,
  Aborted,
};

enum class ClientState {
  WaitingForGoalAck,
  Pending,
  Active,
  WaitingForResult,
  WaitingForCancelAck,
  Recalling,
  Preempting,
  Done,
};

inline constexpr ServerState kAllServerStates[] = {
    ServerState::Pending,   ServerState::Active,    ServerState::Recalling,
    ServerState::Preempting, ServerState::Rejected, ServerState::Recalled,
    ServerState::Preempted, ServerState::Succeeded, ServerState::Aborted};

inline constexpr ClientState kAllClientStates[] = {
    ClientState::WaitingForGoalAck, ClientState::Pending,
    ClientState::Active,            ClientState::WaitingForResult,
    ClientState::WaitingForCancelAck, ClientState::Recalling,
    ClientState::Preempting,        ClientState::Done};

enum class EventType {
  SendGoal,
  SendCancel,
  SetAccepted,
  SetRejected,
  SetSucceeded,
  SetAborted,
  SetCancelled,
  StatusUpdate,
  ReceiveResult,
};

struct ProtocolEvent {
  EventType type = EventType::SendGoal;
  ServerState status = ServerState::Pending;  // StatusUpdate only

  static ProtocolEvent of(EventType type) { return {type, ServerState::Pending}; }
  static ProtocolEvent status_update(ServerState s) { return {EventType::StatusUpdate, s}; }

  bool operator==(const ProtocolEvent& o) const {
    return type == o.type && (type != EventType::StatusUpdate || status == o.status);
  }
  bool operator<(const ProtocolEvent& o) const;
};

// Every distinct event: the plain ones plus one StatusUpdate per server state.
std::vector<ProtocolEvent> all_events();

bool is_terminal(ServerState s);
bool is_terminal(ClientState s);
bool is_client_originated(const ProtocolEvent& e);
bool is_server_api(const ProtocolEvent& e);

std::string_view to_string(ServerState s);
std::string_view to_string(ClientState s);
std::string to_string(const ProtocolEvent& e);  // "StatusUpdate:<State>" for status
std::optional<ServerState> parse_server_state(std::string_view text);
std::optional<ClientState> parse_client_state(std::string_view text);
std::optional<ProtocolEvent> parse_event(std::string_view text);

enum class Machine { Server, Client };

struct ProtocolError {
  std::string message;
};

class TableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rows `<machine> <state> <event> <next-state>`; `#` starts a comment.
class TransitionTable {
 public:
  // The documented actionlib tables.
  static const TransitionTable& standard();
  // Throws TableError with the offending line number.
  static TransitionTable parse(std::string_view text);

  void add(ServerState from, const ProtocolEvent& e, ServerState to);
  void add(ClientState from, const ProtocolEvent& e, ClientState to);
  // Drop every row of `machine` triggered by `event`.
  void remove(Machine machine, const ProtocolEvent& event);

  std::optional<ServerState> next(ServerState from, const ProtocolEvent& e) const;
  std::optional<ClientState> next(ClientState from, const ProtocolEvent& e) const;

  const std::map<std::pair<ServerState, ProtocolEvent>, ServerState>& server_rows() const {
    return server_;
  }
  const std::map<std::pair<ClientState, ProtocolEvent>, ClientState>& client_rows() const {
    return client_;
  }

  std::string to_text() const;
  bool operator==(const TransitionTable& o) const {
    return server_ == o.server_ && client_ == o.client_;
  }

 private:
  std::map<std::pair<ServerState, ProtocolEvent>, ServerState> server_;
  std::map<std::pair<ClientState, ProtocolEvent>, ClientState> client_;
};

std::variant<ServerState, ProtocolError> server_step(
    ServerState state, const ProtocolEvent& event,
    const TransitionTable& table = TransitionTable::standard());
std::variant<ClientState, ProtocolError> client_step(
    ClientState state, const ProtocolEvent& event,
    const TransitionTable& table = TransitionTable::standard());

// Breadth-first closure from Pending (server) or WaitingForGoalAck (client).
std::set<ServerState> reachable_server_states(
    const TransitionTable& table = TransitionTable::standard(),
    ServerState from = ServerState::Pending);
std::set<ClientState> reachable_client_states(
    const TransitionTable& table = TransitionTable::standard(),
    ClientState from = ClientState::WaitingForGoalAck);
// State names, sorted.
std::set<std::string> enumerate_reachable(
    Machine machine, const TransitionTable& table = TransitionTable::standard());

struct TraceStep {
  std::size_t index = 0;  // 1-based position of the triggering input event
  ProtocolEvent event;
  std::optional<ServerState> server_before, server_after;  // nullopt: no goal yet
  std::optional<ClientState> client_before, client_after;
  std::string via;  // topic, or "-" for server API calls
};

struct TraceVerdict {
  bool accepted = false;
  std::size_t step = 0;
  std::string reason;
};

struct TraceReport {
  std::vector<TraceStep> steps;
  TraceVerdict verdict;
  std::optional<ServerState> final_server;
  std::optional<ClientState> final_client;

  // One line per step then the verdict line, LF terminated.
  std::string to_text() const;
};

// Single goal, reliable in-order delivery. Rejection is a verdict.
TraceReport simulate(const std::vector<ProtocolEvent>& trace,
                     const TransitionTable& table = TransitionTable::standard());

class TraceParseError : public std::runtime_error {
 public:
  TraceParseError(std::size_t line, const std::string& message)
      : std::runtime_error(std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// One event per line; blank lines and `#` comments are skipped.
std::vector<ProtocolEvent> parse_trace(std::string_view text);

}  // namespace meros
