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

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "meros/model.hpp"
#include "meros/text_format.hpp"
#include "meros/validator.hpp"
#include "test_support.hpp"

namespace meros {
namespace {

Port pub(std::string channel, std::string type = "std_msgs/String") {
  return {PortDirection::Publish, std::move(channel), std::move(type)};
}
Port sub(std::string channel, std::string type = "std_msgs/String") {
  return {PortDirection::Subscribe, std::move(channel), std::move(type)};
}

Intrasystem nested_group(std::string name, std::vector<CommunicatingComponent> parts) {
  Intrasystem g;
  g.name = std::move(name);
  g.components = std::move(parts);
  return g;
}

// Independent leaf enumeration: walk every level, join names on the way down.
void enumerate_leaves(const Intrasystem& s, const std::string& prefix,
                      std::vector<std::string>& out) {
  for (const auto& c : s.components) {
    const std::string q = prefix.empty() ? c.name : prefix + "::" + c.name;
    if (c.nested) {
      enumerate_leaves(*c.nested, q, out);
    } else {
      out.push_back(q);
    }
  }
}

std::size_t count_all(const Intrasystem& s) {
  std::size_t n = 0;
  for (const auto& c : s.components) {
    ++n;
    if (c.nested) n += count_all(*c.nested);
  }
  return n;
}

// Order-insensitive fingerprint of a connection list.
std::multiset<std::string> fingerprint(const std::vector<Connection>& connections) {
  std::multiset<std::string> out;
  for (const auto& c : connections) {
    std::string line = std::string(to_string(kind_of(c))) + " " + channel_of(c);
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          auto join = [&](std::vector<std::string> v) {
            std::sort(v.begin(), v.end());
            for (const auto& s : v) line += " " + s;
            line += " |";
          };
          if constexpr (std::is_same_v<T, TopicConnection>) {
            line += " " + x.topic.message;
            join(x.publishers);
            join(x.subscribers);
          } else if constexpr (std::is_same_v<T, NonRosConnection>) {
            join(x.endpoints);
          } else {
            line += " " + x.server.value_or("-");
            join(x.clients);
          }
        },
        c);
    out.insert(line);
  }
  return out;
}

TEST(NewRunningSystem, NonCompactHasMasterAndRosout) {
  auto s = new_running_system("Rico", false);
  std::set<std::string> names;
  for (const auto& c : s.components) names.insert(c.name);
  EXPECT_EQ(names, (std::set<std::string>{"ROS master", "rosout"}));
  EXPECT_FALSE(s.compact);
}

TEST(NewRunningSystem, CompactIsEmpty) {
  auto s = new_running_system("Rico", true);
  EXPECT_TRUE(s.components.empty());
  EXPECT_TRUE(s.compact);
}

TEST(NewRunningSystem, EmptyNameRejected) {
  try {
    new_running_system("", false);
    FAIL();
  } catch (const ModelError& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidIdentifier);
  }
}

TEST(NewRunningSystem, PassesMandatedNodeRule) {
  for (const char* name : {"a", "Rico", "with space", "ünï"}) {
    EXPECT_TRUE(validate(new_running_system(name, false)).empty()) << name;
  }
}

TEST(RoleOf, ByName) {
  EXPECT_EQ(role_of(make_component("ROS master", ComponentKind::Node)), ComponentRole::Master);
  EXPECT_EQ(role_of(make_component("rosout", ComponentKind::Node)), ComponentRole::Rosout);
  EXPECT_EQ(role_of(make_component("rosout", ComponentKind::Nodelet)), ComponentRole::None);
  EXPECT_EQ(role_of(make_component("talker", ComponentKind::Node)), ComponentRole::None);
}

TEST(AddComponent, AddsToCompactSystem) {
  auto s = add_component(new_running_system("Rico", true),
                         make_component("Move To", ComponentKind::Node));
  ASSERT_EQ(s.components.size(), 1u);
  EXPECT_EQ(s.components[0].name, "Move To");
}

TEST(AddComponent, DuplicateRejected) {
  auto s = add_component(new_running_system("Rico", true),
                         make_component("Move To", ComponentKind::Node));
  try {
    add_component(s, make_component("Move To", ComponentKind::Node));
    FAIL();
  } catch (const ModelError& e) {
    EXPECT_EQ(e.code(), ErrorCode::DuplicateComponent);
  }
}

TEST(AddComponent, EmptyNameRejected) {
  EXPECT_THROW(add_component(Intrasystem{}, make_component("", ComponentKind::Node)),
               ModelError);
}

TEST(AddComponent, ContainerWithTwoLeaves) {
  Intrasystem base;
  base.name = "S";
  base = add_component(base, make_component("A", ComponentKind::Node));
  const auto before_all = count_components(base);
  const auto before_leaves = flatten(base).size();
  auto grown = add_component(
      base, make_intrasystem_component(nested_group(
                "G", {make_component("B", ComponentKind::Node),
                      make_component("C", ComponentKind::Node)})));
  // Container plus two leaves at every level; two more leaves when flattened.
  EXPECT_EQ(count_components(grown), before_all + 3);
  EXPECT_EQ(count_all(grown), count_all(base) + 3);
  EXPECT_EQ(flatten(grown).size(), before_leaves + 2);
}

TEST(AddRemove, RestoresConnections) {
  testing::Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    auto s = testing::random_running_system(rng, "S");
    const auto before = fingerprint(resolve_connections(s));
    auto added = add_component(
        s, make_component("extra", ComponentKind::Node, {pub("/t0", "pkg/Msg0"), sub("/zz")}));
    auto removed = remove_component(added, "extra");
    EXPECT_EQ(fingerprint(resolve_connections(removed)), before);
  }
}

TEST(RemoveComponent, UnknownRejected) {
  try {
    remove_component(Intrasystem{}, "ghost");
    FAIL();
  } catch (const ModelError& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownComponent);
  }
}

TEST(ResolveConnections, TopicJoin) {
  Intrasystem s;
  s.components = {make_component("A", ComponentKind::Node, {pub("/t")}),
                  make_component("B", ComponentKind::Node, {sub("/t")}),
                  make_component("C", ComponentKind::Node, {sub("/t")})};
  auto conns = resolve_connections(s);
  ASSERT_EQ(conns.size(), 1u);
  const auto& t = std::get<TopicConnection>(conns[0]);
  EXPECT_EQ(t.topic.name, "/t");
  EXPECT_EQ(t.publishers, (std::vector<std::string>{"A"}));
  EXPECT_EQ(t.subscribers, (std::vector<std::string>{"B", "C"}));
}

TEST(ResolveConnections, ServiceServerAndClients) {
  Intrasystem s;
  s.components = {
      make_component("S", ComponentKind::Node, {{PortDirection::Serve, "/get_plan", "nav/GetPlan"}}),
      make_component("C1", ComponentKind::Node, {{PortDirection::Call, "/get_plan", "nav/GetPlan"}}),
      make_component("C2", ComponentKind::Node, {{PortDirection::Call, "/get_plan", "nav/GetPlan"}})};
  auto conns = resolve_connections(s);
  ASSERT_EQ(conns.size(), 1u);
  const auto& c = std::get<ServiceConnection>(conns[0]);
  EXPECT_EQ(c.server, "S");
  EXPECT_EQ(c.clients, (std::vector<std::string>{"C1", "C2"}));
}

TEST(ResolveConnections, TwoServersRejected) {
  Intrasystem s;
  s.components = {
      make_component("S1", ComponentKind::Node, {{PortDirection::Serve, "/x", "p/X"}}),
      make_component("S2", ComponentKind::Node, {{PortDirection::Serve, "/x", "p/X"}})};
  try {
    resolve_connections(s);
    FAIL();
  } catch (const ModelError& e) {
    EXPECT_EQ(e.code(), ErrorCode::MultipleServers);
    const auto& subjects = e.subjects();
    EXPECT_NE(std::find(subjects.begin(), subjects.end(), "/x"), subjects.end());
    EXPECT_NE(std::find(subjects.begin(), subjects.end(), "S1"), subjects.end());
    EXPECT_NE(std::find(subjects.begin(), subjects.end(), "S2"), subjects.end());
  }
}

TEST(ResolveConnections, NestedComponentsAreQualified) {
  Intrasystem s;
  s.components = {make_component("A", ComponentKind::Node, {pub("/t")}),
                  make_intrasystem_component(nested_group(
                      "G", {make_component("B", ComponentKind::Node, {sub("t")})}))};
  auto conns = resolve_connections(s);
  ASSERT_EQ(conns.size(), 1u);
  EXPECT_EQ(std::get<TopicConnection>(conns[0]).subscribers,
            (std::vector<std::string>{"G::B"}));
}

TEST(ResolveConnections, InvariantUnderComponentPermutation) {
  testing::Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    auto s = testing::random_running_system(rng, "S");
    const auto expected = fingerprint(resolve_connections(s));
    std::shuffle(s.components.begin(), s.components.end(), rng);
    for (auto& c : s.components) std::shuffle(c.ports.begin(), c.ports.end(), rng);
    EXPECT_EQ(fingerprint(resolve_connections(s)), expected);
  }
}

TEST(ExpandAction, MoveBase) {
  Action a{"/move_base", action_data_for_type("move_base_msgs/MoveBase")};
  auto topics = expand_action(a, "nav", {"task"});
  ASSERT_EQ(topics.size(), 5u);
  EXPECT_EQ(topics[0].topic.name, "/move_base/goal");
  EXPECT_EQ(topics[0].topic.message, "move_base_msgs/MoveBaseActionGoal");
  EXPECT_EQ(topics[0].publishers, (std::vector<std::string>{"task"}));
  EXPECT_EQ(topics[0].subscribers, (std::vector<std::string>{"nav"}));
  EXPECT_EQ(topics[1].topic.name, "/move_base/cancel");
  EXPECT_EQ(topics[1].topic.message, kCancelPayloadType);
  EXPECT_EQ(topics[2].topic.message, kStatusPayloadType);
  EXPECT_EQ(topics[2].publishers, (std::vector<std::string>{"nav"}));
  EXPECT_EQ(topics[3].topic.message, "move_base_msgs/MoveBaseActionFeedback");
  EXPECT_EQ(topics[4].topic.message, "move_base_msgs/MoveBaseActionResult");
  EXPECT_EQ(topics[4].subscribers, (std::vector<std::string>{"task"}));
}

TEST(ExpandAction, NoEndpoints) {
  auto topics = expand_action({"/a", action_data_for_type("p/A")}, std::nullopt, {});
  ASSERT_EQ(topics.size(), 5u);
  for (const auto& t : topics) {
    EXPECT_TRUE(t.publishers.empty());
    EXPECT_TRUE(t.subscribers.empty());
  }
}

TEST(ExpandAction, AlwaysFiveSuffixes) {
  testing::Rng rng(3);
  const std::multiset<std::string> expected{"goal", "cancel", "status", "feedback", "result"};
  for (int i = 0; i < 200; ++i) {
    const std::string name = "/ns" + std::to_string(i % 7) + "/act" + std::to_string(i);
    std::vector<std::string> clients;
    for (int j = 0; j < static_cast<int>(rng() % 4); ++j) clients.push_back("c" + std::to_string(j));
    std::optional<std::string> server;
    if (rng() % 2) server = "srv";
    auto topics = expand_action({name, action_data_for_type("p/T")}, server, clients);
    std::multiset<std::string> suffixes;
    for (const auto& t : topics) {
      ASSERT_EQ(t.topic.name.rfind(name + "/", 0), 0u);
      suffixes.insert(t.topic.name.substr(name.size() + 1));
    }
    EXPECT_EQ(suffixes, expected);
  }
}

TEST(GroupMedium, RicoMediumHasThreeMembers) {
  auto parsed = parse_model(testing::read_file(testing::fixture_path("rico.meros")));
  auto model = std::get<RosSystem>(parsed);
  RunningSystem rico = model.running_systems.at(0);
  rico.mediums.clear();
  auto grouped = group_medium(rico, "Move To to Robot Core",
                              {{ConnectionKind::Action, "/move_base"},
                               {ConnectionKind::Action, "/play_motion"},
                               {ConnectionKind::Action, "/torso_controller/follow_joint_trajectory"}});
  ASSERT_EQ(grouped.mediums.size(), 1u);
  EXPECT_EQ(grouped.mediums[0].members.size(), 3u);
}

TEST(GroupMedium, EmptyMembersRejected) {
  auto s = new_running_system("S", false);
  try {
    group_medium(s, "m", {});
    FAIL();
  } catch (const ModelError& e) {
    EXPECT_EQ(e.code(), ErrorCode::DanglingMediumMember);
  }
}

TEST(GroupMedium, UnknownMemberRejected) {
  auto s = add_component(new_running_system("S", false),
                         make_component("A", ComponentKind::Node, {pub("/t")}));
  try {
    group_medium(s, "m", {{ConnectionKind::Topic, "/nope"}});
    FAIL();
  } catch (const ModelError& e) {
    EXPECT_EQ(e.code(), ErrorCode::DanglingMediumMember);
  }
  EXPECT_NO_THROW(group_medium(s, "m", {{ConnectionKind::Topic, "/t"}}));
}

TEST(GroupMedium, DuplicateNameRejected) {
  auto s = add_component(new_running_system("S", false),
                         make_component("A", ComponentKind::Node, {pub("/t")}));
  s = group_medium(s, "m", {{ConnectionKind::Topic, "/t"}});
  try {
    group_medium(s, "m", {{ConnectionKind::Topic, "/t"}});
    FAIL();
  } catch (const ModelError& e) {
    EXPECT_EQ(e.code(), ErrorCode::DuplicateMedium);
  }
}

TEST(Flatten, TwoLevels) {
  Intrasystem s;
  s.components = {make_component("A", ComponentKind::Node),
                  make_intrasystem_component(
                      nested_group("G", {make_component("B", ComponentKind::Node)}))};
  std::vector<std::string> names;
  for (const auto& c : flatten(s)) names.push_back(c.name);
  EXPECT_EQ(names, (std::vector<std::string>{"A", "G::B"}));
}

TEST(Flatten, Empty) { EXPECT_TRUE(flatten(Intrasystem{}).empty()); }

TEST(Flatten, ThreeLevelsFourLeaves) {
  Intrasystem inner = nested_group("Z", {make_component("d", ComponentKind::Node),
                                         make_component("c", ComponentKind::Nodelet)});
  Intrasystem middle = nested_group(
      "Y", {make_component("b", ComponentKind::Node), make_intrasystem_component(inner)});
  Intrasystem top;
  top.components = {make_intrasystem_component(middle), make_component("a", ComponentKind::Plugin)};
  std::vector<std::string> names;
  for (const auto& c : flatten(top)) names.push_back(c.name);
  std::vector<std::string> expected;
  enumerate_leaves(top, "", expected);
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(names, expected);
  EXPECT_EQ(names, (std::vector<std::string>{"Y::Z::c", "Y::Z::d", "Y::b", "a"}));
}

TEST(Flatten, MatchesRecursiveEnumeration) {
  testing::Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    auto s = testing::random_running_system(rng, "S");
    auto leaves = flatten(s);
    std::vector<std::string> expected;
    enumerate_leaves(s, "", expected);
    std::sort(expected.begin(), expected.end());
    std::vector<std::string> names;
    for (const auto& c : leaves) {
      EXPECT_NE(c.kind, ComponentKind::Intrasystem);
      EXPECT_FALSE(c.nested);
      names.push_back(c.name);
    }
    EXPECT_EQ(names, expected);
    EXPECT_EQ(count_components(s), count_all(s));
  }
}

TEST(ComputeStats, EmptyIsZero) {
  auto stats = compute_stats(RosSystem{});
  for (const auto& [key, count] : stats.entries()) EXPECT_EQ(count, 0u) << key;
  EXPECT_EQ(stats.entries().size(), 13u);
}

TEST(ComputeStats, KeysSorted) {
  auto entries = compute_stats(RosSystem{}).entries();
  EXPECT_TRUE(std::is_sorted(entries.begin(), entries.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; }));
}

TEST(ComputeStats, TwoNodesOneTopic) {
  RosSystem m;
  auto s = new_running_system("S", true);
  s = add_component(s, make_component("A", ComponentKind::Node, {pub("/t")}));
  s = add_component(s, make_component("B", ComponentKind::Node, {sub("/t")}));
  m.running_systems.push_back(s);
  auto stats = compute_stats(m);
  EXPECT_EQ(stats.components(), 2u);
  EXPECT_EQ(stats.topics, 1u);
}

TEST(ComputeStats, Rico) {
  auto model = std::get<RosSystem>(parse_model(testing::read_file(testing::fixture_path("rico.meros"))));
  auto stats = compute_stats(model);
  EXPECT_GE(stats.mediums, 1u);
  EXPECT_GE(stats.actions, 3u);
}

TEST(NormalizeChannel, RelativeNamesAreGlobal) {
  EXPECT_EQ(normalize_channel("t"), "/t");
  EXPECT_EQ(normalize_channel("/t"), "/t");
}

TEST(StructuralEquality, IgnoresOrderAndRootName) {
  testing::Rng rng(9);
  for (int i = 0; i < 50; ++i) {
    auto a = testing::random_model(rng);
    auto b = a;
    b.name = "other";
    std::reverse(b.running_systems.begin(), b.running_systems.end());
    for (auto& rs : b.running_systems) std::reverse(rs.components.begin(), rs.components.end());
    EXPECT_TRUE(structurally_equal(a, b));
  }
}

}  // namespace
}  // namespace meros
