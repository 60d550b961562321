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

#include "meros/graph_ingest.hpp"
#include "meros/text_format.hpp"
#include "meros/validator.hpp"
#include "test_support.hpp"

namespace meros {
namespace {

GraphSnapshot load(std::string_view name) {
  auto parsed = parse_snapshot(testing::read_file(testing::fixture_path(name)));
  EXPECT_TRUE(parsed.snapshot.has_value());
  return parsed.snapshot.value_or(GraphSnapshot{});
}

bool has_error(const SnapshotParseResult& r) {
  for (const auto& d : r.diagnostics) {
    if (d.severity == Severity::Error) return true;
  }
  return false;
}

TEST(ParseSnapshot, SmallGraph) {
  auto r = parse_snapshot(R"({"nodes":["/a","/b"],"topics":[
      {"name":"/t","type":"std_msgs/String","publishers":["/a"],"subscribers":["/b"]}],
      "services":[]})");
  ASSERT_TRUE(r.snapshot);
  EXPECT_EQ(r.snapshot->nodes.size(), 2u);
  EXPECT_EQ(r.snapshot->topics.size(), 1u);
  EXPECT_TRUE(r.diagnostics.empty());
}

TEST(ParseSnapshot, DanglingEndpoint) {
  auto r = parse_snapshot(testing::read_file(testing::fixture_path("snapshots/ghost.json")));
  EXPECT_FALSE(r.snapshot);
  ASSERT_TRUE(has_error(r));
  EXPECT_NE(r.diagnostics[0].message.find("/ghost"), std::string::npos);
}

TEST(ParseSnapshot, EmptyDocument) {
  auto r = parse_snapshot(R"({"nodes":[],"topics":[],"services":[]})");
  ASSERT_TRUE(r.snapshot);
  EXPECT_EQ(*r.snapshot, GraphSnapshot{});
}

TEST(ParseSnapshot, Malformed) {
  for (const char* text : {
           "", "[]", "{", R"({"nodes":[]})", R"({"nodes":[1],"topics":[],"services":[]})",
           R"({"nodes":[],"topics":[{"name":"/t"}],"services":[]})",
           R"({"nodes":["/a","/a"],"topics":[],"services":[]})",
           R"({"nodes":["/a"],"topics":[],"services":[{"name":"/s","type":"x/S"}]})",
           R"({"nodes":["/a"],"topics":[],"services":[{"name":"/s","type":"x/S","server":3}]})"}) {
    auto r = parse_snapshot(text);
    EXPECT_FALSE(r.snapshot) << text;
    EXPECT_TRUE(has_error(r)) << text;
  }
}

TEST(ParseSnapshot, UnknownFieldWarns) {
  auto r = parse_snapshot(R"({"nodes":[],"topics":[],"services":[],"stamp":1})");
  ASSERT_TRUE(r.snapshot);
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].severity, Severity::Warning);
}

TEST(ParseSnapshot, JsonRoundTrip) {
  testing::Rng rng(41);
  for (int i = 0; i < 200; ++i) {
    auto s = testing::random_snapshot(rng);
    auto r = parse_snapshot(snapshot_to_json(s));
    ASSERT_TRUE(r.snapshot);
    EXPECT_EQ(*r.snapshot, s);
  }
}

TEST(DetectActions, Quintuple) {
  auto d = detect_actions(load("snapshots/quintuple.json"));
  ASSERT_EQ(d.candidates.size(), 1u);
  EXPECT_EQ(d.candidates[0].prefix, "/move_base");
  EXPECT_EQ(d.candidates[0].server, "/nav");
  EXPECT_EQ(d.candidates[0].clients, (std::vector<std::string>{"/task"}));
  EXPECT_TRUE(d.warnings.empty());
}

TEST(DetectActions, FourOfFiveIsNotAnAction) {
  auto s = load("snapshots/quintuple.json");
  for (std::size_t drop = 0; drop < s.topics.size(); ++drop) {
    auto partial = s;
    partial.topics.erase(partial.topics.begin() + static_cast<long>(drop));
    EXPECT_TRUE(detect_actions(partial).candidates.empty());
  }
}

TEST(DetectActions, TwoServersAreDemoted) {
  auto s = load("snapshots/quintuple.json");
  s.nodes.push_back("/nav2");
  for (auto& t : s.topics) {
    if (t.name == "/move_base/goal" || t.name == "/move_base/cancel") {
      t.subscribers.push_back("/nav2");
    } else {
      t.publishers.push_back("/nav2");
    }
  }
  auto d = detect_actions(s);
  EXPECT_TRUE(d.candidates.empty());
  EXPECT_EQ(d.warnings.size(), 1u);
}

TEST(DetectActions, MatchesBruteForceOracle) {
  testing::Rng rng(1000);
  for (int i = 0; i < 1000; ++i) {
    auto s = testing::random_snapshot(rng);
    auto got = detect_actions(s);
    auto want = testing::oracle_detect_actions(s);
    ASSERT_EQ(got.candidates, want.candidates) << snapshot_to_json(s);
    ASSERT_EQ(got.warnings.size(), want.ambiguous);
  }
}

TEST(Lift, QuintuplePlusTwoTopics) {
  auto s = load("snapshots/quintuple.json");
  s.topics.push_back({"/scan", "sensor_msgs/LaserScan", {"/nav"}, {"/task"}});
  s.topics.push_back({"/odom", "nav_msgs/Odometry", {"/nav"}, {}});
  auto lifted = lift(s);
  EXPECT_EQ(lifted.system.declared_actions.size(), 1u);
  EXPECT_EQ(lifted.system.declared_topics.size(), 2u);
  EXPECT_EQ(lifted.system.declared_actions[0].data.goal, "move_base_msgs/MoveBaseActionGoal");
}

TEST(Lift, ActionPortsUseActionType) {
  auto lifted = lift(load("snapshots/quintuple.json"));
  bool saw_server = false;
  for (const auto& c : lifted.system.components) {
    for (const auto& p : c.ports) {
      if (p.direction == PortDirection::ActionServe) {
        saw_server = true;
        EXPECT_EQ(c.name, "/nav");
        EXPECT_EQ(p.payload_type, "move_base_msgs/MoveBase");
      }
    }
  }
  EXPECT_TRUE(saw_server);
}

TEST(Lift, EmptySnapshotIsFreshSystem) {
  LiftOptions opts;
  opts.name = "S";
  auto lifted = lift(GraphSnapshot{}, opts);
  EXPECT_EQ(lifted.system, new_running_system("S", false));
}

TEST(Lift, ActionsDisabled) {
  LiftOptions opts;
  opts.detect_actions = false;
  auto lifted = lift(load("snapshots/quintuple.json"), opts);
  EXPECT_EQ(lifted.system.declared_topics.size(), 5u);
  EXPECT_TRUE(lifted.system.declared_actions.empty());
}

TEST(Lift, RosoutNodeBecomesRosoutComponent) {
  auto lifted = lift(load("snapshots/talker_listener.json"));
  std::set<std::string> names;
  for (const auto& c : lifted.system.components) names.insert(c.name);
  EXPECT_TRUE(names.count("rosout"));
  EXPECT_FALSE(names.count("/rosout"));
  EXPECT_TRUE(validate(lifted.system).empty());
}

TEST(Lift, ConservationAndValidity) {
  testing::Rng rng(77);
  int checked = 0;
  for (int i = 0; i < 500; ++i) {
    auto s = testing::random_snapshot(rng);
    LiftOptions opts;
    opts.compact = i % 2 == 0;
    auto lifted = lift(s, opts);
    auto diags = validate(lifted.system);
    EXPECT_FALSE(has_errors(diags)) << format_diagnostic(diags.front());
    if (!lifted.warnings.empty()) continue;
    ++checked;
    EXPECT_EQ(lifted.system.declared_topics.size() + 5 * lifted.system.declared_actions.size(),
              s.topics.size());
  }
  EXPECT_GT(checked, 100);
}

TEST(Lift, OutputSerializesAndReparses) {
  testing::Rng rng(78);
  for (int i = 0; i < 100; ++i) {
    RosSystem m;
    m.running_systems.push_back(lift(testing::random_snapshot(rng)).system);
    auto again = parse_model(serialize_model(m));
    ASSERT_TRUE(std::holds_alternative<RosSystem>(again));
    EXPECT_TRUE(structurally_equal(std::get<RosSystem>(again), m));
  }
}

}  // namespace
}  // namespace meros
