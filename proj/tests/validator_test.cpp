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
#include <set>

#include "meros/text_format.hpp"
#include "meros/validator.hpp"
#include "test_support.hpp"

namespace meros {
namespace {

RosSystem load(std::string_view name) {
  return std::get<RosSystem>(parse_model(testing::read_file(testing::fixture_path(name))));
}

std::vector<std::string> rule_ids(const std::vector<Diagnostic>& diags) {
  std::vector<std::string> out;
  for (const auto& d : diags) out.push_back(d.rule);
  return out;
}

RosSystem wrap(RunningSystem s) {
  RosSystem m;
  m.name = "m";
  m.running_systems.push_back(std::move(s));
  return m;
}

TEST(ListRules, Registry) {
  const auto& rules = list_rules();
  auto find = [&](std::string_view id) {
    return std::find_if(rules.begin(), rules.end(), [&](const Rule& r) { return r.id == id; });
  };
  ASSERT_NE(find("MR-001"), rules.end());
  EXPECT_EQ(find("MR-001")->requirement, "R3.2.2");
  ASSERT_NE(find("MR-004"), rules.end());
  EXPECT_EQ(find("MR-004")->requirement, "R3.1.1.1");
  for (std::size_t i = 1; i < rules.size(); ++i) EXPECT_LT(rules[i - 1].id, rules[i].id);
}

TEST(Validate, RicoIsClean) {
  auto diags = validate(load("rico.meros"));
  for (const auto& d : diags) ADD_FAILURE() << format_diagnostic(d);
}

TEST(Validate, TwoServersGiveOneMr001) {
  auto diags = validate(load("two_servers.meros"));
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_EQ(diags[0].rule, "MR-001");
  EXPECT_EQ(diags[0].severity, Severity::Error);
  EXPECT_EQ(diags[0].subject, "/get_plan");
}

TEST(Validate, FreshRunningSystemIsClean) {
  EXPECT_TRUE(validate(new_running_system("S", false)).empty());
}

TEST(Validate, MissingMandatedNodes) {
  RunningSystem s;
  s.name = "S";
  auto diags = validate(s);
  ASSERT_FALSE(diags.empty());
  for (const auto& d : diags) {
    EXPECT_EQ(d.rule, "MR-004");
    EXPECT_EQ(d.severity, Severity::Error);
  }
  ValidateOptions compact;
  compact.assume_compact = true;
  for (const auto& d : validate(s, compact)) EXPECT_EQ(d.severity, Severity::Warning);
}

TEST(Validate, TopicTypeConflict) {
  auto s = new_running_system("S", false);
  s = add_component(s, make_component("A", ComponentKind::Node, {{PortDirection::Publish, "/t", "A"}}));
  s = add_component(s, make_component("B", ComponentKind::Node, {{PortDirection::Subscribe, "/t", "B"}}));
  EXPECT_EQ(rule_ids(validate(s)), (std::vector<std::string>{"MR-005"}));
}

TEST(Validate, ActionConstituentTopicConflict) {
  auto s = new_running_system("S", false);
  s = add_component(s, make_component("srv", ComponentKind::Node,
                                      {{PortDirection::ActionServe, "/a", "p/A"}}));
  s = add_component(s, make_component("cli", ComponentKind::Node,
                                      {{PortDirection::ActionCall, "/a", "p/A"}}));
  s.declared_topics.push_back({"/a/goal", "std_msgs/String"});
  auto ids = rule_ids(validate(s));
  EXPECT_NE(std::find(ids.begin(), ids.end(), "MR-002"), ids.end());
}

TEST(Validate, IncompleteActionData) {
  auto s = new_running_system("S", false);
  s.declared_actions.push_back({"/a", {"p/AActionGoal", "", "p/AActionResult"}});
  auto ids = rule_ids(validate(s));
  EXPECT_NE(std::find(ids.begin(), ids.end(), "MR-003"), ids.end());
}

TEST(Validate, MetapackageOwningFiles) {
  RosSystem m;
  m.workspaces.push_back({"w", {{"p"}}, {{"meta", {"p"}, {"README.md"}}}});
  EXPECT_EQ(rule_ids(validate(m)), (std::vector<std::string>{"MR-006"}));
}

TEST(Validate, MetapackageReferencesUnknownPackage) {
  RosSystem m;
  m.workspaces.push_back({"w", {}, {{"meta", {"elsewhere"}, {}}}});
  auto diags = validate(m);
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_EQ(diags[0].severity, Severity::Warning);
}

TEST(Validate, ActionConstituentListedAsMessage) {
  RosSystem m;
  Package p;
  p.name = "p";
  p.action_data = {"MoveTo"};
  p.msg_data = {"MoveToGoal"};
  m.workspaces.push_back({"w", {p}, {}});
  EXPECT_EQ(rule_ids(validate(m)), (std::vector<std::string>{"MR-007"}));
}

TEST(Validate, DanglingMediumMember) {
  auto s = new_running_system("S", false);
  s.mediums.push_back({"m", {{ConnectionKind::Topic, "/nope"}}});
  EXPECT_EQ(rule_ids(validate(s)), (std::vector<std::string>{"MR-008"}));
}

TEST(Validate, OrphanTopicIsWarning) {
  auto s = new_running_system("S", false);
  s = add_component(s, make_component("A", ComponentKind::Node, {{PortDirection::Publish, "/t", "x/Y"}}));
  auto diags = validate(s);
  ASSERT_EQ(rule_ids(diags), (std::vector<std::string>{"MR-009"}));
  EXPECT_FALSE(has_errors(diags));
  ValidateOptions strict;
  strict.treat_warnings_as_errors = true;
  EXPECT_TRUE(has_errors(validate(s, strict)));
}

TEST(Validate, ServiceWithoutClientsIsSilent) {
  auto s = new_running_system("S", false);
  s = add_component(s, make_component("A", ComponentKind::Node, {{PortDirection::Serve, "/s", "x/S"}}));
  EXPECT_TRUE(validate(s).empty());
}

TEST(Validate, UnboundManagerAndHost) {
  auto s = new_running_system("S", false);
  auto nodelet = make_component("n", ComponentKind::Nodelet);
  nodelet.manager = "nobody";
  auto plugin = make_component("p", ComponentKind::Plugin);
  plugin.host = "nobody";
  s = add_component(s, nodelet);
  s = add_component(s, plugin);
  EXPECT_EQ(rule_ids(validate(s)), (std::vector<std::string>{"MR-011", "MR-012"}));
}

TEST(Validate, FormatIsStable) {
  Diagnostic d{"MR-001", Severity::Error, "/x", "service has 2 servers: S1, S2"};
  EXPECT_EQ(format_diagnostic(d), "MR-001 error /x: service has 2 servers: S1, S2");
}

TEST(Validate, RandomModelsAreClean) {
  testing::Rng rng(17);
  for (int i = 0; i < 300; ++i) {
    auto m = testing::random_model(rng);
    auto diags = validate(m);
    std::string text;
    for (const auto& d : diags) text += format_diagnostic(d) + "\n";
    ASSERT_FALSE(has_errors(diags)) << text << serialize_model(m);
  }
}

TEST(Validate, RuleIdsAreRegistered) {
  std::set<std::string> known;
  for (const auto& r : list_rules()) known.insert(r.id);
  testing::Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    auto m = testing::random_model(rng);
    // Break a few things on purpose.
    if (!m.running_systems.empty()) {
      auto& s = m.running_systems[0];
      s.mediums.push_back({"broken", {{ConnectionKind::Service, "/missing"}}});
      if (i % 2) s.components.clear();
    }
    for (const auto& d : validate(m)) EXPECT_TRUE(known.count(d.rule)) << d.rule;
  }
}

TEST(Validate, OrderInsensitive) {
  testing::Rng rng(31);
  for (int i = 0; i < 200; ++i) {
    auto m = testing::random_model(rng);
    if (!m.running_systems.empty() && i % 3 == 0) {
      // Add violations so the comparison is not between empty lists.
      auto& s = m.running_systems[0];
      s.components.push_back(make_component("dup_a", ComponentKind::Node,
                                            {{PortDirection::Serve, "/clash", "p/S"}}));
      s.components.push_back(make_component("dup_b", ComponentKind::Node,
                                            {{PortDirection::Serve, "/clash", "p/S"}}));
    }
    const auto expected = validate(m);
    auto shuffled = m;
    std::shuffle(shuffled.running_systems.begin(), shuffled.running_systems.end(), rng);
    for (auto& s : shuffled.running_systems) {
      std::shuffle(s.components.begin(), s.components.end(), rng);
      std::shuffle(s.mediums.begin(), s.mediums.end(), rng);
      std::shuffle(s.declared_topics.begin(), s.declared_topics.end(), rng);
      for (auto& c : s.components) std::shuffle(c.ports.begin(), c.ports.end(), rng);
    }
    std::shuffle(shuffled.workspaces.begin(), shuffled.workspaces.end(), rng);
    EXPECT_EQ(validate(shuffled), expected);
  }
}

TEST(Validate, SameAfterReparse) {
  testing::Rng rng(37);
  for (int i = 0; i < 200; ++i) {
    auto m = testing::random_model(rng);
    auto reparsed = std::get<RosSystem>(parse_model(serialize_model(m)));
    EXPECT_EQ(validate(reparsed), validate(m));
  }
}

}  // namespace
}  // namespace meros
