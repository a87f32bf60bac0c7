// Copyright 2026 The flexlane Authors
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

#include <functional>

#include "flexlane/common/clock.hpp"
#include "flexlane/harness/bench_setup.hpp"
#include "flexlane/rules/bench.hpp"
#include "flexlane/rules/rule_base.hpp"
#include "flexlane/rules/validation.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace flexlane;
using namespace flexlane::rules;
using namespace std::chrono_literals;

namespace
{

const std::string kData = FLEXLANE_TEST_DATA_DIR;

const RuleBase & shipped()
{
  static const auto base = RuleBase::load(kData + "/rules.json");
  return base;
}

autoir::AutoIRProgram program_for(const autoir::ParamPath & path, double timer = 10.0)
{
  autoir::AutoIRProgram p;
  p.module_select = path.module;
  p.node_select = path.node;
  p.param_select = path.param;
  p.timer_seconds = timer;
  return p;
}

const autoir::ParamPath kUseFlag{"perception", "traffic_light_classifier_node", "use_flag"};
const autoir::ParamPath kLaneChange{"planning", "behavior_path_planner", "lane_change_enable"};

VehicleStatus stopped_at_red() { return {MotionState::Stopped, "TrafficLight", 0.0, {Perception::TrafficLightDetected}}; }

/// Status feed scripted as a function of the poll time.
class ScriptedStatus final : public StatusSource
{
public:
  explicit ScriptedStatus(std::function<std::optional<VehicleStatus>(TimePoint)> fn, const MonotonicClock & clock)
  : fn_(std::move(fn)), clock_(clock)
  {
  }

  std::optional<VehicleStatus> current_status() override
  {
    ++calls;
    return fn_(clock_.now());
  }

  std::size_t calls{0};

private:
  std::function<std::optional<VehicleStatus>(TimePoint)> fn_;
  const MonotonicClock & clock_;
};

}  // namespace

TEST(RuleBase, ShippedFile)
{
  EXPECT_GE(shipped().size(), 50u);
  const auto * rule = shipped().find(kUseFlag.module, kUseFlag.node, kUseFlag.param);
  ASSERT_NE(rule, nullptr);
  EXPECT_EQ(rule->conditions.motion_state, MotionCondition::Stopped);
  EXPECT_EQ(rule->conditions.speed_min, 0.0);
  EXPECT_EQ(rule->conditions.speed_max, 0.0);
  EXPECT_EQ(rule->conditions.required, (PerceptionSet{Perception::TrafficLightDetected}));
  EXPECT_EQ(RuleBase::from_json(shipped().to_json()).rules(), shipped().rules());
}

TEST(RuleBase, Errors)
{
  const std::string dup = R"({"rules": [
    {"module": "planning", "node": "mission_planner", "param": "lane_prefer", "conditions": {}},
    {"module": "planning", "node": "mission_planner", "param": "lane_prefer", "conditions": {}}]})";
  try {
    RuleBase::from_json(dup);
    FAIL();
  } catch (const RuleFileError & e) {
    EXPECT_EQ(e.code(), RuleFileErrorCode::DuplicatePath);
  }
  const std::string bad = R"({"rules": [{"module": "a", "node": "b", "param": "c",
    "conditions": {"speed_min": 5, "speed_max": 1}}]})";
  try {
    RuleBase::from_json(bad);
    FAIL();
  } catch (const RuleFileError & e) {
    EXPECT_EQ(e.code(), RuleFileErrorCode::BadCondition);
  }
  const std::string overlap = R"({"rules": [{"module": "a", "node": "b", "param": "c",
    "conditions": {"required": ["ObstacleDetected"], "forbidden": ["ObstacleDetected"]}}]})";
  EXPECT_THROW(RuleBase::from_json(overlap), RuleFileError);
  EXPECT_THROW(RuleBase::from_json("[1, 2"), RuleFileError);
  const auto empty = RuleBase::from_json("  \n");
  EXPECT_TRUE(empty.empty());
  EXPECT_EQ(search_rule(empty, program_for(kUseFlag)), nullptr);
}

TEST(SearchRule, Examples)
{
  const auto * rule = search_rule(shipped(), program_for(kUseFlag));
  ASSERT_NE(rule, nullptr);
  EXPECT_EQ(rule->search_index, kUseFlag);
  EXPECT_EQ(search_rule(shipped(), program_for({"planning", "mission_planner", "unlisted"})), nullptr);
  EXPECT_EQ(search_rule(shipped(), program_for({"nowhere", "mission_planner", "lane_prefer"})), nullptr);
}

TEST(SearchRuleProperty, TreeEqualsLinearScan)
{
  proptest::Gen gen(0xB1);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto base = gen.rule_base(40);
    ASSERT_EQ(base.rules().size(), base.size());
    for (int probe = 0; probe < 30; ++probe) {
      const auto program = program_for(gen.small_path());
      const Rule * tree = search_rule(base, program);
      const Rule * linear = proptest::linear_search(base, program);
      ASSERT_EQ(tree == nullptr, linear == nullptr) << "trial " << trial;
      if (tree != nullptr) {
        ASSERT_EQ(*tree, *linear);
      }
    }
  }
}

TEST(MatchConditions, Examples)
{
  const auto * light = shipped().find(kUseFlag.module, kUseFlag.node, kUseFlag.param);
  EXPECT_TRUE(match_conditions(*light, stopped_at_red()));
  auto moving = stopped_at_red();
  moving.motion_state = MotionState::Driving;
  moving.speed = 2.0;
  EXPECT_FALSE(match_conditions(*light, moving));

  const auto * lane = shipped().find(kLaneChange.module, kLaneChange.node, kLaneChange.param);
  ASSERT_NE(lane, nullptr);
  EXPECT_DOUBLE_EQ(lane->conditions.speed_max, 19.44);
  EXPECT_FALSE(match_conditions(*lane, {MotionState::Driving, std::nullopt, 22.0, {}}));
  EXPECT_TRUE(match_conditions(*lane, {MotionState::Driving, std::nullopt, 19.44, {}}));

  Rule vacuous;
  vacuous.search_index = {"a", "b", "c"};
  proptest::Gen gen(0xB2);
  for (int i = 0; i < 200; ++i) {
    EXPECT_TRUE(match_conditions(vacuous, gen.status()));
  }
}

TEST(MatchConditionsProperty, AgreesWithOracleAndIsMonotone)
{
  proptest::Gen gen(0xB3);
  for (int trial = 0; trial < 20000; ++trial) {
    Rule rule;
    rule.search_index = {"a", "b", "c"};
    rule.conditions = gen.conditions();
    const auto status = gen.status();
    const bool matched = match_conditions(rule, status);
    ASSERT_EQ(matched, proptest::match_oracle(rule.conditions, status));
    if (matched) {
      // Adding tags outside the forbidden set keeps the match.
      auto wider = status;
      for (std::size_t i = 0; i < kPerceptionCount; ++i) {
        const auto tag = static_cast<Perception>(i);
        if (!rule.conditions.forbidden.contains(tag) && gen.chance(0.5)) {
          wider.perceptions.insert(tag);
        }
      }
      ASSERT_TRUE(match_conditions(rule, wider));
    }
  }
}

TEST(Validation, ActivatesOnFirstMatchingPoll)
{
  ScriptedClock clock(5s);
  ScriptedStatus status([](TimePoint) { return stopped_at_red(); }, clock);
  const auto r = validate_instruction(program_for(kUseFlag), shipped(), status, clock);
  EXPECT_EQ(r.activation, Activation::Activated);
  ASSERT_EQ(r.polls.size(), 1u);
  EXPECT_EQ(r.decided_at, 5s);
  EXPECT_EQ(r.effective_timer, 10s);
  EXPECT_FALSE(r.reason.has_value());
}

TEST(Validation, ExpiresWhenConditionsNeverHold)
{
  ScriptedClock clock(0s);
  ScriptedStatus status([](TimePoint) { return VehicleStatus{MotionState::Driving, std::nullopt, 22.0, {}}; }, clock);
  const auto r = validate_instruction(program_for(kLaneChange), shipped(), status, clock);
  EXPECT_EQ(r.activation, Activation::NotActivated);
  EXPECT_EQ(r.reason, RejectReason::ConditionsNeverMet);
  EXPECT_GE(r.decided_at, 10s);
  EXPECT_LE(r.decided_at, 10s + kPollPeriod);
  EXPECT_EQ(r.polls.size(), 100u);
  for (const auto & poll : r.polls) {
    EXPECT_FALSE(poll.matched);
  }
}

TEST(Validation, NoRuleMeansZeroPolls)
{
  ScriptedClock clock(0s);
  ScriptedStatus status([](TimePoint) { return stopped_at_red(); }, clock);
  const auto r = validate_instruction(program_for({"planning", "nowhere", "x"}), shipped(), status, clock);
  EXPECT_EQ(r.activation, Activation::NotActivated);
  EXPECT_EQ(r.reason, RejectReason::NoRule);
  EXPECT_TRUE(r.polls.empty());
  EXPECT_EQ(status.calls, 0u);
  EXPECT_EQ(r.decided_at, 0s);
}

TEST(Validation, StatusOutage)
{
  ScriptedClock clock(0s);
  ScriptedStatus status([](TimePoint) { return std::optional<VehicleStatus>{}; }, clock);
  try {
    validate_instruction(program_for(kUseFlag), shipped(), status, clock);
    FAIL();
  } catch (const ValidationError & e) {
    EXPECT_EQ(e.code(), ValidationErrorCode::StatusUnavailable);
  }
  EXPECT_GT(clock.now(), kStatusOutageLimit);
  EXPECT_LE(clock.now(), kStatusOutageLimit + kPollPeriod);
}

TEST(Validation, TimerCapOnlyShortens)
{
  Rule rule;
  rule.search_index = kUseFlag;
  rule.timer_cap_seconds = 5.0;
  EXPECT_EQ(effective_timer(program_for(kUseFlag, 10.0), rule), 5s);
  EXPECT_EQ(effective_timer(program_for(kUseFlag, 3.0), rule), 3s);
  rule.timer_cap_seconds.reset();
  EXPECT_EQ(effective_timer(program_for(kUseFlag, 30.0), rule), 30s);
}

TEST(ValidationProperty, ScriptedFlipsAndExpiryBound)
{
  proptest::Gen gen(0xB4);
  for (int trial = 0; trial < 300; ++trial) {
    const double timer = static_cast<double>(gen.range(1, 150)) / 10.0;
    const auto flip = Duration{std::chrono::milliseconds(gen.range(0, 20000))};
    ScriptedClock clock(Duration{std::chrono::milliseconds(gen.range(0, 100000))});
    const auto start = clock.now();
    ScriptedStatus status(
      [&](TimePoint t) {
        return t - start >= flip ? stopped_at_red() : VehicleStatus{MotionState::Driving, std::nullopt, 3.0, {}};
      },
      clock);
    const auto r = validate_instruction(program_for(kUseFlag, timer), shipped(), status, clock);
    const auto lifetime = seconds_to_duration(timer);
    // Brute force over poll instants: the first poll at or after the flip decides.
    std::optional<TimePoint> expected;
    for (std::int64_t k = 0; start + kPollPeriod * k < start + lifetime; ++k) {
      if (kPollPeriod * k >= flip) {
        expected = start + kPollPeriod * k;
        break;
      }
    }
    if (expected) {
      ASSERT_EQ(r.activation, Activation::Activated) << trial;
      ASSERT_EQ(r.decided_at, *expected);
      ASSERT_LE(r.decided_at - (start + flip), kPollPeriod);
      ASSERT_TRUE(r.polls.back().matched);
    } else {
      ASSERT_EQ(r.activation, Activation::NotActivated) << trial;
      ASSERT_LE(r.decided_at, start + lifetime + kPollPeriod);
      ASSERT_GE(r.decided_at, start + lifetime);
    }
    for (std::size_t i = 0; i + 1 < r.polls.size(); ++i) {
      ASSERT_FALSE(r.polls[i].matched);
    }
  }
}

TEST(Bench, StatsAndErrors)
{
  const auto setup = harness::make_bench_setup(shipped(), 50);
  EXPECT_EQ(setup.rule_base.size(), 50u);
  const auto stats = bench_rule_matching(setup.rule_base, setup.probes, setup.status, kMinBenchRounds);
  EXPECT_EQ(stats.rounds, kMinBenchRounds);
  EXPECT_GT(stats.hits, 0u);
  EXPECT_LE(stats.mean_ms, stats.max_ms);
  EXPECT_LE(stats.p99_ms, stats.max_ms);
  EXPECT_THROW(bench_rule_matching(setup.rule_base, setup.probes, setup.status, 0), std::invalid_argument);
  EXPECT_THROW(bench_rule_matching(setup.rule_base, {}, setup.status, 1000), std::invalid_argument);

  const RuleBase empty;
  const auto miss = bench_rule_matching(empty, setup.probes, setup.status, kMinBenchRounds);
  EXPECT_EQ(miss.hits, 0u);
  EXPECT_TRUE(std::isfinite(miss.max_ms));

  const auto padded = harness::make_bench_setup(shipped(), 200);
  EXPECT_EQ(padded.rule_base.size(), 200u);
  EXPECT_EQ(harness::make_bench_setup(shipped(), 1).rule_base.size(), 1u);
}
