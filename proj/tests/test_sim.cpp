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

#include <cmath>
#include <sstream>

#include "flexlane/bus/message_bus.hpp"
#include "flexlane/bus/status_assembler.hpp"
#include "flexlane/sim/predicates.hpp"
#include "flexlane/sim/scenario.hpp"
#include "flexlane/sim/simulator.hpp"
#include "support/generators.hpp"

using namespace flexlane;
using namespace flexlane::sim;
using nlohmann::json;

namespace
{

const std::filesystem::path kScenarioDir = std::filesystem::path(FLEXLANE_TEST_DATA_DIR) / "scenarios";

Scenario shipped(const std::string & id) { return load_scenario(id, kScenarioDir); }

/// Initial state first, then one state per tick.
std::vector<WorldState> run(Simulator & sim, std::int64_t ticks)
{
  std::vector<WorldState> states{sim.state()};
  for (std::int64_t i = 0; i < ticks; ++i) {
    states.push_back(sim.step());
  }
  return states;
}

std::vector<WorldState> run(Scenario scenario)
{
  const auto ticks = scenario.horizon_ticks();
  Simulator sim(std::move(scenario));
  return run(sim, ticks);
}

const PredicateSpec & predicate(const Scenario & s, const std::string & id)
{
  for (const auto & p : s.predicates) {
    if (p.id == id) {
      return p;
    }
  }
  throw std::runtime_error("no predicate " + id);
}

json single_lane(double length, double offset, double speed)
{
  return {
    {"id", "generated"},
    {"description", "generated"},
    {"map", {{"lanes", json::array({{{"id", "main"}, {"length", length}}})}}},
    {"initial", {{"lane", "main"}, {"offset", offset}, {"speed", speed}}},
    {"cruise_speed", speed},
    {"route_lane", "main"},
    {"horizon", 30.0},
    {"injection", {{"kind", "at"}, {"time", 1.0}}},
    {"default_instruction", "x"},
    {"predicates", json::array()},
  };
}

SimErrorCode code_of(const std::function<void()> & fn)
{
  try {
    fn();
  } catch (const SimError & e) {
    return e.code();
  }
  ADD_FAILURE() << "no SimError";
  return SimErrorCode::UnknownScenario;
}

}  // namespace

TEST(Scenario, ShippedScriptsLoad)
{
  EXPECT_EQ(list_scenarios(kScenarioDir).size(), std::size(kShippedScenarios));
  for (const auto * id : kShippedScenarios) {
    const auto s = shipped(id);
    EXPECT_EQ(s.id, id);
    EXPECT_FALSE(s.default_instruction.empty());
    EXPECT_FALSE(s.predicates.empty());
    EXPECT_EQ(s.horizon_ticks(), std::llround(s.horizon / kDt));
  }
  EXPECT_EQ(code_of([] { shipped("no_such_scenario"); }), SimErrorCode::UnknownScenario);
}

TEST(Scenario, BadScripts)
{
  const auto good = single_lane(100, 0, 5);
  EXPECT_NO_THROW(scenario_from_json(good.dump()));
  auto expect_bad = [](json doc) {
    EXPECT_EQ(code_of([&] { scenario_from_json(doc.dump()); }), SimErrorCode::BadScript) << doc.dump();
  };
  expect_bad(json::parse("[]"));
  auto doc = good;
  doc.erase("map");
  expect_bad(doc);
  doc = good;
  doc["initial"]["lane"] = "ghost";
  expect_bad(doc);
  doc = good;
  doc["map"]["stop_lines"] = json::array({{{"id", "s"}, {"lane", "main"}, {"offset", 10}, {"light", "tl"}}});
  expect_bad(doc);  // light never initialised
  doc = good;
  doc["injection"] = {{"kind", "whenever"}};
  expect_bad(doc);
  doc = good;
  doc["initial"]["obstacles"] = json::array({{{"id", "o"}, {"kind", "truck"}, {"lane", "main"}, {"offset", 5}}});
  expect_bad(doc);
  EXPECT_EQ(code_of([] { scenario_from_json("{not json"); }), SimErrorCode::BadScript);
}

TEST(Simulator, DeterministicReplay)
{
  for (const auto * id : kShippedScenarios) {
    const auto a = run(shipped(id));
    const auto b = run(shipped(id));
    ASSERT_EQ(a, b) << id;
    for (const auto & state : a) {
      ASSERT_EQ(world_from_json(world_to_json(state)), state) << id;
    }
  }
}

TEST(Simulator, BaselineLeavesEveryPredicateUnmet)
{
  for (const auto * id : kShippedScenarios) {
    const auto s = shipped(id);
    const auto outcomes = evaluate_predicates(s, run(s));
    for (const auto & o : outcomes) {
      EXPECT_FALSE(o.passed) << id << " " << o.id << " " << o.detail;
    }
  }
}

TEST(Simulator, RedLightStopsBeforeTheLine)
{
  const auto s = shipped("malfunctioning_traffic_light");
  const auto states = run(s);
  EXPECT_FALSE(first_crossing_tick(s, "sl_main", states).has_value());
  const auto & last = states.back();
  EXPECT_EQ(last.vehicle.speed, 0.0);
  EXPECT_GE(40.0 - last.vehicle.offset, 1.0 - 1e-9);
  EXPECT_LE(40.0 - last.vehicle.offset, 1.0 + kStopTolerance);
  EXPECT_EQ(last.stop_reason, "RedLight");

  Simulator sim(s);
  const auto status = [&] {
    run(sim, 200);
    return sim.vehicle_status();
  }();
  EXPECT_EQ(status.motion_state, rules::MotionState::Stopped);
  EXPECT_EQ(status.stop_reason, "RedLight");
  EXPECT_EQ(status.speed, 0.0);
  EXPECT_EQ(status.perceptions, (rules::PerceptionSet{rules::Perception::TrafficLightDetected}));
}

TEST(Simulator, IgnoringTheLightCrosses)
{
  const auto s = shipped("malfunctioning_traffic_light");
  Simulator sim(s);
  auto states = run(sim, 50);
  ASSERT_EQ(sim.state().vehicle.speed, 0.0);
  sim.set_node_param(use_flag_path(), false);
  const auto more = run(sim, 100);
  states.insert(states.end(), more.begin() + 1, more.end());
  const auto crossing = first_crossing_tick(s, "sl_main", states);
  ASSERT_TRUE(crossing.has_value());
  EXPECT_LE(*crossing - 50, 50);
}

TEST(Simulator, StopMarginSetsPedestrianGap)
{
  const auto s = shipped("pedestrian_margin");
  const auto baseline = first_stop_gap("ped_1", run(s));
  ASSERT_TRUE(baseline.has_value());
  EXPECT_NEAR(*baseline, 1.0, kStopTolerance);

  Simulator sim(s);
  sim.set_node_param(stop_margin_path(), 3.0);
  const auto states = run(sim, s.horizon_ticks());
  const auto gap = first_stop_gap("ped_1", states);
  ASSERT_TRUE(gap.has_value());
  EXPECT_GE(*gap, 3.0);
  EXPECT_LE(*gap, 3.3);
  EXPECT_TRUE(evaluate_predicate(predicate(s, "pedestrian_gap"), s, states).passed);

  Simulator probe(s);
  run(probe, 250);
  const auto status = probe.vehicle_status();
  EXPECT_EQ(status.stop_reason, "Pedestrian");
  EXPECT_EQ(
    status.perceptions,
    (rules::PerceptionSet{rules::Perception::ObstacleDetected, rules::Perception::PedestrianDetected}));
}

TEST(Simulator, LanePreferenceReachesLeftmostLane)
{
  const auto s = shipped("restricted_lane_cruising");
  Simulator sim(s);
  sim.set_node_param(lane_prefer_path(), autoir::EnumToken{"LEFT"});
  const auto states = run(sim, 100);
  bool reached = false;
  for (const auto & st : states) {
    reached = reached || (st.vehicle.occupied_lane == "lane_left" && st.vehicle.maneuver.kind == ManeuverKind::None);
  }
  EXPECT_TRUE(reached);
  EXPECT_EQ(states.back().vehicle.lane, "lane_left");

  sim.set_node_param(lane_prefer_path(), autoir::EnumToken{"NONE"});
  const auto back = run(sim, 100);
  EXPECT_EQ(back.back().vehicle.lane, "lane_middle");
}

TEST(Simulator, StopDurationHoldsLonger)
{
  const auto s = shipped("extended_stop");
  const auto baseline = first_stop_hold_ticks("cone_1", run(s));
  ASSERT_TRUE(baseline.has_value());
  EXPECT_EQ(*baseline, 20);

  Simulator sim(s);
  sim.set_node_param(stop_duration_path(), 5.0);
  const auto hold = first_stop_hold_ticks("cone_1", run(sim, s.horizon_ticks()));
  ASSERT_TRUE(hold.has_value());
  EXPECT_EQ(*hold, 50);
}

TEST(Simulator, OppositeLaneBypass)
{
  const auto s = shipped("cone_opposite_lane");
  Simulator sim(s);
  sim.set_node_param(use_opposite_lane_path(), true);
  const auto states = run(sim, s.horizon_ticks());
  EXPECT_TRUE(evaluate_predicate(predicate(s, "cone_bypassed"), s, states).passed);
  EXPECT_EQ(states.back().vehicle.occupied_lane, "fwd");
  EXPECT_GT(states.back().vehicle.offset, 55.0);
}

TEST(Simulator, ParamAccess)
{
  Simulator sim(shipped("pedestrian_margin"));
  for (const auto & [path, value] : default_node_params()) {
    EXPECT_EQ(sim.get_node_param(path), value);
  }
  EXPECT_EQ(sim.get_node_param(stop_duration_path()), autoir::ConfigValue{2.0});
  const autoir::ParamPath ghost{"planning", "ghost", "x"};
  EXPECT_EQ(code_of([&] { sim.get_node_param(ghost); }), SimErrorCode::UnknownPath);
  EXPECT_EQ(code_of([&] { sim.set_node_param(ghost, true); }), SimErrorCode::UnknownPath);
  EXPECT_EQ(code_of([&] { sim.set_node_param(stop_margin_path(), true); }), SimErrorCode::TypeMismatch);
  EXPECT_EQ(
    code_of([&] { sim.set_node_param(lane_prefer_path(), autoir::EnumToken{"SIDEWAYS"}); }),
    SimErrorCode::TypeMismatch);
  EXPECT_EQ(sim.get_node_param(stop_margin_path()), autoir::ConfigValue{1.0});
}

TEST(Simulator, PublishStatusFeedsTheAssembler)
{
  for (const auto * id : kShippedScenarios) {
    bus::MessageBus bus;
    bus::declare_standard_topics(bus);
    std::vector<bus::Envelope> seen;
    bus.set_tap([&](const bus::Envelope & e) { seen.push_back(e); });
    bus::StatusAssembler assembler(bus);
    Simulator sim(shipped(id));
    for (int tick = 1; tick <= 100; ++tick) {
      sim.step();
      const auto before = seen.size();
      sim.publish_status(bus);
      ASSERT_EQ(seen.size() - before, 4u);
      for (std::size_t i = before; i < seen.size(); ++i) {
        ASSERT_EQ(seen[i].seq, static_cast<std::uint64_t>(tick)) << seen[i].topic;
        ASSERT_EQ(seen[i].timestamp, seconds_to_duration(sim.time()));
      }
      const auto assembled = assembler.current_status();
      ASSERT_TRUE(assembled.has_value());
      ASSERT_EQ(*assembled, sim.vehicle_status()) << id << " tick " << tick;
    }
  }
}

TEST(InjectionTrigger, FiresOnce)
{
  const auto s = shipped("malfunctioning_traffic_light");
  InjectionTrigger trigger(s.injection);
  Simulator sim(s);
  std::vector<std::int64_t> fired;
  std::optional<std::int64_t> first_stop;
  for (int i = 0; i < s.horizon_ticks(); ++i) {
    const auto & st = sim.step();
    if (!first_stop && st.vehicle.speed == 0.0) {
      first_stop = st.tick;
    }
    if (trigger.observe(st)) {
      fired.push_back(st.tick);
    }
  }
  ASSERT_EQ(fired.size(), 1u);
  ASSERT_TRUE(first_stop.has_value());
  EXPECT_EQ(fired[0] - *first_stop, 20);
  EXPECT_TRUE(trigger.fired());
}

TEST(BrakingProfile, StopsWithinGap)
{
  EXPECT_EQ(braking_profile_speed(0.0), 0.0);
  EXPECT_EQ(braking_profile_speed(-1.0), 0.0);
  proptest::Gen gen(0xD1);
  double previous = 0.0;
  for (double gap = 0.0; gap < 80.0; gap += gen.uniform(0.001, 0.3)) {
    const double v = braking_profile_speed(gap);
    ASSERT_GE(v, previous - 1e-12) << gap;
    previous = v;
    double covered = 0.0;
    for (double s = v; s > 1e-12; s -= kPlanDecel * kDt) {
      covered += s * kDt;
    }
    ASSERT_LE(covered, gap + 1e-9) << gap;
  }
}

TEST(SimulatorProperty, SafetyFloorAndKinematics)
{
  proptest::Gen gen(0xD2);
  for (int trial = 0; trial < 300; ++trial) {
    const double cruise = gen.uniform(1.0, kSpeedCap);
    auto doc = single_lane(2000.0, 0.0, cruise);
    doc["initial"]["speed"] = gen.uniform(0.0, cruise);
    const double obstacle = gen.uniform(5.0, 400.0);
    const bool pedestrian = gen.chance(0.5);
    doc["initial"]["obstacles"] = json::array(
      {{{"id", "o"}, {"kind", pedestrian ? "pedestrian" : "cone"}, {"lane", "main"}, {"offset", obstacle}}});
    const bool with_light = gen.chance(0.5);
    const double line = gen.uniform(5.0, 400.0);
    if (with_light) {
      doc["map"]["stop_lines"] =
        json::array({{{"id", "sl"}, {"lane", "main"}, {"offset", line}, {"light", "tl"}}});
      doc["initial"]["lights"] = {{"tl", "Red"}};
    }
    Simulator sim(scenario_from_json(doc.dump()));
    const double margin = std::min(gen.uniform(0.5, 5.0), 4.9);
    sim.set_node_param(stop_margin_path(), margin);

    const auto states = run(sim, 400);
    for (std::size_t i = 1; i < states.size(); ++i) {
      const auto & a = states[i - 1].vehicle;
      const auto & b = states[i].vehicle;
      ASSERT_GE(b.speed, 0.0);
      ASSERT_LE(b.speed, kSpeedCap);
      ASSERT_TRUE(b.speed == 0.0 || b.speed >= kStoppedSpeed);
      ASSERT_LE(std::abs(b.speed - a.speed), kAccelLimit * kDt + kStoppedSpeed + 1e-9) << trial;
      ASSERT_GE(b.offset, a.offset) << trial;
      ASSERT_LE(b.offset - a.offset, b.speed * kDt + 1e-9);
      // Never past the obstacle minus the configured margin.
      ASSERT_LE(b.offset, obstacle - margin + 1e-9) << trial << " tick " << i;
      if (with_light && a.offset <= line - margin) {
        ASSERT_LE(b.offset, line - margin + 1e-9) << trial;
      }
    }
  }
}
