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

// Acceptance run: one PASS/FAIL line per headline criterion. Exit status 0
// only when every line passes.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "flexlane/bus/message_bus.hpp"
#include "flexlane/executor/executor.hpp"
#include "flexlane/harness/bench_setup.hpp"
#include "flexlane/harness/eval.hpp"
#include "flexlane/harness/run.hpp"
#include "flexlane/harness/stack.hpp"
#include "flexlane/rules/bench.hpp"
#include "flexlane/rules/validation.hpp"
#include "flexlane/sim/predicates.hpp"
#include "flexlane/sim/simulator.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace
{

using namespace flexlane;
using namespace std::chrono_literals;

// Pinned tolerances.
constexpr double kMaxWallSecondsPerRun = 5.0;
constexpr double kCrossWithinSeconds = 15.0;
constexpr double kBaselineHorizonSeconds = 60.0;
constexpr double kLaneTimerSeconds = 10.0;
constexpr double kPedestrianGapMin = 3.0;
constexpr double kPedestrianGapMax = 3.3;
constexpr double kDefaultGapMin = 1.0;
constexpr double kDefaultGapMax = 1.3;
constexpr double kExtendedHoldSeconds = 5.0;
constexpr double kDefaultHoldSeconds = 2.0;
constexpr std::size_t kBenchRules = 50;
constexpr std::size_t kBenchRounds = 100000;
constexpr double kBenchWallSeconds = 60.0;
constexpr std::size_t kMinInstructionPairs = 40;
constexpr std::size_t kMinIrrelevant = 10;
constexpr int kRollbackSchedules = 200;
constexpr int kSearchBases = 1000;
constexpr int kBusSchedules = 1000;

struct Verdict
{
  bool pass{true};
  std::vector<std::string> notes;

  void require(bool ok, const std::string & what)
  {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }
};

int failures = 0;

void report(const std::string & id, const Verdict & v, const std::string & summary)
{
  std::string detail = summary;
  for (const auto & n : v.notes) {
    detail += "; " + n;
  }
  std::cout << (v.pass ? "PASS " : "FAIL ") << id << ": " << detail << std::endl;
  failures += v.pass ? 0 : 1;
}

void guarded(const std::string & id, const std::function<void(Verdict &, std::string &)> & body)
{
  Verdict v;
  std::string summary;
  try {
    body(v, summary);
  } catch (const std::exception & e) {
    v.require(false, std::string("exception: ") + e.what());
  }
  report(id, v, summary);
}

autoir::AutoIRProgram expect_program(
  const std::string & module, const std::string & node, const std::string & param, autoir::ConfigValue value)
{
  autoir::AutoIRProgram p;
  p.module_select = module;
  p.node_select = node;
  p.param_select = param;
  p.config_action = std::move(value);
  return p;
}

bool same_selection(const autoir::AutoIRProgram & a, const autoir::AutoIRProgram & b)
{
  return a.path() == b.path() && a.config_action == b.config_action;
}

const sim::PredicateOutcome * outcome(const harness::RunTranscript & t, const std::string & id)
{
  for (const auto & o : t.outcomes) {
    if (o.id == id) {
      return &o;
    }
  }
  return nullptr;
}

std::string fmt_opt(const std::optional<double> & v) { return v ? fmt::format("{:.2f}", *v) : "none"; }

void traffic_light(const harness::Stack & stack)
{
  guarded("traffic_light_override", [&](Verdict & v, std::string & summary) {
    const auto scenario = sim::load_scenario("malfunctioning_traffic_light", stack.data.scenarios());
    const auto expected =
      expect_program("perception", "traffic_light_classifier_node", "use_flag", autoir::ConfigValue{false});
    const std::vector<std::string> phrasings{
      "The traffic light seems broken, ignore it.", "Do not follow the traffic light.",
      "Traffic light is crazy! It is always red."};
    for (const auto & phrase : phrasings) {
      const auto t = harness::run_scenario(stack, scenario, phrase);
      v.require(t.wall_seconds < kMaxWallSecondsPerRun, fmt::format("'{}' took {:.2f} s", phrase, t.wall_seconds));
      if (t.records.size() != 1) {
        v.require(false, fmt::format("'{}' produced {} instructions", phrase, t.records.size()));
        continue;
      }
      const auto & rec = t.records.front();
      v.require(same_selection(rec.program, expected), "'" + phrase + "' wrong program " + rec.program.path().str());
      v.require(rec.activated_at.has_value(), "'" + phrase + "' never activated");
      const bool rule_ok = rec.rule && rec.rule->conditions.motion_state == rules::MotionCondition::Stopped &&
                           rec.rule->conditions.speed_min == 0.0 && rec.rule->conditions.speed_max == 0.0 &&
                           rec.rule->conditions.required ==
                             rules::PerceptionSet{rules::Perception::TrafficLightDetected};
      v.require(rule_ok, "'" + phrase + "' matched the wrong rule");
      const auto crossing = sim::first_crossing_tick(scenario, "sl_main", t.states);
      const bool crossed = crossing && t.injected_at &&
                           static_cast<double>(*crossing) * sim::kDt - *t.injected_at <= kCrossWithinSeconds;
      v.require(crossed, "'" + phrase + "' did not cross within the window");
      if (phrase == phrasings[1] && crossing && t.injected_at) {
        summary = fmt::format(
          "3 phrasings translated and activated; crossing {:.1f} s after injection",
          static_cast<double>(*crossing) * sim::kDt - *t.injected_at);
      }
    }
    auto baseline_scenario = scenario;
    baseline_scenario.horizon = kBaselineHorizonSeconds;
    const auto baseline = harness::run_scenario(stack, baseline_scenario, std::nullopt);
    v.require(
      !sim::first_crossing_tick(scenario, "sl_main", baseline.states).has_value(), "baseline crossed the stop line");
    v.require(
      baseline.states.size() == static_cast<std::size_t>(std::llround(kBaselineHorizonSeconds / sim::kDt)) + 1,
      "baseline horizon is not 60 s");
    summary += "; baseline holds 60 s";
  });
}

void lane_cruising(const harness::Stack & stack)
{
  guarded("restricted_lane_cruising", [&](Verdict & v, std::string & summary) {
    const auto scenario = sim::load_scenario("restricted_lane_cruising", stack.data.scenarios());
    const auto expected =
      expect_program("planning", "mission_planner", "lane_prefer", autoir::ConfigValue{autoir::EnumToken{"LEFT"}});
    const std::vector<std::string> phrasings{
      "I want you drive on the leftmost lane.", "Try to change to the leftmost lane.",
      "I wanted to get as close to the left road as possible."};
    for (const auto & phrase : phrasings) {
      const auto t = harness::run_scenario(stack, scenario, phrase);
      v.require(t.wall_seconds < kMaxWallSecondsPerRun, fmt::format("'{}' took {:.2f} s", phrase, t.wall_seconds));
      if (t.records.size() != 1 || !t.records.front().activated_at || !t.records.front().finished_at) {
        v.require(false, "'" + phrase + "' did not run an override to completion");
        continue;
      }
      const auto & rec = t.records.front();
      v.require(same_selection(rec.program, expected), "'" + phrase + "' wrong program " + rec.program.path().str());
      const auto held_for = to_seconds(*rec.finished_at - *rec.activated_at);
      v.require(std::abs(held_for - kLaneTimerSeconds) < 1e-9, fmt::format("override lasted {:.2f} s", held_for));

      // Lane id constant once reached, for the rest of the override.
      const auto begin = static_cast<std::size_t>(std::llround(to_seconds(*rec.activated_at) / sim::kDt));
      const auto end = static_cast<std::size_t>(std::llround(to_seconds(*rec.finished_at) / sim::kDt));
      std::optional<std::size_t> reached;
      bool held = true;
      for (std::size_t i = begin; i <= end && i < t.states.size(); ++i) {
        const auto & veh = t.states[i].vehicle;
        if (!reached && veh.occupied_lane == "lane_left" && veh.maneuver.kind == sim::ManeuverKind::None) {
          reached = i;
        }
        if (reached) {
          held = held && veh.occupied_lane == "lane_left";
        }
      }
      v.require(reached.has_value(), "'" + phrase + "' never reached the leftmost lane");
      v.require(held, "'" + phrase + "' left the leftmost lane during the override");
      // The planning pass right after expiry targets the route lane again.
      v.require(
        end + 1 < t.states.size() && t.states[end + 1].vehicle.target_lane == scenario.route_lane,
        "'" + phrase + "' kept the lane policy after expiry");
      const auto * o1 = outcome(t, "leftmost_lane_held");
      const auto * o2 = outcome(t, "lane_policy_reverted");
      v.require(o1 && o1->passed && o2 && o2->passed, "'" + phrase + "' scenario predicates unmet");
      if (phrase == phrasings[0] && reached) {
        summary = fmt::format(
          "3 phrasings; leftmost lane reached {:.1f} s after activation and held; reverted one tick after expiry",
          static_cast<double>(*reached - begin) * sim::kDt);
      }
    }
  });
}

void stack_scenarios(const harness::Stack & stack)
{
  guarded("stack_parameter_scenarios", [&](Verdict & v, std::string & summary) {
    const auto dir = stack.data.scenarios();
    const auto ped = sim::load_scenario("pedestrian_margin", dir);
    const auto ped_on = harness::run_scenario(stack, ped, ped.default_instruction);
    const auto ped_off = harness::run_scenario(stack, ped, std::nullopt);
    const auto gap_on = sim::first_stop_gap("ped_1", ped_on.states);
    const auto gap_off = sim::first_stop_gap("ped_1", ped_off.states);
    v.require(gap_on && *gap_on >= kPedestrianGapMin && *gap_on <= kPedestrianGapMax, "instructed gap " + fmt_opt(gap_on));
    v.require(gap_off && *gap_off >= kDefaultGapMin && *gap_off <= kDefaultGapMax, "default gap " + fmt_opt(gap_off));

    const auto cone = sim::load_scenario("cone_opposite_lane", dir);
    const auto cone_on = harness::run_scenario(stack, cone, cone.default_instruction);
    const auto cone_off = harness::run_scenario(stack, cone, std::nullopt);
    const auto * bypass = outcome(cone_on, "cone_bypassed");
    v.require(bypass && bypass->passed, "cone not passed via the twin lane");
    const auto & last_on = cone_on.states.back().vehicle;
    v.require(last_on.occupied_lane == "fwd" && last_on.maneuver.kind == sim::ManeuverKind::None, "did not return to its lane");
    bool stayed = false;
    std::optional<std::int64_t> stopped_at;
    for (const auto & s : cone_off.states) {
      if (!stopped_at && s.vehicle.speed == 0.0 && s.tick > 0) {
        stopped_at = s.tick;
        stayed = true;
      }
      if (stopped_at) {
        stayed = stayed && s.vehicle.speed == 0.0 && s.vehicle.occupied_lane == "fwd";
      }
    }
    v.require(stayed, "default run did not stay stopped behind the cone");

    const auto ext = sim::load_scenario("extended_stop", dir);
    const auto hold_on = sim::first_stop_hold_ticks("cone_1", harness::run_scenario(stack, ext, ext.default_instruction).states);
    const auto hold_off = sim::first_stop_hold_ticks("cone_1", harness::run_scenario(stack, ext, std::nullopt).states);
    const auto secs = [](const std::optional<std::int64_t> & t) -> std::optional<double> {
      return t ? std::optional(static_cast<double>(*t) * sim::kDt) : std::nullopt;
    };
    v.require(hold_on && secs(hold_on) >= kExtendedHoldSeconds - 1e-9, "instructed hold " + fmt_opt(secs(hold_on)));
    v.require(hold_off && secs(hold_off) >= kDefaultHoldSeconds - 1e-9, "default hold " + fmt_opt(secs(hold_off)));
    summary = fmt::format(
      "pedestrian gap {} m vs {} m; cone passed via twin and returned, default stays stopped; hold {} s vs {} s",
      fmt_opt(gap_on), fmt_opt(gap_off), fmt_opt(secs(hold_on)), fmt_opt(secs(hold_off)));
  });
}

void bench(const harness::Stack & stack)
{
  guarded("rule_matching_latency", [&](Verdict & v, std::string & summary) {
    const auto setup = harness::make_bench_setup(*stack.rule_base, kBenchRules);
    const auto started = std::chrono::steady_clock::now();
    const auto stats = rules::bench_rule_matching(setup.rule_base, setup.probes, setup.status, kBenchRounds);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    v.require(stats.max_ms <= rules::kRuleMatchFallbackMs, fmt::format("max above the {} ms fallback", rules::kRuleMatchFallbackMs));
    v.require(wall < kBenchWallSeconds, fmt::format("took {:.1f} s", wall));
    v.require(setup.rule_base.size() == kBenchRules, "rule base size");
    const char * tier = stats.max_ms <= rules::kRuleMatchBudgetMs ? "within 0.77 ms target" : "within fallback only";
    summary = fmt::format(
      "{} rules x {} rounds: max {:.4f} ms, p99 {:.5f} ms, mean {:.5f} ms ({})", setup.rule_base.size(), stats.rounds,
      stats.max_ms, stats.p99_ms, stats.mean_ms, stats.max_ms <= rules::kRuleMatchFallbackMs ? tier : "over budget");
  });
}

void golden(const harness::Stack & stack)
{
  guarded("translation_golden_suite", [&](Verdict & v, std::string & summary) {
    const auto items = harness::load_golden(stack.data.golden());
    const auto r = harness::evaluate(items, *stack.pipeline);
    v.require(r.instruction_pairs >= kMinInstructionPairs, fmt::format("only {} instruction pairs", r.instruction_pairs));
    v.require(r.irrelevant >= kMinIrrelevant, fmt::format("only {} irrelevant utterances", r.irrelevant));
    for (double column : {r.module_select, r.node_select, r.param_select, r.config_action, r.overall, r.relevance}) {
      v.require(column == 100.0, fmt::format("column at {:.1f} %", column));
    }
    const auto degraded_stack = harness::load_stack(stack.data, harness::make_provider("mock", stack.data), stack.data.kb_manual());
    const auto d = harness::evaluate(items, *degraded_stack.pipeline);
    v.require(d.overall < r.overall, "degraded knowledge base is not worse");
    summary = fmt::format(
      "{} pairs + {} irrelevant: 100 % on every column; monolithic manual overall {:.1f} %", r.instruction_pairs,
      r.irrelevant, d.overall);
  });
}

// Randomized registry, rule base and schedule; true when everything rolled back.
bool rollback_schedule(proptest::Gen & gen, std::string & why)
{
  auto registry = std::make_shared<autoir::ParamRegistry>();
  auto base = std::make_shared<rules::RuleBase>();
  std::vector<autoir::ParamPath> paths;
  const auto n = gen.range(1, 12);
  for (int i = 0; i < n; ++i) {
    const auto path = gen.small_path();
    if (registry->find(path) != nullptr) {
      continue;
    }
    autoir::ParamDescriptor d;
    switch (gen.below(3)) {
      case 0:
        d.value_type = autoir::ValueType::Boolean;
        d.default_value = gen.chance(0.5);
        break;
      case 1:
        d.value_type = autoir::ValueType::Number;
        d.min = 0.0;
        d.max = 10.0;
        d.default_value = static_cast<double>(gen.range(0, 100)) / 10.0;
        break;
      default:
        d.value_type = autoir::ValueType::Enum;
        d.tokens = {"A", "B", "C"};
        d.default_value = autoir::EnumToken{gen.pick(d.tokens)};
        break;
    }
    registry->add(path, d);
    paths.push_back(path);
    if (gen.chance(0.8)) {
      auto rule = gen.rule(path);
      rule.conditions.speed_max = rules::kUnboundedSpeed;
      base->add(rule);
    }
  }
  executor::ParamStore store(registry);
  struct Status final : rules::StatusSource
  {
    std::optional<rules::VehicleStatus> value;
    std::optional<rules::VehicleStatus> current_status() override { return value; }
  } status;
  status.value = gen.status();
  executor::Executor exec(base, store, status);
  const auto initial = store.serialize();
  TimePoint now{};
  std::vector<std::string> ids;
  for (int s = 0, steps = static_cast<int>(gen.range(10, 400)); s < steps; ++s) {
    const auto roll = gen.below(10);
    if (roll < 2) {
      const auto path = gen.pick(paths);
      const auto * d = registry->find(path);
      autoir::AutoIRProgram p;
      p.module_select = path.module;
      p.node_select = path.node;
      p.param_select = path.param;
      p.timer_seconds = static_cast<double>(gen.range(1, 100)) / 10.0;
      if (gen.chance(0.1)) {
        p.config_action = gen.config_value();
      } else if (d->value_type == autoir::ValueType::Boolean) {
        p.config_action = gen.chance(0.5);
      } else if (d->value_type == autoir::ValueType::Number) {
        p.config_action = static_cast<double>(gen.range(0, 120)) / 10.0;
      } else {
        p.config_action = autoir::EnumToken{gen.pick(d->tokens)};
      }
      try {
        ids.push_back(exec.submit(p, now));
      } catch (const executor::ExecutorError &) {
      }
    } else if (roll == 2) {
      status.value = gen.chance(0.9) ? std::optional(gen.status()) : std::nullopt;
    } else if (roll == 3 && !ids.empty() && gen.chance(0.3)) {
      exec.cancel(gen.pick(ids), now);
    }
    now += Duration{std::chrono::milliseconds(gen.range(0, 300))};
    exec.tick(now);
  }
  status.value = gen.status();
  for (int i = 0; i < 200 && !exec.idle(); ++i) {
    now += 100ms;
    exec.tick(now);
  }
  if (!exec.idle()) {
    why = "instructions left non-terminal";
    return false;
  }
  if (store.serialize() != initial) {
    why = "store differs from defaults";
    return false;
  }
  std::set<std::string> activated;
  for (const auto & rec : exec.records()) {
    if (rec.activated_at) {
      activated.insert(rec.id);
    }
  }
  for (const auto & e : store.change_log()) {
    const auto & owner = e.cause == "restore" ? *e.instruction : e.cause;
    if (!activated.contains(owner)) {
      why = "write by non-activated " + owner;
      return false;
    }
  }
  return true;
}

void rollback()
{
  guarded("rollback_exactness", [&](Verdict & v, std::string & summary) {
    proptest::Gen gen(0xACCE55);
    for (int i = 0; i < kRollbackSchedules && v.pass; ++i) {
      std::string why;
      v.require(rollback_schedule(gen, why), fmt::format("schedule {}: {}", i, why));
    }
    summary = fmt::format("{} randomized schedules restored byte-exact, no write without activation", kRollbackSchedules);
  });
}

void oracles(const harness::Stack & stack)
{
  guarded("oracle_equivalences", [&](Verdict & v, std::string & summary) {
    proptest::Gen gen(0x0AC1E);
    for (int trial = 0; trial < kSearchBases && v.pass; ++trial) {
      const auto base = gen.rule_base(40);
      for (int probe = 0; probe < 30; ++probe) {
        autoir::AutoIRProgram p;
        const auto path = gen.small_path();
        p.module_select = path.module;
        p.node_select = path.node;
        p.param_select = path.param;
        const auto * tree = rules::search_rule(base, p);
        const auto * linear = proptest::linear_search(base, p);
        v.require((tree == nullptr) == (linear == nullptr) && (!tree || *tree == *linear), fmt::format("search base {}", trial));
      }
    }

    for (int trial = 0; trial < kBusSchedules && v.pass; ++trial) {
      bus::MessageBus b;
      b.declare_topic("/a", bus::Schema::VelocityStatus, bus::QueuePolicy::drop_oldest(1024));
      std::vector<bus::Publisher> pubs;
      for (int i = 0, n = static_cast<int>(gen.range(1, 5)); i < n; ++i) {
        pubs.push_back(b.make_publisher("/a"));
      }
      auto sub = b.subscribe("/a");
      std::map<std::uint64_t, std::vector<double>> sent;
      std::map<std::uint64_t, std::vector<double>> got;
      for (int s = 0, steps = static_cast<int>(gen.range(1, 60)); s < steps; ++s) {
        auto & p = pubs[gen.below(pubs.size())];
        const double value = gen.uniform(0, 30);
        p.publish(bus::VelocityStatusMsg{value});
        sent[p.id()].push_back(value);
      }
      std::map<std::uint64_t, std::uint64_t> last;
      for (const auto & e : sub.drain()) {
        v.require(e.seq == ++last[e.publisher_id], fmt::format("bus schedule {} sequence gap", trial));
        got[e.publisher_id].push_back(std::get<bus::VelocityStatusMsg>(e.payload).speed);
      }
      v.require(got == sent, fmt::format("bus schedule {} order", trial));
    }

    for (const auto * id : sim::kShippedScenarios) {
      std::string first;
      for (int run = 0; run < 2; ++run) {
        sim::Simulator s(sim::load_scenario(id, stack.data.scenarios()));
        std::vector<sim::WorldState> states{s.state()};
        for (std::int64_t i = 0; i < s.scenario().horizon_ticks(); ++i) {
          states.push_back(s.step());
        }
        std::ostringstream out;
        sim::write_trajectory(out, states);
        if (run == 0) {
          first = out.str();
        } else {
          v.require(out.str() == first, std::string("trajectory of ") + id + " differs");
        }
      }
    }
    summary = fmt::format(
      "tree = linear on {} bases; per-publisher FIFO on {} schedules; {} scenarios replay byte-identical", kSearchBases,
      kBusSchedules, std::size(sim::kShippedScenarios));
  });
}

class ScriptedStatus final : public rules::StatusSource
{
public:
  explicit ScriptedStatus(std::optional<rules::VehicleStatus> s) : status_(std::move(s)) {}
  std::optional<rules::VehicleStatus> current_status() override
  {
    ++calls;
    return status_;
  }
  std::size_t calls{0};

private:
  std::optional<rules::VehicleStatus> status_;
};

void validation(const harness::Stack & stack)
{
  guarded("validation_conformance", [&](Verdict & v, std::string & summary) {
    const auto light = expect_program("perception", "traffic_light_classifier_node", "use_flag", autoir::ConfigValue{false});
    const rules::VehicleStatus at_red{rules::MotionState::Stopped, "RedLight", 0.0, {rules::Perception::TrafficLightDetected}};
    const rules::VehicleStatus cruising{rules::MotionState::Driving, std::nullopt, 8.0, {}};

    ScriptedClock c1(3s);
    ScriptedStatus s1(at_red);
    const auto r1 = rules::validate_instruction(light, *stack.rule_base, s1, c1);
    v.require(r1.activation == rules::Activation::Activated && r1.polls.size() == 1 && r1.decided_at == 3s, "first-poll activation");

    ScriptedClock c2(3s);
    ScriptedStatus s2(cruising);
    const auto r2 = rules::validate_instruction(light, *stack.rule_base, s2, c2);
    const auto lifetime = 3s + seconds_to_duration(light.timer_seconds);
    v.require(
      r2.activation == rules::Activation::NotActivated && r2.reason == rules::RejectReason::ConditionsNeverMet &&
        r2.decided_at >= lifetime && r2.decided_at <= lifetime + rules::kPollPeriod,
      "expiry bound");

    ScriptedClock c3(3s);
    ScriptedStatus s3(at_red);
    const auto r3 = rules::validate_instruction(
      expect_program("planning", "nowhere", "nothing", autoir::ConfigValue{true}), *stack.rule_base, s3, c3);
    v.require(
      r3.activation == rules::Activation::NotActivated && r3.reason == rules::RejectReason::NoRule &&
        r3.polls.empty() && s3.calls == 0,
      "NoRule with zero polls");
    summary = fmt::format(
      "activated on poll 1; NotActivated at lifetime + {:.1f} s after {} polls; NoRule with 0 polls",
      to_seconds(r2.decided_at - lifetime), r2.polls.size());
  });
}

}  // namespace

int main(int argc, char ** argv)
{
  try {
    const auto data = harness::resolve_data_dir(argc > 1 ? std::optional<std::string>(argv[1]) : std::nullopt);
    const auto stack = harness::load_stack(data, harness::make_provider("mock", data));
    traffic_light(stack);
    lane_cruising(stack);
    stack_scenarios(stack);
    bench(stack);
    golden(stack);
    rollback();
    oracles(stack);
    validation(stack);
  } catch (const std::exception & e) {
    std::cout << "FAIL setup: " << e.what() << std::endl;
    return 1;
  }
  std::cout << (failures == 0 ? "all criteria met" : fmt::format("{} criteria failed", failures)) << std::endl;
  return failures == 0 ? 0 : 1;
}
