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

#include "flexlane/harness/run.hpp"

#include <chrono>
#include <istream>
#include <ostream>
#include <sstream>

#include "flexlane/harness/eval.hpp"
#include "flexlane/harness/session.hpp"
#include "flexlane/sim/simulator.hpp"
#include "flexlane/sim/world.hpp"

namespace flexlane::harness
{

using nlohmann::json;

namespace
{

sim::PredicateOutcome outcome_from_json(const json & j)
{
  sim::PredicateOutcome o;
  o.id = j.at("id").get<std::string>();
  o.kind = j.at("kind").get<std::string>();
  o.passed = j.at("passed").get<bool>();
  if (j.contains("value") && !j.at("value").is_null()) {
    o.value = j.at("value").get<double>();
  }
  o.detail = j.value("detail", std::string());
  return o;
}

template <typename T>
json optional_json(const std::optional<T> & value)
{
  return value ? json(*value) : json(nullptr);
}

}  // namespace

bool RunTranscript::success() const
{
  for (const auto & o : outcomes) {
    if (!o.passed) {
      return false;
    }
  }
  return true;
}

RunTranscript run_scenario(
  const Stack & stack, const sim::Scenario & scenario, const std::optional<std::string> & instruction,
  std::optional<std::uint64_t> seed)
{
  const auto started = std::chrono::steady_clock::now();
  RunTranscript out;
  out.scenario = scenario;
  out.instruction = instruction;
  out.provider = stack.pipeline->provider().name();
  out.seed = seed;

  Session session(stack, scenario);
  sim::InjectionTrigger trigger(scenario.injection);
  const auto horizon = scenario.horizon_ticks();
  while (session.simulator().state().tick < horizon) {
    const auto & state = session.step();
    if (instruction && trigger.observe(state)) {
      session.submit_instruction(*instruction);
      out.injected_at = state.time();
    }
  }

  out.traces = session.traces().all();
  out.records = session.executor().records();
  out.changes = session.store().change_log();
  out.states = session.states();
  out.outcomes = sim::evaluate_predicates(scenario, out.states);
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

void write_transcript(std::ostream & out, const RunTranscript & t)
{
  out << json{
           {"type", "header"},
           {"scenario", t.scenario.id},
           {"instruction", optional_json(t.instruction)},
           {"provider", t.provider},
           {"seed", optional_json(t.seed)},
           {"injected_at", optional_json(t.injected_at)},
           {"dt", sim::kDt},
           {"script", t.scenario.source},
         }.dump()
      << '\n';
  for (const auto & trace : t.traces) {
    out << json{{"type", "trace"}, {"trace", trace}}.dump() << '\n';
  }
  for (const auto & record : t.records) {
    out << json{{"type", "instruction"}, {"record", executor::record_to_json(record)}}.dump() << '\n';
  }
  for (const auto & change : t.changes) {
    out << json{{"type", "change"}, {"change", executor::change_to_json(change)}}.dump() << '\n';
  }
  for (const auto & state : t.states) {
    out << json{{"type", "tick"}, {"state", sim::world_to_json(state)}}.dump() << '\n';
  }
  json outcomes = json::array();
  for (const auto & o : t.outcomes) {
    outcomes.push_back(sim::outcome_to_json(o));
  }
  out << json{{"type", "outcome"}, {"success", t.success()}, {"predicates", std::move(outcomes)},
           {"wall_seconds", t.wall_seconds}}
           .dump()
      << '\n';
}

RunTranscript read_transcript(std::istream & in)
{
  RunTranscript t;
  bool have_header = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    try {
      const auto j = json::parse(line);
      const auto type = j.at("type").get<std::string>();
      if (type == "header") {
        t.scenario = sim::scenario_from_json(j.at("script").dump());
        if (!j.at("instruction").is_null()) {
          t.instruction = j.at("instruction").get<std::string>();
        }
        t.provider = j.at("provider").get<std::string>();
        if (!j.at("seed").is_null()) {
          t.seed = j.at("seed").get<std::uint64_t>();
        }
        if (!j.at("injected_at").is_null()) {
          t.injected_at = j.at("injected_at").get<double>();
        }
        have_header = true;
      } else if (type == "trace") {
        t.traces.push_back(j.at("trace"));
      } else if (type == "tick") {
        t.states.push_back(sim::world_from_json(j.at("state")));
      } else if (type == "outcome") {
        for (const auto & o : j.at("predicates")) {
          t.outcomes.push_back(outcome_from_json(o));
        }
        t.wall_seconds = j.value("wall_seconds", 0.0);
      }
    } catch (const json::exception & e) {
      throw HarnessError(HarnessErrorCode::BadInput, "transcript line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_header) {
    throw HarnessError(HarnessErrorCode::BadInput, "transcript has no header line");
  }
  return t;
}

std::vector<sim::PredicateOutcome> reevaluate(const RunTranscript & transcript)
{
  return sim::evaluate_predicates(transcript.scenario, transcript.states);
}

rules::Rule draft_rule(const sim::Scenario & scenario, const autoir::AutoIRProgram & program)
{
  sim::Simulator simulator(scenario);
  sim::InjectionTrigger trigger(scenario.injection);
  const auto horizon = scenario.horizon_ticks();
  while (simulator.state().tick < horizon) {
    const auto & state = simulator.step();
    if (!trigger.observe(state)) {
      continue;
    }
    const auto status = simulator.vehicle_status();
    rules::Rule rule;
    rule.search_index = program.path();
    rule.conditions.motion_state = status.motion_state == rules::MotionState::Stopped
                                     ? rules::MotionCondition::Stopped
                                     : rules::MotionCondition::Driving;
    rule.conditions.speed_min = std::max(0.0, status.speed - kDraftSpeedBand);
    rule.conditions.speed_max = status.speed + kDraftSpeedBand;
    rule.conditions.required = status.perceptions;
    std::ostringstream description;
    description << "draft from " << scenario.id << " at t=" << state.time() << " s";
    rule.description = description.str();
    rules::check_rule(rule);
    return rule;
  }
  throw HarnessError(
    HarnessErrorCode::InjectionNeverReached, "injection point of '" + scenario.id + "' not reached within the horizon");
}

}  // namespace flexlane::harness
