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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "flexlane/autoir/program.hpp"
#include "flexlane/executor/executor.hpp"
#include "flexlane/executor/param_store.hpp"
#include "flexlane/harness/stack.hpp"
#include "flexlane/rules/rule_base.hpp"
#include "flexlane/sim/predicates.hpp"
#include "flexlane/sim/scenario.hpp"

namespace flexlane::harness
{

struct RunTranscript
{
  sim::Scenario scenario;
  std::optional<std::string> instruction;
  std::string provider;
  std::optional<std::uint64_t> seed;  // recorded only; every component is deterministic
  std::optional<double> injected_at;  // sim seconds
  std::vector<nlohmann::json> traces;
  std::vector<executor::InstructionRecord> records;
  std::vector<executor::ChangeLogEntry> changes;
  std::vector<sim::WorldState> states;  // initial state first
  std::vector<sim::PredicateOutcome> outcomes;
  double wall_seconds{0.0};

  bool success() const;
};

/// Runs the scenario to its horizon, speaking `instruction` at the scripted
/// injection point. Translation and validation problems end up in the traces.
RunTranscript run_scenario(
  const Stack & stack, const sim::Scenario & scenario, const std::optional<std::string> & instruction,
  std::optional<std::uint64_t> seed = std::nullopt);

/// JSON Lines: one header, the traces, instruction records and parameter
/// changes, one line per tick, then the outcome.
void write_transcript(std::ostream & out, const RunTranscript & transcript);

/// Reads back what write_transcript produced. Outcomes are taken from the file.
RunTranscript read_transcript(std::istream & in);

/// Recomputes the predicates from the recorded scenario and states only.
std::vector<sim::PredicateOutcome> reevaluate(const RunTranscript & transcript);

/// Runs the scenario without instructions up to its injection point and turns
/// the vehicle status there into a rule draft for `program`'s parameter.
/// Throws HarnessError(InjectionNeverReached) when the horizon ends first.
rules::Rule draft_rule(const sim::Scenario & scenario, const autoir::AutoIRProgram & program);

inline constexpr double kDraftSpeedBand = 0.5;  // m/s each side of the observed speed

}  // namespace flexlane::harness
