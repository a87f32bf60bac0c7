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

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "flexlane/sim/scenario.hpp"

namespace flexlane::sim
{

struct PredicateOutcome
{
  std::string id;
  std::string kind;
  bool passed{false};
  std::optional<double> value;
  std::string detail;

  bool operator==(const PredicateOutcome &) const = default;
};

nlohmann::json outcome_to_json(const PredicateOutcome & outcome);

/// Evaluates one predicate over recorded states (initial state first).
PredicateOutcome evaluate_predicate(
  const PredicateSpec & spec, const Scenario & scenario, const std::vector<WorldState> & states);

std::vector<PredicateOutcome> evaluate_predicates(const Scenario & scenario, const std::vector<WorldState> & states);

// Measurements shared by predicates and tests.

/// First tick whose front offset passes the stop line.
std::optional<std::int64_t> first_crossing_tick(
  const Scenario & scenario, const std::string & stop_line, const std::vector<WorldState> & states);

/// Distance between the front and the obstacle at the first standstill in its lane.
std::optional<double> first_stop_gap(const std::string & obstacle, const std::vector<WorldState> & states);

/// Ticks spent at rest starting from the first standstill behind the obstacle.
std::optional<std::int64_t> first_stop_hold_ticks(
  const std::string & obstacle, const std::vector<WorldState> & states);

}  // namespace flexlane::sim
