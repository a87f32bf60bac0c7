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

#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flexlane/autoir/program.hpp"
#include "flexlane/common/error.hpp"
#include "flexlane/rules/vehicle_status.hpp"

namespace flexlane::rules
{

enum class MotionCondition { Driving, Stopped, Any };

std::string_view to_string(MotionCondition condition);

inline constexpr double kUnboundedSpeed = std::numeric_limits<double>::infinity();

struct ConditionSet
{
  MotionCondition motion_state{MotionCondition::Any};
  double speed_min{0.0};               // m/s, closed interval
  double speed_max{kUnboundedSpeed};  // m/s, closed interval
  PerceptionSet required;
  PerceptionSet forbidden;

  bool operator==(const ConditionSet &) const = default;
};

struct Rule
{
  autoir::ParamPath search_index;
  ConditionSet conditions;
  std::optional<double> timer_cap_seconds;
  std::string description;

  bool operator==(const Rule &) const = default;
};

enum class RuleFileErrorCode { ParseError, DuplicatePath, BadCondition };

std::string_view to_string(RuleFileErrorCode code);

using RuleFileError = CodedError<RuleFileErrorCode>;

/// Checks the ConditionSet/Rule invariants; throws BadCondition.
void check_rule(const Rule & rule);

/// Safety rules indexed by a module -> node -> param tree, one rule per path.
/// Immutable after loading; share freely between threads.
class RuleBase
{
public:
  RuleBase() = default;

  /// Whitespace-only documents yield an empty base.
  static RuleBase from_json(std::string_view document);
  static RuleBase load(const std::filesystem::path & file);

  /// Throws DuplicatePath or BadCondition.
  void add(Rule rule);

  /// Exact three-level descent; nullptr when any level misses.
  const Rule * find(std::string_view module, std::string_view node, std::string_view param) const;

  /// Insertion-ordered flat view of the same rules.
  const std::vector<Rule> & rules() const { return rules_; }
  std::size_t size() const { return rules_.size(); }
  bool empty() const { return rules_.empty(); }

  std::string to_json() const;

private:
  using ParamLevel = std::map<std::string, std::size_t, std::less<>>;
  using NodeLevel = std::map<std::string, ParamLevel, std::less<>>;
  std::map<std::string, NodeLevel, std::less<>> tree_;
  std::vector<Rule> rules_;
};

std::string rule_to_json(const Rule & rule, int indent = -1);

/// Locates the rule guarding the program's target parameter.
const Rule * search_rule(const RuleBase & rule_base, const autoir::AutoIRProgram & program);

bool match_conditions(const Rule & rule, const VehicleStatus & status);

}  // namespace flexlane::rules
