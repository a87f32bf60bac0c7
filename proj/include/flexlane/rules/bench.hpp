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

#include <cstddef>
#include <span>

#include "flexlane/autoir/program.hpp"
#include "flexlane/rules/rule_base.hpp"
#include "flexlane/rules/vehicle_status.hpp"

namespace flexlane::rules
{

/// Worst-case target for one search + match round, milliseconds.
inline constexpr double kRuleMatchBudgetMs = 0.77;
/// Accepted worst case on hosts slower than a desktop machine.
inline constexpr double kRuleMatchFallbackMs = 1.5;
inline constexpr std::size_t kMinBenchRounds = 1000;

struct LatencyStats
{
  std::size_t rounds{0};
  std::size_t hits{0};  // rounds whose probe found a rule
  double max_ms{0.0};
  double mean_ms{0.0};
  double p99_ms{0.0};
};

/// Times `rounds` iterations of search_rule + match_conditions against a fixed
/// status, cycling through `probes`. Throws std::invalid_argument when
/// rounds < kMinBenchRounds or probes is empty.
LatencyStats bench_rule_matching(
  const RuleBase & rule_base, std::span<const autoir::AutoIRProgram> probes, const VehicleStatus & status,
  std::size_t rounds);

}  // namespace flexlane::rules
