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
#include <vector>

#include "flexlane/autoir/program.hpp"
#include "flexlane/rules/rule_base.hpp"
#include "flexlane/rules/vehicle_status.hpp"

namespace flexlane::harness
{

struct BenchSetup
{
  rules::RuleBase rule_base;
  std::vector<autoir::AutoIRProgram> probes;  // one per rule, then one miss
  rules::VehicleStatus status;
};

/// The first `rule_count` shipped rules, padded with synthetic rules under a
/// `bench` module when the shipped base is smaller. Throws BadInput for 0.
BenchSetup make_bench_setup(const rules::RuleBase & shipped, std::size_t rule_count);

}  // namespace flexlane::harness
