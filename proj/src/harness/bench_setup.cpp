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

#include "flexlane/harness/bench_setup.hpp"

#include "flexlane/harness/eval.hpp"

namespace flexlane::harness
{

BenchSetup make_bench_setup(const rules::RuleBase & shipped, std::size_t rule_count)
{
  if (rule_count == 0) {
    throw HarnessError(HarnessErrorCode::BadInput, "need at least one rule");
  }
  BenchSetup setup;
  for (const auto & rule : shipped.rules()) {
    if (setup.rule_base.size() == rule_count) {
      break;
    }
    setup.rule_base.add(rule);
  }
  for (std::size_t i = 0; setup.rule_base.size() < rule_count; ++i) {
    rules::Rule rule;
    rule.search_index = {"bench", "node_" + std::to_string(i / 8), "param_" + std::to_string(i % 8)};
    rule.conditions.motion_state = rules::MotionCondition::Stopped;
    rule.conditions.speed_max = 0.5;
    rule.conditions.required = {rules::Perception::ObstacleDetected};
    rule.description = "synthetic";
    setup.rule_base.add(std::move(rule));
  }
  for (const auto & rule : setup.rule_base.rules()) {
    autoir::AutoIRProgram probe;
    probe.module_select = rule.search_index.module;
    probe.node_select = rule.search_index.node;
    probe.param_select = rule.search_index.param;
    setup.probes.push_back(std::move(probe));
  }
  autoir::AutoIRProgram miss;
  miss.module_select = "planning";
  miss.node_select = "no_such_node";
  miss.param_select = "no_such_param";
  setup.probes.push_back(std::move(miss));
  setup.status.motion_state = rules::MotionState::Stopped;
  setup.status.speed = 0.0;
  setup.status.perceptions = {rules::Perception::TrafficLightDetected, rules::Perception::ObstacleDetected};
  return setup;
}

}  // namespace flexlane::harness
