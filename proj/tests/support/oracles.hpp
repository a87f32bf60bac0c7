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

#include <cctype>
#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "flexlane/autoir/program.hpp"
#include "flexlane/rules/rule_base.hpp"
#include "flexlane/rules/vehicle_status.hpp"

namespace flexlane::proptest
{

/// Brute-force whitespace split.
inline std::vector<std::string> split_whitespace(std::string_view text)
{
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) {
        out.push_back(cur);
        cur.clear();
      }
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) {
    out.push_back(cur);
  }
  return out;
}

/// Linear scan over the flat rule list.
inline const rules::Rule * linear_search(const rules::RuleBase & base, const autoir::AutoIRProgram & program)
{
  for (const auto & rule : base.rules()) {
    if (rule.search_index == program.path()) {
      return &rule;
    }
  }
  return nullptr;
}

/// Condition matching written straight from the definition, tag by tag.
inline bool match_oracle(const rules::ConditionSet & c, const rules::VehicleStatus & s)
{
  if (c.motion_state == rules::MotionCondition::Driving && s.motion_state != rules::MotionState::Driving) {
    return false;
  }
  if (c.motion_state == rules::MotionCondition::Stopped && s.motion_state != rules::MotionState::Stopped) {
    return false;
  }
  if (s.speed < c.speed_min || s.speed > c.speed_max) {
    return false;
  }
  for (std::size_t i = 0; i < rules::kPerceptionCount; ++i) {
    const auto tag = static_cast<rules::Perception>(i);
    if (c.required.contains(tag) && !s.perceptions.contains(tag)) {
      return false;
    }
    if (c.forbidden.contains(tag) && s.perceptions.contains(tag)) {
      return false;
    }
  }
  return true;
}

/// Bounded drop-oldest queue modelled with a deque.
struct DropOldestOracle
{
  std::size_t capacity;
  std::deque<std::uint64_t> items;
  std::uint64_t dropped{0};

  void push(std::uint64_t v)
  {
    if (items.size() == capacity) {
      items.pop_front();
      ++dropped;
    }
    items.push_back(v);
  }
};

}  // namespace flexlane::proptest
