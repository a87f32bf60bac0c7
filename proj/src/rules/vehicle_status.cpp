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

#include "flexlane/rules/vehicle_status.hpp"

#include <array>

namespace flexlane::rules
{

namespace
{
constexpr std::array<std::string_view, kPerceptionCount> kPerceptionNames = {
  "TrafficLightDetected", "ObstacleDetected", "PedestrianDetected"};
}

std::string_view to_string(MotionState state) { return state == MotionState::Driving ? "Driving" : "Stopped"; }

std::optional<MotionState> motion_state_from_string(std::string_view name)
{
  if (name == "Driving") {
    return MotionState::Driving;
  }
  if (name == "Stopped") {
    return MotionState::Stopped;
  }
  return std::nullopt;
}

std::string_view to_string(Perception tag) { return kPerceptionNames[static_cast<std::size_t>(tag)]; }

std::optional<Perception> perception_from_string(std::string_view name)
{
  for (std::size_t i = 0; i < kPerceptionNames.size(); ++i) {
    if (kPerceptionNames[i] == name) {
      return static_cast<Perception>(i);
    }
  }
  return std::nullopt;
}

std::vector<Perception> PerceptionSet::tags() const
{
  std::vector<Perception> out;
  for (std::size_t i = 0; i < kPerceptionCount; ++i) {
    if (bits_.test(i)) {
      out.push_back(static_cast<Perception>(i));
    }
  }
  return out;
}

std::vector<std::string> PerceptionSet::names() const
{
  std::vector<std::string> out;
  for (auto tag : tags()) {
    out.emplace_back(to_string(tag));
  }
  return out;
}

PerceptionSet PerceptionSet::from_raw(std::uint8_t raw)
{
  PerceptionSet s;
  for (std::size_t i = 0; i < kPerceptionCount; ++i) {
    if ((raw >> i) & 1U) {
      s.insert(static_cast<Perception>(i));
    }
  }
  return s;
}

}  // namespace flexlane::rules
