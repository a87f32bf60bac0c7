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

#include <bitset>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace flexlane::rules
{

enum class MotionState { Driving, Stopped };

std::string_view to_string(MotionState state);
std::optional<MotionState> motion_state_from_string(std::string_view name);

enum class Perception : std::uint8_t { TrafficLightDetected, ObstacleDetected, PedestrianDetected };

inline constexpr std::size_t kPerceptionCount = 3;

std::string_view to_string(Perception tag);
std::optional<Perception> perception_from_string(std::string_view name);

/// Small value set of perception tags.
class PerceptionSet
{
public:
  PerceptionSet() = default;
  PerceptionSet(std::initializer_list<Perception> tags)
  {
    for (auto t : tags) {
      insert(t);
    }
  }

  void insert(Perception tag) { bits_.set(static_cast<std::size_t>(tag)); }
  void erase(Perception tag) { bits_.reset(static_cast<std::size_t>(tag)); }
  bool contains(Perception tag) const { return bits_.test(static_cast<std::size_t>(tag)); }
  bool empty() const { return bits_.none(); }
  std::size_t size() const { return bits_.count(); }

  bool is_subset_of(const PerceptionSet & other) const { return (bits_ & ~other.bits_).none(); }
  bool intersects(const PerceptionSet & other) const { return (bits_ & other.bits_).any(); }

  std::vector<Perception> tags() const;
  std::vector<std::string> names() const;

  std::uint8_t raw() const { return static_cast<std::uint8_t>(bits_.to_ulong()); }
  static PerceptionSet from_raw(std::uint8_t raw);

  bool operator==(const PerceptionSet &) const = default;

private:
  std::bitset<kPerceptionCount> bits_;
};

/// Live snapshot of the key status parameters rules condition on.
struct VehicleStatus
{
  MotionState motion_state{MotionState::Driving};
  std::optional<std::string> stop_reason;
  double speed{0.0};  // m/s, >= 0
  PerceptionSet perceptions;

  bool operator==(const VehicleStatus &) const = default;
};

}  // namespace flexlane::rules
