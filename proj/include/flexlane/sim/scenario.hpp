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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "flexlane/sim/world.hpp"

namespace flexlane::sim
{

inline constexpr const char * kShippedScenarios[] = {
  "malfunctioning_traffic_light", "restricted_lane_cruising", "pedestrian_margin", "cone_opposite_lane",
  "extended_stop"};

enum class EventKind { SetLight, SpawnObstacle, RemoveObstacle };

struct ScriptEvent
{
  double at{0.0};  // s
  EventKind kind{EventKind::SetLight};
  std::string target;  // light id or obstacle id
  bus::LightColor color{bus::LightColor::Red};
  std::optional<Obstacle> obstacle;
};

/// When the harness speaks the scenario's instruction.
struct Injection
{
  enum class Kind { AtTime, AfterStop, ObstacleWithin };

  Kind kind{Kind::AtTime};
  double value{0.0};  // s for AtTime/AfterStop, m for ObstacleWithin
};

struct PredicateSpec
{
  std::string id;
  std::string kind;
  nlohmann::json args;
};

struct Scenario
{
  std::string id;
  std::string description;
  LaneMap map;
  WorldState initial;
  std::vector<ScriptEvent> events;
  double cruise_speed{0.0};
  std::string route_lane;
  double horizon{60.0};  // s
  Injection injection;
  std::string default_instruction;
  std::vector<PredicateSpec> predicates;
  nlohmann::json source;  // document the scenario was read from

  std::int64_t horizon_ticks() const;
};

/// Throws SimError(BadScript) on any schema or reference violation.
Scenario scenario_from_json(std::string_view document);

/// `name_or_file` is a path to a script or the stem of a file in `dir`.
Scenario load_scenario(std::string_view name_or_file, const std::filesystem::path & dir);

/// Stems of the scenario scripts in `dir`, sorted.
std::vector<std::string> list_scenarios(const std::filesystem::path & dir);

/// Stateful trigger for the scenario's injection point.
class InjectionTrigger
{
public:
  explicit InjectionTrigger(Injection injection) : injection_(injection) {}

  /// Feed every post-step state in order. True exactly once, on the due tick.
  bool observe(const WorldState & state);
  bool fired() const { return fired_; }

private:
  Injection injection_;
  bool fired_{false};
  bool was_moving_{false};
  std::optional<std::int64_t> stopped_at_;
};

}  // namespace flexlane::sim
