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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "flexlane/autoir/program.hpp"
#include "flexlane/bus/payloads.hpp"
#include "flexlane/common/error.hpp"
#include "flexlane/rules/vehicle_status.hpp"

namespace flexlane::sim
{

inline constexpr double kDt = 0.1;                 // s per tick
inline constexpr double kSensingRange = 30.0;      // m
inline constexpr double kSpeedCap = 16.7;          // m/s
inline constexpr double kAccelLimit = 3.0;         // m/s^2
inline constexpr double kPlanDecel = 2.5;          // m/s^2, comfort braking profile
inline constexpr double kStoppedSpeed = 0.01;      // m/s
inline constexpr double kStopTolerance = 0.05;     // m, "at the stop target"
inline constexpr double kCreepSpeed = 0.4;         // m/s
inline constexpr double kBypassClearance = 5.0;    // m past the obstacle before returning
inline constexpr std::int64_t kLaneChangeTicks = 20;

enum class SimErrorCode { UnknownScenario, BadScript, UnknownPath, TypeMismatch };

using SimError = CodedError<SimErrorCode>;

struct Lane
{
  std::string id;
  double length{0.0};
  std::optional<std::string> left;
  std::optional<std::string> right;
  std::vector<std::string> successors;
  std::optional<std::string> twin;  // opposite direction, shares offsets
};

struct StopLine
{
  std::string id;
  std::string lane;
  double offset{0.0};
  std::string light;
};

struct Obstacle
{
  std::string id;
  bus::ObjectKind kind{bus::ObjectKind::Cone};
  std::string lane;
  double offset{0.0};

  bool operator==(const Obstacle &) const = default;
};

class LaneMap
{
public:
  LaneMap() = default;
  LaneMap(std::vector<Lane> lanes, std::vector<StopLine> stop_lines);

  const Lane * find(std::string_view id) const;
  const Lane & at(std::string_view id) const;
  const std::vector<Lane> & lanes() const { return lanes_; }
  const std::vector<StopLine> & stop_lines() const { return stop_lines_; }
  const StopLine * find_stop_line(std::string_view id) const;

  /// Follows `left` (or `right`) links to the outermost lane.
  const Lane & outermost(std::string_view from, bool leftward) const;
  /// Neighbor one step from `from` toward `to`, or nullopt when unrelated.
  std::optional<std::string> step_toward(std::string_view from, std::string_view to) const;

private:
  std::vector<Lane> lanes_;
  std::vector<StopLine> stop_lines_;
};

enum class ManeuverKind { None, LaneChange, BypassDepart, BypassPass, BypassReturn };

std::string_view to_string(ManeuverKind kind);

struct Maneuver
{
  ManeuverKind kind{ManeuverKind::None};
  std::string from;
  std::string to;
  std::int64_t elapsed_ticks{0};
  std::optional<std::string> obstacle;
  bool creep{false};

  bool operator==(const Maneuver &) const = default;
};

struct VehicleState
{
  std::string lane;           // reference lane for the longitudinal offset
  std::string occupied_lane;  // lane the body is in
  double offset{0.0};         // m, front bumper along `lane`
  double speed{0.0};          // m/s
  double target_speed{0.0};
  std::string target_lane;    // lane chosen by the lane policy this tick
  Maneuver maneuver;
  std::int64_t hold_ticks{0};

  bool operator==(const VehicleState &) const = default;
};

using ParamMap = std::map<autoir::ParamPath, autoir::ConfigValue>;

struct WorldState
{
  std::int64_t tick{0};
  VehicleState vehicle;
  std::map<std::string, bus::LightColor> lights;
  std::vector<Obstacle> obstacles;
  ParamMap params;
  rules::PerceptionSet perceptions;
  std::vector<bus::DetectedObject> detected;
  std::vector<bus::TrafficLightRoi> rois;
  std::optional<std::string> stop_reason;
  std::size_t events_applied{0};

  double time() const { return static_cast<double>(tick) * kDt; }
  bool operator==(const WorldState &) const = default;
};

nlohmann::json world_to_json(const WorldState & state);
WorldState world_from_json(const nlohmann::json & doc);

/// The five live parameters of the simulated stack with their defaults.
ParamMap default_node_params();

// Shorthands for the simulated stack's parameter paths.
autoir::ParamPath use_flag_path();
autoir::ParamPath lane_prefer_path();
autoir::ParamPath stop_margin_path();
autoir::ParamPath stop_duration_path();
autoir::ParamPath use_opposite_lane_path();

}  // namespace flexlane::sim
