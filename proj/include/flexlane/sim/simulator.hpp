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
#include <ostream>
#include <string>
#include <vector>

#include "flexlane/bus/message_bus.hpp"
#include "flexlane/rules/vehicle_status.hpp"
#include "flexlane/sim/scenario.hpp"

namespace flexlane::sim
{

/// Deterministic tick simulator: perception, planning and control passes
/// over a lane graph. Single driver; not internally synchronized.
class Simulator
{
public:
  explicit Simulator(Scenario scenario);

  /// Advances one fixed tick of kDt.
  const WorldState & step();

  const WorldState & state() const { return state_; }
  const Scenario & scenario() const { return scenario_; }
  const LaneMap & map() const { return scenario_.map; }
  double time() const { return state_.time(); }

  rules::VehicleStatus vehicle_status() const;

  /// Four envelopes, one per status topic, stamped with the sim time.
  void publish_status(bus::MessageBus & bus) const;

  /// Takes effect at the next planning pass.
  void set_node_param(const autoir::ParamPath & path, const autoir::ConfigValue & value);
  autoir::ConfigValue get_node_param(const autoir::ParamPath & path) const;

private:
  void apply_events();
  void perceive();
  void plan();
  void control();

  bool lane_free(const std::string & lane, double from, double to) const;
  std::string policy_lane() const;

  Scenario scenario_;
  WorldState state_;

  // Plan outputs consumed by control.
  std::optional<double> stop_target_;
  std::optional<std::string> stop_reason_;
  double desired_speed_{0.0};
};

/// Largest speed from which braking at kPlanDecel in whole ticks covers at
/// most `gap` metres and ends at rest.
double braking_profile_speed(double gap);

/// Writes one JSON object per state.
void write_trajectory(std::ostream & out, const std::vector<WorldState> & states);

}  // namespace flexlane::sim
