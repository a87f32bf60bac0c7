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

#include "flexlane/sim/simulator.hpp"

#include <algorithm>
#include <cmath>

namespace flexlane::sim
{

namespace
{

struct StopCandidate
{
  double at;
  std::string reason;
  std::optional<std::string> obstacle;
};

bool param_bool(const ParamMap & params, const autoir::ParamPath & path) { return std::get<bool>(params.at(path)); }

double param_number(const ParamMap & params, const autoir::ParamPath & path)
{
  return std::get<double>(params.at(path));
}

const std::string & param_token(const ParamMap & params, const autoir::ParamPath & path)
{
  return std::get<autoir::EnumToken>(params.at(path)).name;
}

std::int64_t seconds_to_ticks(double seconds) { return std::llround(seconds / kDt); }

bool value_in_domain(const autoir::ParamPath & path, const autoir::ConfigValue & value)
{
  if (path == lane_prefer_path()) {
    const auto & t = std::get<autoir::EnumToken>(value).name;
    return t == "LEFT" || t == "RIGHT" || t == "NONE";
  }
  if (path == stop_margin_path()) {
    const double d = std::get<double>(value);
    return d >= 0.0 && d <= 10.0;
  }
  if (path == stop_duration_path()) {
    const double d = std::get<double>(value);
    return d >= 0.0 && d <= 60.0;
  }
  return true;
}

}  // namespace

double braking_profile_speed(double gap)
{
  if (!(gap > 0.0)) {
    return 0.0;
  }
  // Speeds v, v-d, v-2d, ..., r with r in (0, d], one per tick.
  const double d = kPlanDecel * kDt;
  const double reach = gap / kDt;
  auto triangle = [d](double n) { return d * n * (n + 1.0) / 2.0; };
  double n = std::floor((std::sqrt(1.0 + 8.0 * reach / d) - 1.0) / 2.0);
  while (n > 0.0 && triangle(n) >= reach) {
    n -= 1.0;
  }
  while (triangle(n + 1.0) < reach) {
    n += 1.0;
  }
  const double r = std::min(d, (reach - triangle(n)) / (n + 1.0));
  return r + n * d;
}

Simulator::Simulator(Scenario scenario) : scenario_(std::move(scenario)), state_(scenario_.initial)
{
  perceive();
}

const WorldState & Simulator::step()
{
  apply_events();
  perceive();
  plan();
  control();
  ++state_.tick;
  perceive();
  return state_;
}

void Simulator::apply_events()
{
  auto & s = state_;
  while (s.events_applied < scenario_.events.size()) {
    const auto & ev = scenario_.events[s.events_applied];
    if (seconds_to_ticks(ev.at) > s.tick) {
      break;
    }
    switch (ev.kind) {
      case EventKind::SetLight:
        s.lights[ev.target] = ev.color;
        break;
      case EventKind::SpawnObstacle:
        std::erase_if(s.obstacles, [&](const Obstacle & o) { return o.id == ev.target; });
        s.obstacles.push_back(*ev.obstacle);
        break;
      case EventKind::RemoveObstacle:
        std::erase_if(s.obstacles, [&](const Obstacle & o) { return o.id == ev.target; });
        break;
    }
    ++s.events_applied;
  }
}

void Simulator::perceive()
{
  auto & s = state_;
  const auto & v = s.vehicle;
  s.detected.clear();
  s.rois.clear();
  s.perceptions = {};
  for (const auto & o : s.obstacles) {
    if (o.lane != v.lane && o.lane != v.occupied_lane) {
      continue;
    }
    const double d = o.offset - v.offset;
    if (d < 0.0 || d > kSensingRange) {
      continue;
    }
    s.detected.push_back({o.id, o.kind, d});
    s.perceptions.insert(rules::Perception::ObstacleDetected);
    if (o.kind == bus::ObjectKind::Pedestrian) {
      s.perceptions.insert(rules::Perception::PedestrianDetected);
    }
  }
  if (param_bool(s.params, use_flag_path())) {
    for (const auto & line : scenario_.map.stop_lines()) {
      if (line.lane != v.lane) {
        continue;
      }
      const double d = line.offset - v.offset;
      if (d < 0.0 || d > kSensingRange) {
        continue;
      }
      s.rois.push_back({line.light, s.lights.at(line.light), d});
      s.perceptions.insert(rules::Perception::TrafficLightDetected);
    }
  }
}

bool Simulator::lane_free(const std::string & lane, double from, double to) const
{
  return std::none_of(state_.obstacles.begin(), state_.obstacles.end(), [&](const Obstacle & o) {
    return o.lane == lane && o.offset >= from && o.offset <= to;
  });
}

std::string Simulator::policy_lane() const
{
  const auto & pref = param_token(state_.params, lane_prefer_path());
  if (pref == "LEFT") {
    return scenario_.map.outermost(state_.vehicle.lane, true).id;
  }
  if (pref == "RIGHT") {
    return scenario_.map.outermost(state_.vehicle.lane, false).id;
  }
  return scenario_.route_lane;
}

void Simulator::plan()
{
  auto & s = state_;
  auto & v = s.vehicle;
  const auto & map = scenario_.map;
  const double margin = param_number(s.params, stop_margin_path());
  const bool in_maneuver = v.maneuver.kind != ManeuverKind::None;

  v.target_lane = policy_lane();

  std::vector<std::string> planning_lanes{in_maneuver ? v.maneuver.to : v.lane};
  std::optional<StopCandidate> best;
  auto consider = [&best](StopCandidate c) {
    if (!best || c.at < best->at) {
      best = std::move(c);
    }
  };

  if (param_bool(s.params, use_flag_path())) {
    for (const auto & line : map.stop_lines()) {
      const bool relevant = line.lane == v.lane || (v.maneuver.kind == ManeuverKind::LaneChange && line.lane == v.maneuver.to);
      const double d = line.offset - v.offset;
      if (relevant && s.lights.at(line.light) == bus::LightColor::Red && d >= 0.0 && d <= kSensingRange) {
        consider({line.offset - margin, "RedLight", std::nullopt});
      }
    }
  }
  for (const auto & o : s.obstacles) {
    if (std::find(planning_lanes.begin(), planning_lanes.end(), o.lane) == planning_lanes.end()) {
      continue;
    }
    const double d = o.offset - v.offset;
    if (d >= 0.0 && d <= kSensingRange) {
      consider({o.offset - margin, o.kind == bus::ObjectKind::Pedestrian ? "Pedestrian" : "Obstacle", o.id});
    }
  }
  const auto & lane = map.at(v.lane);
  if (lane.successors.empty()) {
    consider({lane.length, "EndOfLane", std::nullopt});
  }

  const bool at_obstacle = !in_maneuver && best && best->obstacle && v.speed < kStoppedSpeed &&
                           best->at - v.offset <= kStopTolerance;
  if (at_obstacle) {
    ++v.hold_ticks;
    if (v.hold_ticks >= seconds_to_ticks(param_number(s.params, stop_duration_path()))) {
      const auto & obstacle = *best->obstacle;
      double obstacle_offset = v.offset;
      for (const auto & o : s.obstacles) {
        if (o.id == obstacle) {
          obstacle_offset = o.offset;
        }
      }
      for (const auto & neighbor : {lane.left, lane.right}) {
        if (neighbor && lane_free(*neighbor, v.offset - kBypassClearance, v.offset + kSensingRange)) {
          v.maneuver = {ManeuverKind::LaneChange, v.lane, *neighbor, 0, obstacle, true};
          break;
        }
      }
      if (
        v.maneuver.kind == ManeuverKind::None && lane.twin && param_bool(s.params, use_opposite_lane_path()) &&
        lane_free(*lane.twin, v.offset - kBypassClearance, obstacle_offset + kBypassClearance + kSensingRange)) {
        v.maneuver = {ManeuverKind::BypassDepart, v.lane, *lane.twin, 0, obstacle, true};
      }
      if (v.maneuver.kind != ManeuverKind::None) {
        v.hold_ticks = 0;
        best.reset();
      }
    }
  } else {
    v.hold_ticks = 0;
    if (!in_maneuver && v.target_lane != v.lane) {
      const auto next = map.step_toward(v.lane, v.target_lane);
      if (next && lane_free(*next, v.offset - kBypassClearance, v.offset + kSensingRange)) {
        v.maneuver = {ManeuverKind::LaneChange, v.lane, *next, 0, std::nullopt, v.speed < kStoppedSpeed};
      }
    }
  }

  // A maneuver started this tick ignores the source lane from now on.
  if (v.maneuver.kind != ManeuverKind::None && best && best->obstacle) {
    for (const auto & o : s.obstacles) {
      if (o.id == *best->obstacle && o.lane != v.maneuver.to) {
        best.reset();
        break;
      }
    }
  }

  double speed = std::min(scenario_.cruise_speed, kSpeedCap);
  const auto kind = v.maneuver.kind;
  if (v.maneuver.creep && (kind == ManeuverKind::LaneChange || kind == ManeuverKind::BypassDepart)) {
    speed = std::min(speed, kCreepSpeed);
  }
  stop_target_.reset();
  stop_reason_.reset();
  if (best) {
    speed = std::min(speed, braking_profile_speed(best->at - v.offset));
    stop_target_ = best->at;
    stop_reason_ = best->reason;
  }
  desired_speed_ = speed;
  v.target_speed = speed;
}

void Simulator::control()
{
  auto & s = state_;
  auto & v = s.vehicle;
  const double step = kAccelLimit * kDt;
  double speed = std::clamp(desired_speed_, v.speed - step, v.speed + step);
  speed = std::clamp(speed, 0.0, kSpeedCap);
  if (speed < kStoppedSpeed) {
    speed = 0.0;
  }
  double offset = v.offset + speed * kDt;
  if (stop_target_ && v.offset <= *stop_target_ && offset > *stop_target_) {
    offset = *stop_target_;
  }
  v.speed = speed;
  v.offset = offset;

  auto & m = v.maneuver;
  switch (m.kind) {
    case ManeuverKind::None:
      break;
    case ManeuverKind::LaneChange:
      if (++m.elapsed_ticks >= kLaneChangeTicks) {
        v.lane = m.to;
        v.occupied_lane = m.to;
        m = {};
      }
      break;
    case ManeuverKind::BypassDepart:
      if (++m.elapsed_ticks >= kLaneChangeTicks) {
        v.occupied_lane = m.to;
        m.kind = ManeuverKind::BypassPass;
        m.elapsed_ticks = 0;
        m.creep = false;
      }
      break;
    case ManeuverKind::BypassPass: {
      ++m.elapsed_ticks;
      std::optional<double> obstacle_offset;
      for (const auto & o : s.obstacles) {
        if (m.obstacle && o.id == *m.obstacle) {
          obstacle_offset = o.offset;
        }
      }
      if (!obstacle_offset || v.offset >= *obstacle_offset + kBypassClearance) {
        m.kind = ManeuverKind::BypassReturn;
        m.elapsed_ticks = 0;
      }
      break;
    }
    case ManeuverKind::BypassReturn:
      if (++m.elapsed_ticks >= kLaneChangeTicks) {
        v.occupied_lane = m.from;
        m = {};
      }
      break;
  }

  if (m.kind == ManeuverKind::None) {
    const auto & lane = scenario_.map.at(v.lane);
    if (v.offset > lane.length && !lane.successors.empty()) {
      v.offset -= lane.length;
      v.lane = lane.successors.front();
      v.occupied_lane = v.lane;
    }
  }

  s.stop_reason = speed < kStoppedSpeed ? stop_reason_ : std::nullopt;
}

rules::VehicleStatus Simulator::vehicle_status() const
{
  rules::VehicleStatus status;
  status.speed = state_.vehicle.speed;
  status.motion_state = status.speed < kStoppedSpeed ? rules::MotionState::Stopped : rules::MotionState::Driving;
  status.stop_reason = state_.stop_reason;
  status.perceptions = state_.perceptions;
  return status;
}

void Simulator::publish_status(bus::MessageBus & bus) const
{
  const auto status = vehicle_status();
  const TimePoint stamp = std::chrono::milliseconds(100) * state_.tick;
  bus.publish(bus::kMotionStateTopic, bus::MotionStateMsg{status.motion_state, status.stop_reason}, stamp);
  bus.publish(bus::kVelocityStatusTopic, bus::VelocityStatusMsg{status.speed}, stamp);
  bus.publish(bus::kObjectsTopic, bus::DetectedObjectsMsg{state_.detected}, stamp);
  bus.publish(bus::kTrafficLightTopic, bus::TrafficLightRoisMsg{state_.rois}, stamp);
}

void Simulator::set_node_param(const autoir::ParamPath & path, const autoir::ConfigValue & value)
{
  const auto it = state_.params.find(path);
  if (it == state_.params.end()) {
    throw SimError(SimErrorCode::UnknownPath, "no live parameter " + path.str());
  }
  if (autoir::type_of(it->second) != autoir::type_of(value) || !value_in_domain(path, value)) {
    throw SimError(
      SimErrorCode::TypeMismatch, "value " + autoir::format_value(value) + " not accepted by " + path.str());
  }
  it->second = value;
}

autoir::ConfigValue Simulator::get_node_param(const autoir::ParamPath & path) const
{
  const auto it = state_.params.find(path);
  if (it == state_.params.end()) {
    throw SimError(SimErrorCode::UnknownPath, "no live parameter " + path.str());
  }
  return it->second;
}

void write_trajectory(std::ostream & out, const std::vector<WorldState> & states)
{
  for (const auto & s : states) {
    out << world_to_json(s).dump() << '\n';
  }
}

}  // namespace flexlane::sim
