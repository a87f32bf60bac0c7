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

#include "flexlane/sim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace flexlane::sim
{

namespace
{

using nlohmann::json;

[[noreturn]] void bad_script(const std::string & message) { throw SimError(SimErrorCode::BadScript, message); }

std::optional<std::string> opt_string(const json & obj, const char * key)
{
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    return std::nullopt;
  }
  return it->get<std::string>();
}

Obstacle parse_obstacle(const json & j, const LaneMap & map)
{
  Obstacle o;
  o.id = j.at("id").get<std::string>();
  const auto kind = bus::object_kind_from_string(j.at("kind").get<std::string>());
  if (!kind) {
    bad_script("obstacle " + o.id + " has unknown kind");
  }
  o.kind = *kind;
  o.lane = j.at("lane").get<std::string>();
  o.offset = j.at("offset").get<double>();
  const auto * lane = map.find(o.lane);
  if (!lane) {
    bad_script("obstacle " + o.id + " on unknown lane " + o.lane);
  }
  if (o.offset < 0.0 || o.offset > lane->length) {
    bad_script("obstacle " + o.id + " offset outside its lane");
  }
  return o;
}

bus::LightColor parse_color(const json & j)
{
  const auto c = bus::light_color_from_string(j.get<std::string>());
  if (!c) {
    bad_script("unknown light color " + j.dump());
  }
  return *c;
}

Scenario parse(const json & doc)
{
  Scenario s;
  s.source = doc;
  s.id = doc.at("id").get<std::string>();
  s.description = doc.value("description", "");

  const auto & m = doc.at("map");
  std::vector<Lane> lanes;
  for (const auto & l : m.at("lanes")) {
    Lane lane;
    lane.id = l.at("id").get<std::string>();
    lane.length = l.at("length").get<double>();
    lane.left = opt_string(l, "left");
    lane.right = opt_string(l, "right");
    lane.twin = opt_string(l, "twin");
    if (l.contains("successors")) {
      lane.successors = l.at("successors").get<std::vector<std::string>>();
    }
    lanes.push_back(std::move(lane));
  }
  std::vector<StopLine> lines;
  if (m.contains("stop_lines")) {
    for (const auto & l : m.at("stop_lines")) {
      lines.push_back(
        {l.at("id").get<std::string>(), l.at("lane").get<std::string>(), l.at("offset").get<double>(),
         l.at("light").get<std::string>()});
    }
  }
  s.map = LaneMap(std::move(lanes), std::move(lines));

  const auto & init = doc.at("initial");
  auto & v = s.initial.vehicle;
  v.lane = init.at("lane").get<std::string>();
  const auto & lane = s.map.at(v.lane);
  v.occupied_lane = v.lane;
  v.offset = init.at("offset").get<double>();
  v.speed = init.value("speed", 0.0);
  if (v.offset < 0.0 || v.offset > lane.length) {
    bad_script("initial offset outside lane " + v.lane);
  }
  s.cruise_speed = doc.at("cruise_speed").get<double>();
  if (!(s.cruise_speed >= 0.0 && s.cruise_speed <= kSpeedCap) || !(v.speed >= 0.0 && v.speed <= kSpeedCap)) {
    bad_script("speeds must lie in [0, 16.7] m/s");
  }
  v.target_speed = s.cruise_speed;
  s.route_lane = doc.value("route_lane", v.lane);
  s.map.at(s.route_lane);
  v.target_lane = s.route_lane;

  if (init.contains("lights")) {
    for (const auto & [id, color] : init.at("lights").items()) {
      s.initial.lights[id] = parse_color(color);
    }
  }
  for (const auto & line : s.map.stop_lines()) {
    if (!s.initial.lights.count(line.light)) {
      bad_script("stop line " + line.id + " references light " + line.light + " without an initial state");
    }
  }
  if (init.contains("obstacles")) {
    for (const auto & o : init.at("obstacles")) {
      s.initial.obstacles.push_back(parse_obstacle(o, s.map));
    }
  }
  s.initial.params = default_node_params();

  double last = 0.0;
  if (doc.contains("events")) {
    for (const auto & e : doc.at("events")) {
      ScriptEvent ev;
      ev.at = e.at("at").get<double>();
      if (!(ev.at >= last)) {
        bad_script("event times must be non-decreasing");
      }
      last = ev.at;
      const auto type = e.at("type").get<std::string>();
      if (type == "set_light") {
        ev.kind = EventKind::SetLight;
        ev.target = e.at("light").get<std::string>();
        ev.color = parse_color(e.at("color"));
        if (!s.initial.lights.count(ev.target)) {
          bad_script("event references unknown light " + ev.target);
        }
      } else if (type == "spawn_obstacle") {
        ev.kind = EventKind::SpawnObstacle;
        ev.obstacle = parse_obstacle(e.at("obstacle"), s.map);
        ev.target = ev.obstacle->id;
      } else if (type == "remove_obstacle") {
        ev.kind = EventKind::RemoveObstacle;
        ev.target = e.at("id").get<std::string>();
      } else {
        bad_script("unknown event type " + type);
      }
      s.events.push_back(std::move(ev));
    }
  }

  s.horizon = doc.value("horizon", 60.0);
  if (!(s.horizon > 0.0)) {
    bad_script("horizon must be positive");
  }
  if (doc.contains("injection")) {
    const auto & inj = doc.at("injection");
    const auto kind = inj.at("kind").get<std::string>();
    if (kind == "at") {
      s.injection = {Injection::Kind::AtTime, inj.at("time").get<double>()};
    } else if (kind == "after_stop") {
      s.injection = {Injection::Kind::AfterStop, inj.at("delay").get<double>()};
    } else if (kind == "obstacle_within") {
      s.injection = {Injection::Kind::ObstacleWithin, inj.at("distance").get<double>()};
    } else {
      bad_script("unknown injection kind " + kind);
    }
    if (!(s.injection.value >= 0.0)) {
      bad_script("injection value must be non-negative");
    }
  }
  s.default_instruction = doc.value("default_instruction", "");
  if (doc.contains("predicates")) {
    for (const auto & p : doc.at("predicates")) {
      s.predicates.push_back({p.at("id").get<std::string>(), p.at("kind").get<std::string>(), p});
    }
  }
  return s;
}

}  // namespace

std::int64_t Scenario::horizon_ticks() const { return std::llround(horizon / kDt); }

Scenario scenario_from_json(std::string_view document)
{
  try {
    return parse(json::parse(document));
  } catch (const json::exception & e) {
    bad_script(std::string("malformed scenario: ") + e.what());
  }
}

Scenario load_scenario(std::string_view name_or_file, const std::filesystem::path & dir)
{
  std::filesystem::path file(name_or_file);
  if (!std::filesystem::is_regular_file(file)) {
    file = dir / (std::string(name_or_file) + ".json");
    if (!std::filesystem::is_regular_file(file)) {
      throw SimError(SimErrorCode::UnknownScenario, "unknown scenario " + std::string(name_or_file));
    }
  }
  std::ifstream in(file);
  std::ostringstream text;
  text << in.rdbuf();
  return scenario_from_json(text.str());
}

std::vector<std::string> list_scenarios(const std::filesystem::path & dir)
{
  std::vector<std::string> names;
  if (!std::filesystem::is_directory(dir)) {
    return names;
  }
  for (const auto & entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      names.push_back(entry.path().stem().string());
    }
  }
  std::sort(names.begin(), names.end());
  return names;
}

bool InjectionTrigger::observe(const WorldState & state)
{
  if (fired_) {
    return false;
  }
  const bool stopped = state.vehicle.speed < kStoppedSpeed;
  bool due = false;
  switch (injection_.kind) {
    case Injection::Kind::AtTime:
      due = state.tick >= std::llround(injection_.value / kDt);
      break;
    case Injection::Kind::AfterStop:
      if (!stopped) {
        was_moving_ = true;
        stopped_at_.reset();
      } else if (was_moving_ && !stopped_at_) {
        stopped_at_ = state.tick;
      }
      due = stopped_at_ && state.tick - *stopped_at_ >= std::llround(injection_.value / kDt);
      break;
    case Injection::Kind::ObstacleWithin:
      if (!stopped) {
        for (const auto & d : state.detected) {
          if (d.distance <= injection_.value) {
            due = true;
          }
        }
      }
      break;
  }
  fired_ = due;
  return due;
}

}  // namespace flexlane::sim
