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

#include "flexlane/sim/world.hpp"

#include <set>

namespace flexlane::sim
{

namespace
{

using nlohmann::json;

[[noreturn]] void bad_script(const std::string & message) { throw SimError(SimErrorCode::BadScript, message); }

json value_to_json(const autoir::ConfigValue & value)
{
  if (const auto * b = std::get_if<bool>(&value)) {
    return *b;
  }
  if (const auto * d = std::get_if<double>(&value)) {
    return *d;
  }
  return std::get<autoir::EnumToken>(value).name;
}

autoir::ConfigValue value_from_json(const json & j)
{
  if (j.is_boolean()) {
    return j.get<bool>();
  }
  if (j.is_number()) {
    return j.get<double>();
  }
  if (j.is_string()) {
    return autoir::EnumToken{j.get<std::string>()};
  }
  bad_script("unsupported parameter value " + j.dump());
}

json optional_string(const std::optional<std::string> & s) { return s ? json(*s) : json(nullptr); }

std::optional<std::string> optional_string(const json & j)
{
  if (j.is_null()) {
    return std::nullopt;
  }
  return j.get<std::string>();
}

autoir::ParamPath split_path(const std::string & text)
{
  const auto a = text.find('/');
  const auto b = a == std::string::npos ? std::string::npos : text.find('/', a + 1);
  if (b == std::string::npos) {
    bad_script("bad parameter path " + text);
  }
  return {text.substr(0, a), text.substr(a + 1, b - a - 1), text.substr(b + 1)};
}

const std::vector<std::pair<std::string_view, ManeuverKind>> kManeuverNames = {
  {"None", ManeuverKind::None},
  {"LaneChange", ManeuverKind::LaneChange},
  {"BypassDepart", ManeuverKind::BypassDepart},
  {"BypassPass", ManeuverKind::BypassPass},
  {"BypassReturn", ManeuverKind::BypassReturn},
};

}  // namespace

LaneMap::LaneMap(std::vector<Lane> lanes, std::vector<StopLine> stop_lines)
: lanes_(std::move(lanes)), stop_lines_(std::move(stop_lines))
{
  std::set<std::string> ids;
  for (const auto & lane : lanes_) {
    if (lane.id.empty() || !ids.insert(lane.id).second) {
      bad_script("duplicate or empty lane id '" + lane.id + "'");
    }
    if (!(lane.length > 0.0)) {
      bad_script("lane " + lane.id + " has non-positive length");
    }
  }
  auto resolve = [&](const std::optional<std::string> & ref, const std::string & owner) {
    if (ref && !ids.count(*ref)) {
      bad_script("lane " + owner + " references unknown lane " + *ref);
    }
  };
  for (const auto & lane : lanes_) {
    resolve(lane.left, lane.id);
    resolve(lane.right, lane.id);
    resolve(lane.twin, lane.id);
    for (const auto & s : lane.successors) {
      resolve(s, lane.id);
    }
  }
  std::set<std::string> line_ids;
  for (const auto & line : stop_lines_) {
    if (!line_ids.insert(line.id).second) {
      bad_script("duplicate stop line " + line.id);
    }
    const auto * lane = find(line.lane);
    if (!lane) {
      bad_script("stop line " + line.id + " on unknown lane " + line.lane);
    }
    if (line.offset < 0.0 || line.offset > lane->length) {
      bad_script("stop line " + line.id + " offset outside its lane");
    }
  }
}

const Lane * LaneMap::find(std::string_view id) const
{
  for (const auto & lane : lanes_) {
    if (lane.id == id) {
      return &lane;
    }
  }
  return nullptr;
}

const Lane & LaneMap::at(std::string_view id) const
{
  const auto * lane = find(id);
  if (!lane) {
    bad_script("unknown lane " + std::string(id));
  }
  return *lane;
}

const StopLine * LaneMap::find_stop_line(std::string_view id) const
{
  for (const auto & line : stop_lines_) {
    if (line.id == id) {
      return &line;
    }
  }
  return nullptr;
}

const Lane & LaneMap::outermost(std::string_view from, bool leftward) const
{
  const Lane * lane = &at(from);
  for (std::size_t guard = 0; guard < lanes_.size(); ++guard) {
    const auto & next = leftward ? lane->left : lane->right;
    if (!next) {
      break;
    }
    lane = &at(*next);
  }
  return *lane;
}

std::optional<std::string> LaneMap::step_toward(std::string_view from, std::string_view to) const
{
  for (const bool leftward : {true, false}) {
    const Lane * lane = &at(from);
    for (std::size_t guard = 0; guard < lanes_.size(); ++guard) {
      const auto & next = leftward ? lane->left : lane->right;
      if (!next) {
        break;
      }
      lane = &at(*next);
      if (lane->id == to) {
        return leftward ? at(from).left : at(from).right;
      }
    }
  }
  return std::nullopt;
}

std::string_view to_string(ManeuverKind kind)
{
  for (const auto & [name, k] : kManeuverNames) {
    if (k == kind) {
      return name;
    }
  }
  return "None";
}

autoir::ParamPath use_flag_path() { return {"perception", "traffic_light_classifier_node", "use_flag"}; }
autoir::ParamPath lane_prefer_path() { return {"planning", "mission_planner", "lane_prefer"}; }
autoir::ParamPath stop_margin_path() { return {"planning", "behavior_velocity_planner_node", "stop_margin"}; }
autoir::ParamPath stop_duration_path() { return {"planning", "behavior_velocity_planner_node", "stop_duration"}; }
autoir::ParamPath use_opposite_lane_path() { return {"planning", "behavior_path_planner", "use_opposite_lane"}; }

ParamMap default_node_params()
{
  return {
    {use_flag_path(), true},
    {lane_prefer_path(), autoir::EnumToken{"NONE"}},
    {stop_margin_path(), 1.0},
    {stop_duration_path(), 2.0},
    {use_opposite_lane_path(), false},
  };
}

json world_to_json(const WorldState & state)
{
  const auto & v = state.vehicle;
  json maneuver = {
    {"kind", std::string(to_string(v.maneuver.kind))},
    {"from", v.maneuver.from},
    {"to", v.maneuver.to},
    {"elapsed_ticks", v.maneuver.elapsed_ticks},
    {"obstacle", optional_string(v.maneuver.obstacle)},
    {"creep", v.maneuver.creep},
  };
  json vehicle = {
    {"lane", v.lane},
    {"occupied_lane", v.occupied_lane},
    {"offset", v.offset},
    {"speed", v.speed},
    {"target_speed", v.target_speed},
    {"target_lane", v.target_lane},
    {"maneuver", std::move(maneuver)},
    {"hold_ticks", v.hold_ticks},
  };
  json lights = json::object();
  for (const auto & [id, color] : state.lights) {
    lights[id] = std::string(bus::to_string(color));
  }
  json obstacles = json::array();
  for (const auto & o : state.obstacles) {
    obstacles.push_back(
      {{"id", o.id}, {"kind", std::string(bus::to_string(o.kind))}, {"lane", o.lane}, {"offset", o.offset}});
  }
  json params = json::object();
  for (const auto & [path, value] : state.params) {
    params[path.str()] = value_to_json(value);
  }
  json detected = json::array();
  for (const auto & d : state.detected) {
    detected.push_back({{"id", d.id}, {"kind", std::string(bus::to_string(d.kind))}, {"distance", d.distance}});
  }
  json rois = json::array();
  for (const auto & r : state.rois) {
    rois.push_back(
      {{"light_id", r.light_id}, {"color", std::string(bus::to_string(r.color))}, {"distance", r.distance}});
  }
  return {
    {"tick", state.tick},
    {"t", state.time()},
    {"vehicle", std::move(vehicle)},
    {"lights", std::move(lights)},
    {"obstacles", std::move(obstacles)},
    {"params", std::move(params)},
    {"perceptions", state.perceptions.names()},
    {"detected", std::move(detected)},
    {"rois", std::move(rois)},
    {"stop_reason", optional_string(state.stop_reason)},
    {"events_applied", state.events_applied},
  };
}

WorldState world_from_json(const json & doc)
{
  try {
    WorldState s;
    s.tick = doc.at("tick").get<std::int64_t>();
    const auto & v = doc.at("vehicle");
    s.vehicle.lane = v.at("lane").get<std::string>();
    s.vehicle.occupied_lane = v.at("occupied_lane").get<std::string>();
    s.vehicle.offset = v.at("offset").get<double>();
    s.vehicle.speed = v.at("speed").get<double>();
    s.vehicle.target_speed = v.at("target_speed").get<double>();
    s.vehicle.target_lane = v.at("target_lane").get<std::string>();
    s.vehicle.hold_ticks = v.at("hold_ticks").get<std::int64_t>();
    const auto & m = v.at("maneuver");
    const auto kind = m.at("kind").get<std::string>();
    bool known = false;
    for (const auto & [name, k] : kManeuverNames) {
      if (name == kind) {
        s.vehicle.maneuver.kind = k;
        known = true;
      }
    }
    if (!known) {
      bad_script("unknown maneuver " + kind);
    }
    s.vehicle.maneuver.from = m.at("from").get<std::string>();
    s.vehicle.maneuver.to = m.at("to").get<std::string>();
    s.vehicle.maneuver.elapsed_ticks = m.at("elapsed_ticks").get<std::int64_t>();
    s.vehicle.maneuver.obstacle = optional_string(m.at("obstacle"));
    s.vehicle.maneuver.creep = m.at("creep").get<bool>();
    for (const auto & [id, color] : doc.at("lights").items()) {
      const auto c = bus::light_color_from_string(color.get<std::string>());
      if (!c) {
        bad_script("bad light color for " + id);
      }
      s.lights[id] = *c;
    }
    for (const auto & o : doc.at("obstacles")) {
      const auto kind = bus::object_kind_from_string(o.at("kind").get<std::string>());
      if (!kind) {
        bad_script("bad obstacle kind");
      }
      s.obstacles.push_back(
        {o.at("id").get<std::string>(), *kind, o.at("lane").get<std::string>(), o.at("offset").get<double>()});
    }
    for (const auto & [path, value] : doc.at("params").items()) {
      s.params[split_path(path)] = value_from_json(value);
    }
    for (const auto & name : doc.at("perceptions")) {
      const auto tag = rules::perception_from_string(name.get<std::string>());
      if (!tag) {
        bad_script("bad perception tag");
      }
      s.perceptions.insert(*tag);
    }
    for (const auto & d : doc.at("detected")) {
      const auto kind = bus::object_kind_from_string(d.at("kind").get<std::string>());
      if (!kind) {
        bad_script("bad detected kind");
      }
      s.detected.push_back({d.at("id").get<std::string>(), *kind, d.at("distance").get<double>()});
    }
    for (const auto & r : doc.at("rois")) {
      const auto color = bus::light_color_from_string(r.at("color").get<std::string>());
      if (!color) {
        bad_script("bad roi color");
      }
      s.rois.push_back({r.at("light_id").get<std::string>(), *color, r.at("distance").get<double>()});
    }
    s.stop_reason = optional_string(doc.at("stop_reason"));
    s.events_applied = doc.at("events_applied").get<std::size_t>();
    return s;
  } catch (const json::exception & e) {
    bad_script(std::string("bad world state: ") + e.what());
  }
}

}  // namespace flexlane::sim
