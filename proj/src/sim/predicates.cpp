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

#include "flexlane/sim/predicates.hpp"

#include <cmath>

namespace flexlane::sim
{

namespace
{

using nlohmann::json;

std::optional<Obstacle> find_obstacle(const std::string & id, const std::vector<WorldState> & states)
{
  for (const auto & s : states) {
    for (const auto & o : s.obstacles) {
      if (o.id == id) {
        return o;
      }
    }
  }
  return std::nullopt;
}

std::optional<std::size_t> first_standstill(const std::string & obstacle, const std::vector<WorldState> & states)
{
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto & s = states[i];
    if (s.vehicle.speed >= kStoppedSpeed || !s.stop_reason) {
      continue;
    }
    for (const auto & d : s.detected) {
      if (d.id == obstacle) {
        return i;
      }
    }
  }
  return std::nullopt;
}

/// First contiguous run of states whose parameter equals `value`.
std::optional<std::pair<std::size_t, std::size_t>> param_window(
  const autoir::ParamPath & path, const autoir::ConfigValue & value, const std::vector<WorldState> & states)
{
  std::optional<std::size_t> begin;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto it = states[i].params.find(path);
    const bool on = it != states[i].params.end() && it->second == value;
    if (on && !begin) {
      begin = i;
    } else if (!on && begin) {
      return std::make_pair(*begin, i - 1);
    }
  }
  if (begin) {
    return std::make_pair(*begin, states.size() - 1);
  }
  return std::nullopt;
}

autoir::ParamPath path_arg(const json & args)
{
  return {
    args.at("module").get<std::string>(), args.at("node").get<std::string>(), args.at("param").get<std::string>()};
}

autoir::ConfigValue value_arg(const json & j)
{
  if (j.is_boolean()) {
    return j.get<bool>();
  }
  if (j.is_number()) {
    return j.get<double>();
  }
  return autoir::EnumToken{j.get<std::string>()};
}

}  // namespace

json outcome_to_json(const PredicateOutcome & outcome)
{
  return {
    {"id", outcome.id},
    {"kind", outcome.kind},
    {"passed", outcome.passed},
    {"value", outcome.value ? json(*outcome.value) : json(nullptr)},
    {"detail", outcome.detail},
  };
}

std::optional<std::int64_t> first_crossing_tick(
  const Scenario & scenario, const std::string & stop_line, const std::vector<WorldState> & states)
{
  const auto * line = scenario.map.find_stop_line(stop_line);
  if (!line) {
    return std::nullopt;
  }
  for (const auto & s : states) {
    if (s.vehicle.lane == line->lane && s.vehicle.offset > line->offset) {
      return s.tick;
    }
  }
  return std::nullopt;
}

std::optional<double> first_stop_gap(const std::string & obstacle, const std::vector<WorldState> & states)
{
  const auto i = first_standstill(obstacle, states);
  if (!i) {
    return std::nullopt;
  }
  for (const auto & d : states[*i].detected) {
    if (d.id == obstacle) {
      return d.distance;
    }
  }
  return std::nullopt;
}

std::optional<std::int64_t> first_stop_hold_ticks(const std::string & obstacle, const std::vector<WorldState> & states)
{
  const auto i = first_standstill(obstacle, states);
  if (!i) {
    return std::nullopt;
  }
  std::int64_t ticks = 0;
  for (std::size_t j = *i; j < states.size() && states[j].vehicle.speed < kStoppedSpeed; ++j) {
    ++ticks;
  }
  return ticks;
}

PredicateOutcome evaluate_predicate(
  const PredicateSpec & spec, const Scenario & scenario, const std::vector<WorldState> & states)
{
  PredicateOutcome out{spec.id, spec.kind, false, std::nullopt, ""};
  const auto & a = spec.args;
  try {
    if (spec.kind == "crossed_stop_line") {
      const auto tick = first_crossing_tick(scenario, a.at("stop_line").get<std::string>(), states);
      if (tick) {
        out.value = static_cast<double>(*tick) * kDt;
        out.passed = *tick <= std::llround(a.at("within").get<double>() / kDt);
      }
      out.detail = tick ? "crossed" : "never crossed";
    } else if (spec.kind == "stop_gap") {
      out.value = first_stop_gap(a.at("obstacle").get<std::string>(), states);
      if (out.value) {
        out.passed = *out.value >= a.at("min").get<double>() && *out.value <= a.at("max").get<double>();
      }
      out.detail = out.value ? "gap at first standstill" : "never stopped at the obstacle";
    } else if (spec.kind == "stop_hold") {
      const auto ticks = first_stop_hold_ticks(a.at("obstacle").get<std::string>(), states);
      if (ticks) {
        out.value = static_cast<double>(*ticks) * kDt;
        out.passed = *ticks >= std::llround(a.at("min").get<double>() / kDt);
      }
      out.detail = ticks ? "hold at first standstill" : "never stopped at the obstacle";
    } else if (spec.kind == "passed_via_twin") {
      const auto id = a.at("obstacle").get<std::string>();
      const auto obstacle = find_obstacle(id, states);
      const auto * lane = obstacle ? scenario.map.find(obstacle->lane) : nullptr;
      if (!lane || !lane->twin) {
        out.detail = "obstacle lane has no twin";
      } else {
        std::optional<std::size_t> entered;
        for (std::size_t i = 0; i < states.size(); ++i) {
          const auto & v = states[i].vehicle;
          if (!entered && v.occupied_lane == *lane->twin) {
            entered = i;
          }
          if (entered && v.occupied_lane == lane->id && v.offset > obstacle->offset) {
            out.passed = true;
            out.value = states[i].time();
            break;
          }
        }
        out.detail = out.passed ? "passed and returned" : (entered ? "entered twin, never returned" : "never left lane");
      }
    } else if (spec.kind == "lane_held") {
      const auto path = path_arg(a);
      const auto window = param_window(path, value_arg(a.at("value")), states);
      const auto lane = a.at("lane").get<std::string>();
      if (!window) {
        out.detail = "override never applied";
      } else {
        const auto [begin, end] = *window;
        std::optional<std::size_t> reached;
        for (std::size_t i = begin; i <= end; ++i) {
          const auto & v = states[i].vehicle;
          if (v.occupied_lane == lane && v.maneuver.kind == ManeuverKind::None) {
            reached = i;
            break;
          }
        }
        if (!reached) {
          out.detail = "lane never reached during override";
        } else {
          out.value = static_cast<double>(*reached - begin) * kDt;
          bool held = true;
          for (std::size_t i = *reached; i <= end; ++i) {
            held = held && states[i].vehicle.occupied_lane == lane;
          }
          out.passed = held && static_cast<std::int64_t>(*reached - begin) <= std::llround(a.at("within").get<double>() / kDt);
          out.detail = held ? "reached and held" : "left the lane during override";
        }
      }
    } else if (spec.kind == "lane_reverted") {
      const auto window = param_window(path_arg(a), value_arg(a.at("value")), states);
      if (!window || window->second + 1 >= states.size()) {
        out.detail = "override never expired";
      } else {
        const auto & after = states[window->second + 1];
        out.passed = after.vehicle.target_lane == scenario.route_lane;
        out.value = after.time();
        out.detail = "target lane " + after.vehicle.target_lane + " after expiry";
      }
    } else {
      out.detail = "unknown predicate kind";
    }
  } catch (const json::exception & e) {
    out.passed = false;
    out.detail = std::string("bad predicate arguments: ") + e.what();
  }
  return out;
}

std::vector<PredicateOutcome> evaluate_predicates(const Scenario & scenario, const std::vector<WorldState> & states)
{
  std::vector<PredicateOutcome> out;
  for (const auto & spec : scenario.predicates) {
    out.push_back(evaluate_predicate(spec, scenario, states));
  }
  return out;
}

}  // namespace flexlane::sim
