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

#include "flexlane/rules/rule_base.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace flexlane::rules
{

namespace
{

using nlohmann::json;

PerceptionSet tags_from_json(const json & j, const std::string & where)
{
  PerceptionSet set;
  if (!j.is_array()) {
    throw RuleFileError(RuleFileErrorCode::ParseError, where + ": perception list must be an array");
  }
  for (const auto & item : j) {
    const auto name = item.get<std::string>();
    const auto tag = perception_from_string(name);
    if (!tag) {
      throw RuleFileError(RuleFileErrorCode::ParseError, where + ": unknown perception tag '" + name + "'");
    }
    set.insert(*tag);
  }
  return set;
}

Rule rule_from_json(const json & j, std::size_t ordinal)
{
  const std::string where = "rule #" + std::to_string(ordinal);
  if (!j.is_object()) {
    throw RuleFileError(RuleFileErrorCode::ParseError, where + ": must be an object");
  }
  Rule rule;
  rule.search_index = {
    j.at("module").get<std::string>(), j.at("node").get<std::string>(), j.at("param").get<std::string>()};
  rule.description = j.value("description", "");
  const auto & c = j.at("conditions");
  const auto motion = c.value("motion_state", "Any");
  if (motion == "Driving") {
    rule.conditions.motion_state = MotionCondition::Driving;
  } else if (motion == "Stopped") {
    rule.conditions.motion_state = MotionCondition::Stopped;
  } else if (motion == "Any") {
    rule.conditions.motion_state = MotionCondition::Any;
  } else {
    throw RuleFileError(RuleFileErrorCode::ParseError, where + ": unknown motion_state '" + motion + "'");
  }
  rule.conditions.speed_min = c.value("speed_min", 0.0);
  if (c.contains("speed_max") && !c.at("speed_max").is_null()) {
    rule.conditions.speed_max = c.at("speed_max").get<double>();
  }
  if (c.contains("required")) {
    rule.conditions.required = tags_from_json(c.at("required"), where);
  }
  if (c.contains("forbidden")) {
    rule.conditions.forbidden = tags_from_json(c.at("forbidden"), where);
  }
  if (j.contains("timer_cap") && !j.at("timer_cap").is_null()) {
    rule.timer_cap_seconds = j.at("timer_cap").get<double>();
  }
  return rule;
}

json rule_json(const Rule & rule)
{
  json conditions;
  conditions["motion_state"] = std::string(to_string(rule.conditions.motion_state));
  conditions["speed_min"] = rule.conditions.speed_min;
  conditions["speed_max"] =
    std::isinf(rule.conditions.speed_max) ? json(nullptr) : json(rule.conditions.speed_max);
  conditions["required"] = rule.conditions.required.names();
  conditions["forbidden"] = rule.conditions.forbidden.names();
  json j;
  j["module"] = rule.search_index.module;
  j["node"] = rule.search_index.node;
  j["param"] = rule.search_index.param;
  j["conditions"] = std::move(conditions);
  if (rule.timer_cap_seconds) {
    j["timer_cap"] = *rule.timer_cap_seconds;
  }
  if (!rule.description.empty()) {
    j["description"] = rule.description;
  }
  return j;
}

bool blank(std::string_view s)
{
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::string_view to_string(MotionCondition condition)
{
  switch (condition) {
    case MotionCondition::Driving:
      return "Driving";
    case MotionCondition::Stopped:
      return "Stopped";
    case MotionCondition::Any:
      return "Any";
  }
  return "Any";
}

std::string_view to_string(RuleFileErrorCode code)
{
  switch (code) {
    case RuleFileErrorCode::ParseError:
      return "ParseError";
    case RuleFileErrorCode::DuplicatePath:
      return "DuplicatePath";
    case RuleFileErrorCode::BadCondition:
      return "BadCondition";
  }
  return "Unknown";
}

void check_rule(const Rule & rule)
{
  const auto & path = rule.search_index;
  if (path.module.empty() || path.node.empty() || path.param.empty()) {
    throw RuleFileError(RuleFileErrorCode::BadCondition, "search index components must be non-empty");
  }
  const auto & c = rule.conditions;
  if (std::isnan(c.speed_min) || std::isnan(c.speed_max) || c.speed_min < 0.0 || c.speed_min > c.speed_max) {
    throw RuleFileError(RuleFileErrorCode::BadCondition, path.str() + ": need 0 <= speed_min <= speed_max");
  }
  if (c.required.intersects(c.forbidden)) {
    throw RuleFileError(RuleFileErrorCode::BadCondition, path.str() + ": a tag is both required and forbidden");
  }
  if (rule.timer_cap_seconds && !(*rule.timer_cap_seconds > 0.0 && std::isfinite(*rule.timer_cap_seconds))) {
    throw RuleFileError(RuleFileErrorCode::BadCondition, path.str() + ": timer_cap must be positive");
  }
}

RuleBase RuleBase::from_json(std::string_view document)
{
  RuleBase base;
  if (blank(document)) {
    return base;
  }
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error & e) {
    throw RuleFileError(RuleFileErrorCode::ParseError, std::string("rule file: ") + e.what());
  }
  const json * list = &doc;
  if (doc.is_object()) {
    if (!doc.contains("rules")) {
      throw RuleFileError(RuleFileErrorCode::ParseError, "rule file: missing 'rules' array");
    }
    list = &doc.at("rules");
  }
  if (!list->is_array()) {
    throw RuleFileError(RuleFileErrorCode::ParseError, "rule file: 'rules' must be an array");
  }
  std::size_t ordinal = 0;
  for (const auto & item : *list) {
    Rule rule;
    try {
      rule = rule_from_json(item, ordinal++);
    } catch (const json::exception & e) {
      throw RuleFileError(
        RuleFileErrorCode::ParseError, "rule #" + std::to_string(ordinal - 1) + ": " + e.what());
    }
    base.add(std::move(rule));
  }
  return base;
}

RuleBase RuleBase::load(const std::filesystem::path & file)
{
  std::ifstream in(file);
  if (!in) {
    throw RuleFileError(RuleFileErrorCode::ParseError, "cannot open rule file " + file.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

void RuleBase::add(Rule rule)
{
  check_rule(rule);
  const auto & path = rule.search_index;
  auto & params = tree_[path.module][path.node];
  if (params.find(path.param) != params.end()) {
    throw RuleFileError(RuleFileErrorCode::DuplicatePath, path.str() + ": more than one rule for this path");
  }
  params.emplace(path.param, rules_.size());
  rules_.push_back(std::move(rule));
}

const Rule * RuleBase::find(std::string_view module, std::string_view node, std::string_view param) const
{
  const auto m = tree_.find(module);
  if (m == tree_.end()) {
    return nullptr;
  }
  const auto n = m->second.find(node);
  if (n == m->second.end()) {
    return nullptr;
  }
  const auto p = n->second.find(param);
  return p == n->second.end() ? nullptr : &rules_[p->second];
}

std::string RuleBase::to_json() const
{
  json list = json::array();
  for (const auto & rule : rules_) {
    list.push_back(rule_json(rule));
  }
  json doc;
  doc["version"] = 1;
  doc["rules"] = std::move(list);
  return doc.dump(2);
}

std::string rule_to_json(const Rule & rule, int indent) { return rule_json(rule).dump(indent); }

const Rule * search_rule(const RuleBase & rule_base, const autoir::AutoIRProgram & program)
{
  return rule_base.find(program.module_select, program.node_select, program.param_select);
}

bool match_conditions(const Rule & rule, const VehicleStatus & status)
{
  const auto & c = rule.conditions;
  switch (c.motion_state) {
    case MotionCondition::Driving:
      if (status.motion_state != MotionState::Driving) {
        return false;
      }
      break;
    case MotionCondition::Stopped:
      if (status.motion_state != MotionState::Stopped) {
        return false;
      }
      break;
    case MotionCondition::Any:
      break;
  }
  if (status.speed < c.speed_min || status.speed > c.speed_max) {
    return false;
  }
  return c.required.is_subset_of(status.perceptions) && !c.forbidden.intersects(status.perceptions);
}

}  // namespace flexlane::rules
