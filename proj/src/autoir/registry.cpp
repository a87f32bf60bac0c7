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

#include "flexlane/autoir/registry.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace flexlane::autoir
{

namespace
{

using nlohmann::json;

bool iequals(std::string_view a, std::string_view b)
{
  if (a.size() != b.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

ParamDescriptor descriptor_from_json(const json & j, const std::string & where)
{
  if (!j.is_object() || !j.contains("type") || !j.contains("default")) {
    throw RegistryError(RegistryErrorCode::ParseError, where + ": descriptor needs 'type' and 'default'");
  }
  ParamDescriptor d;
  const auto type = j.at("type").get<std::string>();
  const auto & def = j.at("default");
  if (type == "boolean") {
    d.value_type = ValueType::Boolean;
    if (!def.is_boolean()) {
      throw RegistryError(RegistryErrorCode::BadDescriptor, where + ": boolean default expected");
    }
    d.default_value = def.get<bool>();
  } else if (type == "number") {
    d.value_type = ValueType::Number;
    if (!def.is_number()) {
      throw RegistryError(RegistryErrorCode::BadDescriptor, where + ": numeric default expected");
    }
    d.default_value = def.get<double>();
    if (j.contains("min")) {
      d.min = j.at("min").get<double>();
    }
    if (j.contains("max")) {
      d.max = j.at("max").get<double>();
    }
    if (j.contains("unit")) {
      d.unit = j.at("unit").get<std::string>();
    }
  } else if (type == "enum") {
    d.value_type = ValueType::Enum;
    d.tokens = j.at("tokens").get<std::vector<std::string>>();
    if (!def.is_string()) {
      throw RegistryError(RegistryErrorCode::BadDescriptor, where + ": enum default expected");
    }
    d.default_value = EnumToken{def.get<std::string>()};
  } else {
    throw RegistryError(RegistryErrorCode::ParseError, where + ": unknown type '" + type + "'");
  }
  return d;
}

json descriptor_to_json(const ParamDescriptor & d)
{
  json j;
  j["type"] = std::string(to_string(d.value_type));
  switch (d.value_type) {
    case ValueType::Boolean:
      j["default"] = std::get<bool>(d.default_value);
      break;
    case ValueType::Number:
      j["default"] = std::get<double>(d.default_value);
      if (d.min) {
        j["min"] = *d.min;
      }
      if (d.max) {
        j["max"] = *d.max;
      }
      if (d.unit) {
        j["unit"] = *d.unit;
      }
      break;
    case ValueType::Enum:
      j["default"] = std::get<EnumToken>(d.default_value).name;
      j["tokens"] = d.tokens;
      break;
  }
  return j;
}

}  // namespace

bool ParamDescriptor::accepts(const ConfigValue & value) const
{
  if (type_of(value) != value_type) {
    return false;
  }
  if (const auto * number = std::get_if<double>(&value)) {
    if (!std::isfinite(*number)) {
      return false;
    }
    return (!min || *number >= *min) && (!max || *number <= *max);
  }
  if (const auto * token = std::get_if<EnumToken>(&value)) {
    for (const auto & t : tokens) {
      if (t == token->name) {
        return true;
      }
    }
    return false;
  }
  return true;
}

ParamRegistry ParamRegistry::from_json(std::string_view document)
{
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error & e) {
    throw RegistryError(RegistryErrorCode::ParseError, std::string("registry: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("modules") || !doc.at("modules").is_object()) {
    throw RegistryError(RegistryErrorCode::ParseError, "registry: top-level 'modules' object required");
  }
  ParamRegistry registry;
  try {
    for (const auto & [module, nodes] : doc.at("modules").items()) {
      for (const auto & [node, params] : nodes.items()) {
        for (const auto & [param, desc] : params.items()) {
          ParamPath path{module, node, param};
          registry.add(path, descriptor_from_json(desc, path.str()));
        }
      }
    }
  } catch (const json::exception & e) {
    throw RegistryError(RegistryErrorCode::ParseError, std::string("registry: ") + e.what());
  }
  return registry;
}

ParamRegistry ParamRegistry::load(const std::filesystem::path & file)
{
  std::ifstream in(file);
  if (!in) {
    throw RegistryError(RegistryErrorCode::ParseError, "cannot open registry file " + file.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

void ParamRegistry::add(const ParamPath & path, ParamDescriptor descriptor)
{
  if (!is_identifier(path.module) || !is_identifier(path.node) || !is_identifier(path.param)) {
    throw RegistryError(RegistryErrorCode::BadDescriptor, path.str() + ": path segments must be identifiers");
  }
  if (descriptor.value_type == ValueType::Enum && descriptor.tokens.empty()) {
    throw RegistryError(RegistryErrorCode::BadDescriptor, path.str() + ": enum without tokens");
  }
  if (descriptor.min && descriptor.max && *descriptor.min > *descriptor.max) {
    throw RegistryError(RegistryErrorCode::BadDescriptor, path.str() + ": min > max");
  }
  if (!descriptor.accepts(descriptor.default_value)) {
    throw RegistryError(RegistryErrorCode::BadDescriptor, path.str() + ": default violates its own constraint");
  }
  auto & params = modules_[path.module][path.node];
  if (params.count(path.param) != 0) {
    throw RegistryError(RegistryErrorCode::DuplicatePath, path.str() + ": duplicate path");
  }
  params.emplace(path.param, std::move(descriptor));
}

const ParamDescriptor * ParamRegistry::find(const ParamPath & path) const
{
  const auto m = modules_.find(path.module);
  if (m == modules_.end()) {
    return nullptr;
  }
  const auto n = m->second.find(path.node);
  if (n == m->second.end()) {
    return nullptr;
  }
  const auto p = n->second.find(path.param);
  return p == n->second.end() ? nullptr : &p->second;
}

bool ParamRegistry::has_module(std::string_view module) const { return modules_.find(module) != modules_.end(); }

bool ParamRegistry::has_node(std::string_view module, std::string_view node) const
{
  const auto m = modules_.find(module);
  return m != modules_.end() && m->second.find(node) != m->second.end();
}

std::vector<ParamPath> ParamRegistry::paths() const
{
  std::vector<ParamPath> out;
  for (const auto & [module, nodes] : modules_) {
    for (const auto & [node, params] : nodes) {
      for (const auto & [param, desc] : params) {
        out.push_back({module, node, param});
      }
    }
  }
  return out;
}

std::size_t ParamRegistry::size() const
{
  std::size_t n = 0;
  for (const auto & [module, nodes] : modules_) {
    for (const auto & [node, params] : nodes) {
      n += params.size();
    }
  }
  return n;
}

std::string ParamRegistry::to_json() const
{
  json modules = json::object();
  for (const auto & [module, nodes] : modules_) {
    for (const auto & [node, params] : nodes) {
      for (const auto & [param, desc] : params) {
        modules[module][node][param] = descriptor_to_json(desc);
      }
    }
  }
  json doc;
  doc["version"] = 1;
  doc["modules"] = std::move(modules);
  return doc.dump(2);
}

ConfigValue coerce_config_value(std::string_view raw, const ParamDescriptor & descriptor)
{
  switch (descriptor.value_type) {
    case ValueType::Boolean:
      if (iequals(raw, "true")) {
        return true;
      }
      if (iequals(raw, "false")) {
        return false;
      }
      break;
    case ValueType::Number:
      if (auto number = parse_decimal(raw)) {
        return *number;
      }
      break;
    case ValueType::Enum:
      for (const auto & token : descriptor.tokens) {
        if (token == raw) {
          return EnumToken{token};
        }
      }
      for (const auto & token : descriptor.tokens) {
        if (iequals(token, raw)) {
          return EnumToken{token};
        }
      }
      break;
  }
  throw CoerceError(
    CoerceErrorCode::TypeMismatch,
    "cannot coerce '" + std::string(raw) + "' to " + std::string(to_string(descriptor.value_type)));
}

std::string_view to_string(IssueCode code)
{
  switch (code) {
    case IssueCode::UnknownModule:
      return "UnknownModule";
    case IssueCode::UnknownNode:
      return "UnknownNode";
    case IssueCode::UnknownParam:
      return "UnknownParam";
    case IssueCode::TypeMismatch:
      return "TypeMismatch";
    case IssueCode::OutOfRange:
      return "OutOfRange";
    case IssueCode::BadTimer:
      return "BadTimer";
  }
  return "Unknown";
}

std::string ValidationReport::summary() const
{
  if (ok) {
    return "ok";
  }
  std::string out;
  for (const auto & issue : issues) {
    if (!out.empty()) {
      out += "; ";
    }
    out += std::string(to_string(issue.code)) + " at " + issue.path + ": " + issue.message;
  }
  return out;
}

ValidationReport validate_program(const AutoIRProgram & program, const ParamRegistry & registry)
{
  ValidationReport report;
  auto add = [&report](std::string path, IssueCode code, std::string message) {
    report.issues.push_back({std::move(path), code, std::move(message)});
  };

  if (!registry.has_module(program.module_select)) {
    add("moduleSelect", IssueCode::UnknownModule, "no module '" + program.module_select + "'");
  } else if (!registry.has_node(program.module_select, program.node_select)) {
    add("nodeSelect", IssueCode::UnknownNode,
        "no node '" + program.node_select + "' in module '" + program.module_select + "'");
  } else if (const auto * desc = registry.find(program.path()); desc == nullptr) {
    add("paramSelect", IssueCode::UnknownParam,
        "no param '" + program.param_select + "' on node '" + program.node_select + "'");
  } else if (type_of(program.config_action) != desc->value_type) {
    add("configAction", IssueCode::TypeMismatch,
        "expected " + std::string(to_string(desc->value_type)) + ", got " +
          std::string(to_string(type_of(program.config_action))));
  } else if (!desc->accepts(program.config_action)) {
    add("configAction", IssueCode::OutOfRange,
        "value " + format_value(program.config_action) + " outside the declared range");
  }

  if (!std::isfinite(program.timer_seconds) || program.timer_seconds <= 0.0) {
    add("Timer", IssueCode::BadTimer, "timer must be a positive number of seconds");
  }
  report.ok = report.issues.empty();
  return report;
}

}  // namespace flexlane::autoir
