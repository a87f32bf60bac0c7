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

#include "flexlane/autoir/text.hpp"

#include <array>
#include <cctype>
#include <optional>
#include <sstream>

#include <json.hpp>

namespace flexlane::autoir
{

namespace
{

enum class Field { Module, Node, Param, Config, Timer };

constexpr std::array<std::string_view, 5> kFieldKeys = {
  "moduleSelect", "nodeSelect", "paramSelect", "configAction", "Timer"};

std::string lower(std::string_view s)
{
  std::string out(s);
  for (auto & c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::string_view trim(std::string_view s)
{
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::optional<Field> field_for_key(std::string_view key)
{
  const auto k = lower(key);
  for (std::size_t i = 0; i < kFieldKeys.size(); ++i) {
    if (k == lower(kFieldKeys[i])) {
      return static_cast<Field>(i);
    }
  }
  return std::nullopt;
}

double parse_timer(std::string_view raw)
{
  raw = trim(raw);
  std::size_t split = raw.size();
  for (const std::string_view unit : {"seconds", "second", "secs", "sec", "s"}) {
    if (raw.size() > unit.size() && lower(raw.substr(raw.size() - unit.size())) == unit) {
      split = raw.size() - unit.size();
      break;
    }
  }
  const auto number = parse_decimal(trim(raw.substr(0, split)));
  if (!number) {
    throw ParseError(ParseErrorCode::BadValue, "Timer is not a number: '" + std::string(raw) + "'");
  }
  if (*number <= 0.0) {
    throw ParseError(ParseErrorCode::BadValue, "Timer must be positive, got " + format_number(*number));
  }
  return *number;
}

struct RawFields
{
  std::array<std::optional<std::string>, 5> text;
  std::optional<ConfigValue> typed_config;
  std::optional<double> typed_timer;
};

AutoIRProgram assemble(const RawFields & raw)
{
  for (std::size_t i = 0; i < 4; ++i) {
    if (!raw.text[i] && !(i == 3 && raw.typed_config)) {
      throw ParseError(ParseErrorCode::MissingField, "missing field " + std::string(kFieldKeys[i]));
    }
  }
  AutoIRProgram program;
  std::string * ids[] = {&program.module_select, &program.node_select, &program.param_select};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto value = trim(*raw.text[i]);
    if (!is_identifier(value)) {
      throw ParseError(
        ParseErrorCode::BadValue,
        std::string(kFieldKeys[i]) + " is not an identifier: '" + std::string(value) + "'");
    }
    *ids[i] = std::string(value);
  }
  if (raw.typed_config) {
    program.config_action = *raw.typed_config;
  } else {
    const auto value = trim(*raw.text[3]);
    auto inferred = infer_value(value);
    if (!inferred) {
      throw ParseError(ParseErrorCode::BadValue, "configAction is not a scalar: '" + std::string(value) + "'");
    }
    program.config_action = std::move(*inferred);
  }
  if (raw.typed_timer) {
    if (!(*raw.typed_timer > 0.0)) {
      throw ParseError(ParseErrorCode::BadValue, "Timer must be positive");
    }
    program.timer_seconds = *raw.typed_timer;
  } else if (raw.text[4]) {
    program.timer_seconds = parse_timer(*raw.text[4]);
  }
  return program;
}

AutoIRProgram parse_key_value(std::string_view text)
{
  RawFields raw;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') {
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw ParseError(
        ParseErrorCode::SyntaxError, "line " + std::to_string(line_no) + ": expected 'key: value'");
    }
    const auto key = trim(line.substr(0, colon));
    const auto field = field_for_key(key);
    if (!field) {
      throw ParseError(
        ParseErrorCode::SyntaxError,
        "line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
    auto & slot = raw.text[static_cast<std::size_t>(*field)];
    if (slot) {
      throw ParseError(
        ParseErrorCode::SyntaxError,
        "line " + std::to_string(line_no) + ": duplicate key '" + std::string(key) + "'");
    }
    const auto value = trim(line.substr(colon + 1));
    if (value.empty()) {
      throw ParseError(
        ParseErrorCode::BadValue, "line " + std::to_string(line_no) + ": empty value for '" +
                                    std::string(key) + "'");
    }
    slot = std::string(value);
  }
  return assemble(raw);
}

AutoIRProgram parse_object(std::string_view text)
{
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error & e) {
    throw ParseError(ParseErrorCode::SyntaxError, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ParseError(ParseErrorCode::SyntaxError, "AutoIR JSON must be an object");
  }
  RawFields raw;
  for (const auto & [key, value] : doc.items()) {
    const auto field = field_for_key(key);
    if (!field) {
      throw ParseError(ParseErrorCode::SyntaxError, "unknown key '" + key + "'");
    }
    const auto idx = static_cast<std::size_t>(*field);
    if (raw.text[idx] || (idx == 3 && raw.typed_config) || (idx == 4 && raw.typed_timer)) {
      throw ParseError(ParseErrorCode::SyntaxError, "duplicate key '" + key + "'");
    }
    if (value.is_string()) {
      raw.text[idx] = value.get<std::string>();
    } else if (*field == Field::Config && value.is_boolean()) {
      raw.typed_config = ConfigValue{value.get<bool>()};
    } else if (*field == Field::Config && value.is_number()) {
      raw.typed_config = ConfigValue{value.get<double>()};
    } else if (*field == Field::Timer && value.is_number()) {
      raw.typed_timer = value.get<double>();
    } else {
      throw ParseError(ParseErrorCode::BadValue, "unsupported value type for '" + key + "'");
    }
  }
  return assemble(raw);
}

}  // namespace

std::string_view to_string(ParseErrorCode code)
{
  switch (code) {
    case ParseErrorCode::SyntaxError:
      return "SyntaxError";
    case ParseErrorCode::MissingField:
      return "MissingField";
    case ParseErrorCode::BadValue:
      return "BadValue";
  }
  return "Unknown";
}

AutoIRProgram parse_autoir(std::string_view text)
{
  const auto body = trim(text);
  if (body.empty()) {
    throw ParseError(ParseErrorCode::SyntaxError, "empty AutoIR document");
  }
  if (body.front() == '{') {
    return parse_object(body);
  }
  return parse_key_value(body);
}

std::string serialize_autoir(const AutoIRProgram & program)
{
  std::ostringstream out;
  out << "moduleSelect: " << program.module_select << '\n'
      << "nodeSelect: " << program.node_select << '\n'
      << "paramSelect: " << program.param_select << '\n'
      << "configAction: " << format_value(program.config_action) << '\n'
      << "Timer: " << format_number(program.timer_seconds) << '\n';
  return out.str();
}

std::string canonicalize_autoir(std::string_view text) { return serialize_autoir(parse_autoir(text)); }

}  // namespace flexlane::autoir
