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

#include "flexlane/autoir/program.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <system_error>

namespace flexlane::autoir
{

namespace
{

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

bool is_token(std::string_view text)
{
  if (text.empty()) {
    return false;
  }
  const auto first = static_cast<unsigned char>(text.front());
  if (!std::isalpha(first) && first != '_') {
    return false;
  }
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (!std::isalnum(u) && c != '_') {
      return false;
    }
  }
  return true;
}

}  // namespace

std::string_view to_string(ValueType type)
{
  switch (type) {
    case ValueType::Boolean:
      return "boolean";
    case ValueType::Number:
      return "number";
    case ValueType::Enum:
      return "enum";
  }
  return "unknown";
}

ValueType type_of(const ConfigValue & value)
{
  switch (value.index()) {
    case 0:
      return ValueType::Boolean;
    case 1:
      return ValueType::Number;
    default:
      return ValueType::Enum;
  }
}

std::string format_number(double value)
{
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) {
    return "nan";
  }
  return std::string(buf.data(), end);
}

std::string format_value(const ConfigValue & value)
{
  if (const auto * b = std::get_if<bool>(&value)) {
    return *b ? "TRUE" : "FALSE";
  }
  if (const auto * d = std::get_if<double>(&value)) {
    return format_number(*d);
  }
  return std::get<EnumToken>(value).name;
}

std::optional<double> parse_decimal(std::string_view text)
{
  if (text.empty()) {
    return std::nullopt;
  }
  // from_chars does not accept a leading '+'.
  if (text.front() == '+') {
    text.remove_prefix(1);
    if (text.empty() || text.front() == '-') {
      return std::nullopt;
    }
  }
  // Only digits, sign, '.', and exponent markers; keeps "inf"/"nan" out.
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '.' && c != '-' && c != '+' &&
        c != 'e' && c != 'E') {
      return std::nullopt;
    }
  }
  double value = 0.0;
  const auto [ptr, ec] =
    std::from_chars(text.data(), text.data() + text.size(), value, std::chars_format::general);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::optional<ConfigValue> infer_value(std::string_view raw)
{
  if (iequals(raw, "true")) {
    return ConfigValue{true};
  }
  if (iequals(raw, "false")) {
    return ConfigValue{false};
  }
  if (auto number = parse_decimal(raw)) {
    return ConfigValue{*number};
  }
  if (is_token(raw)) {
    return ConfigValue{EnumToken{std::string(raw)}};
  }
  return std::nullopt;
}

std::string ParamPath::str() const { return module + "/" + node + "/" + param; }

bool is_identifier(std::string_view text)
{
  if (text.empty() || text.front() < 'a' || text.front() > 'z') {
    return false;
  }
  for (char c : text) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) {
      return false;
    }
  }
  return true;
}

}  // namespace flexlane::autoir
