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

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace flexlane::autoir
{

inline constexpr double kDefaultTimerSeconds = 10.0;

enum class ValueType { Boolean, Number, Enum };

std::string_view to_string(ValueType type);

struct EnumToken
{
  std::string name;
  auto operator<=>(const EnumToken &) const = default;
};

/// Scalar value carried by `configAction`. Compound values are not supported.
using ConfigValue = std::variant<bool, double, EnumToken>;

ValueType type_of(const ConfigValue & value);

/// Canonical rendering: TRUE/FALSE, shortest round-trip decimal, or the token.
std::string format_value(const ConfigValue & value);

/// Registry-free inference used by the parser: TRUE/FALSE (any case) become
/// booleans, decimal literals numbers, anything else an enum token.
/// Returns nullopt when the text is empty or is not a valid token.
std::optional<ConfigValue> infer_value(std::string_view raw);

/// Parses a plain decimal literal. Rejects inf/nan and trailing garbage.
std::optional<double> parse_decimal(std::string_view text);

/// Shortest decimal string that round-trips to `value`.
std::string format_number(double value);

struct ParamPath
{
  std::string module;
  std::string node;
  std::string param;

  auto operator<=>(const ParamPath &) const = default;

  /// "module/node/param"
  std::string str() const;
};

/// One user instruction in the intermediate representation.
struct AutoIRProgram
{
  std::string module_select;
  std::string node_select;
  std::string param_select;
  ConfigValue config_action{false};
  double timer_seconds{kDefaultTimerSeconds};

  ParamPath path() const { return {module_select, node_select, param_select}; }

  bool operator==(const AutoIRProgram &) const = default;
};

/// `[a-z][a-z0-9_]*`
bool is_identifier(std::string_view text);

}  // namespace flexlane::autoir
