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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flexlane/autoir/program.hpp"
#include "flexlane/common/error.hpp"

namespace flexlane::autoir
{

struct ParamDescriptor
{
  ValueType value_type{ValueType::Number};
  std::optional<std::string> unit;
  std::optional<double> min;  // numbers only, inclusive
  std::optional<double> max;  // numbers only, inclusive
  std::vector<std::string> tokens;  // enums only
  ConfigValue default_value{0.0};

  /// True when `value` has the declared type and lies in range / token set.
  bool accepts(const ConfigValue & value) const;
};

enum class RegistryErrorCode { ParseError, BadDescriptor, DuplicatePath };

using RegistryError = CodedError<RegistryErrorCode>;

/// Catalog of the tunable parameters of the driving stack: module -> node -> param.
class ParamRegistry
{
public:
  using ParamMap = std::map<std::string, ParamDescriptor, std::less<>>;
  using NodeMap = std::map<std::string, ParamMap, std::less<>>;
  using ModuleMap = std::map<std::string, NodeMap, std::less<>>;

  ParamRegistry() = default;

  static ParamRegistry from_json(std::string_view document);
  static ParamRegistry load(const std::filesystem::path & file);

  /// Adds a descriptor. Throws DuplicatePath or BadDescriptor.
  void add(const ParamPath & path, ParamDescriptor descriptor);

  const ParamDescriptor * find(const ParamPath & path) const;
  bool has_module(std::string_view module) const;
  bool has_node(std::string_view module, std::string_view node) const;

  /// All paths in lexicographic order.
  std::vector<ParamPath> paths() const;
  const ModuleMap & modules() const { return modules_; }
  std::size_t size() const;

  std::string to_json() const;

private:
  ModuleMap modules_;
};

enum class CoerceErrorCode { TypeMismatch };

using CoerceError = CodedError<CoerceErrorCode>;

/// Interprets a raw configAction literal against a descriptor's declared type.
ConfigValue coerce_config_value(std::string_view raw, const ParamDescriptor & descriptor);

enum class IssueCode { UnknownModule, UnknownNode, UnknownParam, TypeMismatch, OutOfRange, BadTimer };

std::string_view to_string(IssueCode code);

struct ValidationIssue
{
  std::string path;  // field name, e.g. "configAction"
  IssueCode code;
  std::string message;

  bool operator==(const ValidationIssue &) const = default;
};

struct ValidationReport
{
  bool ok{true};
  std::vector<ValidationIssue> issues;

  bool operator==(const ValidationReport &) const = default;

  std::string summary() const;
};

/// Collects every violated constraint; never throws.
ValidationReport validate_program(const AutoIRProgram & program, const ParamRegistry & registry);

}  // namespace flexlane::autoir
