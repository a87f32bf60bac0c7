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

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "flexlane/autoir/registry.hpp"
#include "flexlane/common/clock.hpp"
#include "flexlane/common/error.hpp"

namespace flexlane::executor
{

enum class ExecutorErrorCode { UnknownPath, TypeMismatch, ConflictPending, UnknownInstruction };

std::string_view to_string(ExecutorErrorCode code);

using ExecutorError = CodedError<ExecutorErrorCode>;

using ParamValues = std::map<autoir::ParamPath, autoir::ConfigValue>;

struct ChangeLogEntry
{
  TimePoint t{};
  autoir::ParamPath path;
  autoir::ConfigValue old_value;
  autoir::ConfigValue new_value;
  std::string cause;  // instruction id, "restore" or "manual"
  std::optional<std::string> instruction;  // owner of a restore
  std::optional<std::string> note;  // "overwrite" when a restore replaced a foreign write

  bool operator==(const ChangeLogEntry &) const = default;
};

nlohmann::json change_to_json(const ChangeLogEntry & entry);

struct ParamSnapshot
{
  autoir::ParamPath path;
  autoir::ConfigValue original;
  TimePoint taken_at{};

  bool operator==(const ParamSnapshot &) const = default;
};

/// Live parameter values of the stack, seeded with registry defaults. One
/// writer at a time; readers get immutable snapshots.
class ParamStore
{
public:
  using Listener = std::function<void(const autoir::ParamPath &, const autoir::ConfigValue &)>;

  explicit ParamStore(std::shared_ptr<const autoir::ParamRegistry> registry);

  autoir::ConfigValue get(const autoir::ParamPath & path) const;
  std::shared_ptr<const ParamValues> snapshot() const;

  /// Backs up the current value and writes `value` in one step.
  ParamSnapshot apply_override(
    const autoir::ParamPath & path, const autoir::ConfigValue & value, TimePoint now, const std::string & cause);

  /// Plain write with a change-log entry.
  void write(
    const autoir::ParamPath & path, const autoir::ConfigValue & value, TimePoint now, const std::string & cause,
    std::optional<std::string> instruction = std::nullopt, std::optional<std::string> note = std::nullopt);

  std::vector<ChangeLogEntry> change_log() const;
  void write_change_log(std::ostream & out) const;

  /// Canonical JSON of every value, keyed by "module/node/param".
  std::string serialize() const;

  const autoir::ParamRegistry & registry() const { return *registry_; }

  /// Called after every write, under the store lock.
  void set_listener(Listener listener);

private:
  void check(const autoir::ParamPath & path, const autoir::ConfigValue & value) const;
  void commit(const autoir::ParamPath & path, const autoir::ConfigValue & value, ChangeLogEntry entry);

  std::shared_ptr<const autoir::ParamRegistry> registry_;
  mutable std::mutex mutex_;
  std::shared_ptr<const ParamValues> values_;
  std::vector<ChangeLogEntry> log_;
  Listener listener_;
};

}  // namespace flexlane::executor
