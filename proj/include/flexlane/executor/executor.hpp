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

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "flexlane/autoir/program.hpp"
#include "flexlane/executor/param_store.hpp"
#include "flexlane/rules/rule_base.hpp"
#include "flexlane/rules/validation.hpp"

namespace flexlane::executor
{

enum class InstructionState { Pending, Validating, Active, Expired, Rejected, Failed };

std::string_view to_string(InstructionState state);

inline bool is_terminal(InstructionState s)
{
  return s == InstructionState::Expired || s == InstructionState::Rejected || s == InstructionState::Failed;
}

struct InstructionRecord
{
  std::string id;
  autoir::AutoIRProgram program;
  InstructionState state{InstructionState::Pending};
  std::optional<rules::Rule> rule;
  std::optional<ParamSnapshot> snapshot;
  TimePoint submitted_at{};
  std::optional<TimePoint> decided_at;
  std::optional<TimePoint> activated_at;
  std::optional<TimePoint> expires_at;
  std::optional<TimePoint> finished_at;
  Duration effective_timer{};
  std::size_t polls{0};
  std::optional<std::string> reason;  // reject / failure code, or "Cancelled"
};

nlohmann::json record_to_json(const InstructionRecord & record);

struct ActiveOverride
{
  std::string instruction_id;
  autoir::ParamPath path;
  autoir::ConfigValue value;
  double remaining_seconds{0.0};
};

/// Runs submitted programs through validation, applies the winners as
/// timed overrides and restores the backups on expiry. Driven by tick().
class Executor
{
public:
  Executor(
    std::shared_ptr<const rules::RuleBase> rule_base, ParamStore & store, rules::StatusSource & status,
    Duration poll_period = rules::kPollPeriod);

  /// Starts validation. Throws ConflictPending when another record on the
  /// same path is still Validating or Active.
  std::string submit(const autoir::AutoIRProgram & program, TimePoint now);

  /// Polls due validators, activates, and expires overrides at `now`.
  void tick(TimePoint now);

  /// Ends an Active or Validating record now, restoring any override.
  void cancel(const std::string & id, TimePoint now);

  /// Operator write outside any instruction.
  void manual_write(const autoir::ParamPath & path, const autoir::ConfigValue & value, TimePoint now);

  std::vector<ActiveOverride> active_overrides(TimePoint now) const;
  std::optional<InstructionRecord> record(const std::string & id) const;
  std::vector<InstructionRecord> records() const;
  bool idle() const;

private:
  struct Slot
  {
    InstructionRecord record;
    std::optional<rules::InstructionValidator> validator;
  };

  void restore(Slot & slot, TimePoint now, InstructionState final_state, std::optional<std::string> reason);

  std::shared_ptr<const rules::RuleBase> rule_base_;
  ParamStore & store_;
  rules::StatusSource & status_;
  Duration poll_period_;

  mutable std::mutex mutex_;
  std::map<std::string, Slot> slots_;
  std::vector<std::string> order_;
  std::size_t next_id_{1};
};

}  // namespace flexlane::executor
