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

#include <optional>
#include <string_view>
#include <vector>

#include "flexlane/autoir/program.hpp"
#include "flexlane/common/clock.hpp"
#include "flexlane/common/error.hpp"
#include "flexlane/rules/rule_base.hpp"
#include "flexlane/rules/vehicle_status.hpp"

namespace flexlane::rules
{

inline constexpr Duration kPollPeriod = std::chrono::milliseconds(100);  // 10 Hz
inline constexpr Duration kStatusOutageLimit = std::chrono::seconds(1);

/// Supplies a fresh status on demand; nullopt when none is available.
class StatusSource
{
public:
  virtual ~StatusSource() = default;
  virtual std::optional<VehicleStatus> current_status() = 0;
};

enum class ValidationErrorCode { StatusUnavailable };

using ValidationError = CodedError<ValidationErrorCode>;

enum class Activation { Activated, NotActivated };

std::string_view to_string(Activation activation);

enum class RejectReason { NoRule, ConditionsNeverMet, Expired };

std::string_view to_string(RejectReason reason);

struct PollRecord
{
  TimePoint at;
  std::optional<VehicleStatus> status;
  bool matched{false};
};

struct ValidationResult
{
  Activation activation{Activation::NotActivated};
  std::optional<Rule> rule;
  std::optional<RejectReason> reason;     // set when NotActivated
  Duration effective_timer{};             // set when Activated
  TimePoint decided_at{};
  std::vector<PollRecord> polls;
};

/// Incremental form of the validation loop so a tick-driven host can advance
/// it without blocking: look up the rule once, then poll the status every
/// period until the conditions hold or the instruction lifetime runs out.
class InstructionValidator
{
public:
  InstructionValidator(
    const autoir::AutoIRProgram & program, const RuleBase & rule_base, TimePoint submitted_at,
    Duration poll_period = kPollPeriod);

  bool done() const { return done_; }
  TimePoint next_poll_at() const { return next_poll_; }
  TimePoint deadline() const { return deadline_; }

  /// One iteration at time `now`. Expires first if the lifetime is over,
  /// otherwise polls `source` and tests the rule. Throws StatusUnavailable
  /// when the source has failed continuously for more than one second.
  void step(TimePoint now, StatusSource & source);

  const ValidationResult & result() const { return result_; }

private:
  Duration timer_;
  Duration period_;
  TimePoint submitted_;
  TimePoint deadline_;
  TimePoint next_poll_;
  std::size_t poll_index_{0};
  std::optional<TimePoint> outage_since_;
  bool saw_status_{false};
  bool done_{false};
  ValidationResult result_;
};

/// Blocking validation against `clock`. With a ScriptedClock it runs instantly.
ValidationResult validate_instruction(
  const autoir::AutoIRProgram & program, const RuleBase & rule_base, StatusSource & source, MonotonicClock & clock,
  Duration poll_period = kPollPeriod);

/// min(program timer, rule cap); a rule never extends the lifetime.
Duration effective_timer(const autoir::AutoIRProgram & program, const Rule & rule);

}  // namespace flexlane::rules
