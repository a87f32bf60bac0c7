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

#include "flexlane/rules/validation.hpp"

#include <algorithm>

namespace flexlane::rules
{

std::string_view to_string(Activation activation)
{
  return activation == Activation::Activated ? "Activated" : "NotActivated";
}

std::string_view to_string(RejectReason reason)
{
  switch (reason) {
    case RejectReason::NoRule:
      return "NoRule";
    case RejectReason::ConditionsNeverMet:
      return "ConditionsNeverMet";
    case RejectReason::Expired:
      return "Expired";
  }
  return "Unknown";
}

Duration effective_timer(const autoir::AutoIRProgram & program, const Rule & rule)
{
  auto timer = seconds_to_duration(program.timer_seconds);
  if (rule.timer_cap_seconds) {
    timer = std::min(timer, seconds_to_duration(*rule.timer_cap_seconds));
  }
  return timer;
}

InstructionValidator::InstructionValidator(
  const autoir::AutoIRProgram & program, const RuleBase & rule_base, TimePoint submitted_at, Duration poll_period)
: timer_(seconds_to_duration(program.timer_seconds)),
  period_(poll_period),
  submitted_(submitted_at),
  deadline_(submitted_at + timer_),
  next_poll_(submitted_at)
{
  const Rule * rule = search_rule(rule_base, program);
  if (rule == nullptr) {
    done_ = true;
    result_.activation = Activation::NotActivated;
    result_.reason = RejectReason::NoRule;
    result_.decided_at = submitted_at;
    return;
  }
  result_.rule = *rule;
  result_.effective_timer = effective_timer(program, *rule);
}

void InstructionValidator::step(TimePoint now, StatusSource & source)
{
  if (done_) {
    return;
  }
  if (now >= deadline_) {
    done_ = true;
    result_.activation = Activation::NotActivated;
    result_.reason = saw_status_ ? RejectReason::ConditionsNeverMet : RejectReason::Expired;
    result_.decided_at = now;
    return;
  }

  auto status = source.current_status();
  PollRecord record{now, status, false};
  if (status) {
    saw_status_ = true;
    outage_since_.reset();
    record.matched = match_conditions(*result_.rule, *status);
  } else {
    if (!outage_since_) {
      outage_since_ = now;
    }
  }
  result_.polls.push_back(std::move(record));
  ++poll_index_;
  next_poll_ = submitted_ + period_ * static_cast<std::int64_t>(poll_index_);

  if (result_.polls.back().matched) {
    done_ = true;
    result_.activation = Activation::Activated;
    result_.reason.reset();
    result_.decided_at = now;
    return;
  }
  if (outage_since_ && now - *outage_since_ > kStatusOutageLimit) {
    done_ = true;
    throw ValidationError(ValidationErrorCode::StatusUnavailable, "vehicle status unavailable for more than 1 s");
  }
}

ValidationResult validate_instruction(
  const autoir::AutoIRProgram & program, const RuleBase & rule_base, StatusSource & source, MonotonicClock & clock,
  Duration poll_period)
{
  InstructionValidator validator(program, rule_base, clock.now(), poll_period);
  while (!validator.done()) {
    clock.sleep_until(validator.next_poll_at());
    validator.step(clock.now(), source);
  }
  return validator.result();
}

}  // namespace flexlane::rules
