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

#include "flexlane/executor/executor.hpp"

#include <algorithm>
#include <cstdio>

namespace flexlane::executor
{

namespace
{

nlohmann::json time_json(const std::optional<TimePoint> & t)
{
  return t ? nlohmann::json(to_seconds(*t)) : nlohmann::json(nullptr);
}

}  // namespace

std::string_view to_string(InstructionState state)
{
  switch (state) {
    case InstructionState::Pending:
      return "Pending";
    case InstructionState::Validating:
      return "Validating";
    case InstructionState::Active:
      return "Active";
    case InstructionState::Expired:
      return "Expired";
    case InstructionState::Rejected:
      return "Rejected";
    case InstructionState::Failed:
      return "Failed";
  }
  return "Unknown";
}

nlohmann::json record_to_json(const InstructionRecord & record)
{
  nlohmann::json j = {
    {"id", record.id},
    {"path", record.program.path().str()},
    {"value", autoir::format_value(record.program.config_action)},
    {"timer", record.program.timer_seconds},
    {"state", std::string(to_string(record.state))},
    {"rule", record.rule ? nlohmann::json::parse(rules::rule_to_json(*record.rule)) : nlohmann::json(nullptr)},
    {"submitted_at", to_seconds(record.submitted_at)},
    {"decided_at", time_json(record.decided_at)},
    {"activated_at", time_json(record.activated_at)},
    {"expires_at", time_json(record.expires_at)},
    {"finished_at", time_json(record.finished_at)},
    {"effective_timer", to_seconds(record.effective_timer)},
    {"polls", record.polls},
    {"reason", record.reason ? nlohmann::json(*record.reason) : nlohmann::json(nullptr)},
  };
  if (record.snapshot) {
    j["snapshot"] = autoir::format_value(record.snapshot->original);
  }
  return j;
}

Executor::Executor(
  std::shared_ptr<const rules::RuleBase> rule_base, ParamStore & store, rules::StatusSource & status,
  Duration poll_period)
: rule_base_(std::move(rule_base)), store_(store), status_(status), poll_period_(poll_period)
{
}

std::string Executor::submit(const autoir::AutoIRProgram & program, TimePoint now)
{
  std::lock_guard lock(mutex_);
  const auto path = program.path();
  for (const auto & [id, slot] : slots_) {
    const auto s = slot.record.state;
    if ((s == InstructionState::Validating || s == InstructionState::Active) && slot.record.program.path() == path) {
      throw ExecutorError(ExecutorErrorCode::ConflictPending, "instruction " + id + " already owns " + path.str());
    }
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "ins-%04zu", next_id_++);
  Slot slot;
  slot.record.id = buf;
  slot.record.program = program;
  slot.record.state = InstructionState::Validating;
  slot.record.submitted_at = now;
  slot.validator.emplace(program, *rule_base_, now, poll_period_);
  const auto & r = slot.validator->result();
  slot.record.rule = r.rule;
  slot.record.effective_timer = r.effective_timer;
  const std::string id = slot.record.id;
  order_.push_back(id);
  slots_.emplace(id, std::move(slot));
  return id;
}

void Executor::restore(Slot & slot, TimePoint now, InstructionState final_state, std::optional<std::string> reason)
{
  auto & rec = slot.record;
  if (rec.snapshot) {
    const auto current = store_.get(rec.snapshot->path);
    std::optional<std::string> note;
    if (current != rec.program.config_action) {
      note = "overwrite";
    }
    store_.write(rec.snapshot->path, rec.snapshot->original, now, "restore", rec.id, note);
  }
  rec.state = final_state;
  rec.finished_at = now;
  rec.reason = std::move(reason);
}

void Executor::tick(TimePoint now)
{
  std::lock_guard lock(mutex_);
  for (const auto & id : order_) {
    auto & slot = slots_.at(id);
    auto & rec = slot.record;
    if (rec.state == InstructionState::Active && rec.expires_at && now >= *rec.expires_at) {
      restore(slot, now, InstructionState::Expired, std::nullopt);
    }
  }
  for (const auto & id : order_) {
    auto & slot = slots_.at(id);
    auto & rec = slot.record;
    if (rec.state != InstructionState::Validating || !slot.validator) {
      continue;
    }
    auto & validator = *slot.validator;
    try {
      if (!validator.done() && (now >= validator.next_poll_at() || now >= validator.deadline())) {
        validator.step(now, status_);
      }
    } catch (const rules::ValidationError & e) {
      rec.polls = validator.result().polls.size();
      rec.state = InstructionState::Failed;
      rec.reason = "StatusUnavailable";
      rec.decided_at = now;
      rec.finished_at = now;
      continue;
    }
    if (!validator.done()) {
      continue;
    }
    const auto & result = validator.result();
    rec.polls = result.polls.size();
    rec.decided_at = result.decided_at;
    if (result.activation == rules::Activation::NotActivated) {
      rec.state = InstructionState::Rejected;
      rec.reason = std::string(rules::to_string(*result.reason));
      rec.finished_at = result.decided_at;
      continue;
    }
    try {
      rec.snapshot = store_.apply_override(rec.program.path(), rec.program.config_action, now, rec.id);
    } catch (const ExecutorError & e) {
      rec.state = InstructionState::Failed;
      rec.reason = std::string(to_string(e.code()));
      rec.finished_at = now;
      continue;
    }
    rec.state = InstructionState::Active;
    rec.activated_at = now;
    rec.expires_at = now + rec.effective_timer;
  }
}

void Executor::cancel(const std::string & id, TimePoint now)
{
  std::lock_guard lock(mutex_);
  const auto it = slots_.find(id);
  if (it == slots_.end()) {
    throw ExecutorError(ExecutorErrorCode::UnknownInstruction, "unknown instruction " + id);
  }
  auto & rec = it->second.record;
  if (rec.state == InstructionState::Active) {
    restore(it->second, now, InstructionState::Expired, "Cancelled");
  } else if (rec.state == InstructionState::Validating || rec.state == InstructionState::Pending) {
    rec.state = InstructionState::Rejected;
    rec.reason = "Cancelled";
    rec.finished_at = now;
  }
}

void Executor::manual_write(const autoir::ParamPath & path, const autoir::ConfigValue & value, TimePoint now)
{
  std::lock_guard lock(mutex_);
  store_.write(path, value, now, "manual");
}

std::vector<ActiveOverride> Executor::active_overrides(TimePoint now) const
{
  std::lock_guard lock(mutex_);
  std::vector<ActiveOverride> out;
  for (const auto & id : order_) {
    const auto & rec = slots_.at(id).record;
    if (rec.state != InstructionState::Active) {
      continue;
    }
    const double remaining = std::max(0.0, to_seconds(*rec.expires_at - now));
    out.push_back({rec.id, rec.program.path(), rec.program.config_action, remaining});
  }
  return out;
}

std::optional<InstructionRecord> Executor::record(const std::string & id) const
{
  std::lock_guard lock(mutex_);
  const auto it = slots_.find(id);
  if (it == slots_.end()) {
    return std::nullopt;
  }
  return it->second.record;
}

std::vector<InstructionRecord> Executor::records() const
{
  std::lock_guard lock(mutex_);
  std::vector<InstructionRecord> out;
  for (const auto & id : order_) {
    out.push_back(slots_.at(id).record);
  }
  return out;
}

bool Executor::idle() const
{
  std::lock_guard lock(mutex_);
  return std::all_of(order_.begin(), order_.end(), [this](const std::string & id) {
    return is_terminal(slots_.at(id).record.state);
  });
}

}  // namespace flexlane::executor
