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

#include "flexlane/executor/param_store.hpp"

namespace flexlane::executor
{

namespace
{

nlohmann::json value_json(const autoir::ConfigValue & value)
{
  if (const auto * b = std::get_if<bool>(&value)) {
    return *b;
  }
  if (const auto * d = std::get_if<double>(&value)) {
    return *d;
  }
  return std::get<autoir::EnumToken>(value).name;
}

}  // namespace

std::string_view to_string(ExecutorErrorCode code)
{
  switch (code) {
    case ExecutorErrorCode::UnknownPath:
      return "UnknownPath";
    case ExecutorErrorCode::TypeMismatch:
      return "TypeMismatch";
    case ExecutorErrorCode::ConflictPending:
      return "ConflictPending";
    case ExecutorErrorCode::UnknownInstruction:
      return "UnknownInstruction";
  }
  return "Unknown";
}

nlohmann::json change_to_json(const ChangeLogEntry & entry)
{
  nlohmann::json j = {
    {"t", to_seconds(entry.t)},
    {"path", entry.path.str()},
    {"old", value_json(entry.old_value)},
    {"new", value_json(entry.new_value)},
    {"cause", entry.cause},
  };
  if (entry.instruction) {
    j["instruction"] = *entry.instruction;
  }
  if (entry.note) {
    j["note"] = *entry.note;
  }
  return j;
}

ParamStore::ParamStore(std::shared_ptr<const autoir::ParamRegistry> registry) : registry_(std::move(registry))
{
  auto values = std::make_shared<ParamValues>();
  for (const auto & path : registry_->paths()) {
    (*values)[path] = registry_->find(path)->default_value;
  }
  values_ = std::move(values);
}

void ParamStore::check(const autoir::ParamPath & path, const autoir::ConfigValue & value) const
{
  const auto * desc = registry_->find(path);
  if (desc == nullptr) {
    throw ExecutorError(ExecutorErrorCode::UnknownPath, "unknown parameter " + path.str());
  }
  if (!desc->accepts(value)) {
    throw ExecutorError(
      ExecutorErrorCode::TypeMismatch, "value " + autoir::format_value(value) + " not accepted by " + path.str());
  }
}

autoir::ConfigValue ParamStore::get(const autoir::ParamPath & path) const
{
  const auto values = snapshot();
  const auto it = values->find(path);
  if (it == values->end()) {
    throw ExecutorError(ExecutorErrorCode::UnknownPath, "unknown parameter " + path.str());
  }
  return it->second;
}

std::shared_ptr<const ParamValues> ParamStore::snapshot() const
{
  std::lock_guard lock(mutex_);
  return values_;
}

void ParamStore::commit(const autoir::ParamPath & path, const autoir::ConfigValue & value, ChangeLogEntry entry)
{
  auto next = std::make_shared<ParamValues>(*values_);
  (*next)[path] = value;
  values_ = std::move(next);
  log_.push_back(std::move(entry));
  if (listener_) {
    listener_(path, value);
  }
}

ParamSnapshot ParamStore::apply_override(
  const autoir::ParamPath & path, const autoir::ConfigValue & value, TimePoint now, const std::string & cause)
{
  check(path, value);
  std::lock_guard lock(mutex_);
  const auto old = values_->at(path);
  commit(path, value, {now, path, old, value, cause, std::nullopt, std::nullopt});
  return {path, old, now};
}

void ParamStore::write(
  const autoir::ParamPath & path, const autoir::ConfigValue & value, TimePoint now, const std::string & cause,
  std::optional<std::string> instruction, std::optional<std::string> note)
{
  check(path, value);
  std::lock_guard lock(mutex_);
  const auto old = values_->at(path);
  commit(path, value, {now, path, old, value, cause, std::move(instruction), std::move(note)});
}

std::vector<ChangeLogEntry> ParamStore::change_log() const
{
  std::lock_guard lock(mutex_);
  return log_;
}

void ParamStore::write_change_log(std::ostream & out) const
{
  for (const auto & entry : change_log()) {
    out << change_to_json(entry).dump() << '\n';
  }
}

std::string ParamStore::serialize() const
{
  const auto values = snapshot();
  nlohmann::json j = nlohmann::json::object();
  for (const auto & [path, value] : *values) {
    j[path.str()] = autoir::format_value(value);
  }
  return j.dump();
}

void ParamStore::set_listener(Listener listener)
{
  std::lock_guard lock(mutex_);
  listener_ = std::move(listener);
}

}  // namespace flexlane::executor
