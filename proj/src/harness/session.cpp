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

#include "flexlane/harness/session.hpp"

#include <cstdio>

#include "flexlane/autoir/text.hpp"
#include "flexlane/harness/eval.hpp"
#include "flexlane/rules/rule_base.hpp"
#include "flexlane/sim/world.hpp"

namespace flexlane::harness
{

using nlohmann::json;

namespace
{

bus::MessageBus & with_standard_topics(bus::MessageBus & bus)
{
  bus::declare_standard_topics(bus);
  return bus;
}

double wall_now()
{
  const auto since_epoch = std::chrono::system_clock::now().time_since_epoch();
  return std::chrono::duration<double>(since_epoch).count();
}

bool blank(std::string_view text)
{
  return text.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

json status_to_json(const rules::VehicleStatus & status)
{
  return {
    {"motion_state", std::string(rules::to_string(status.motion_state))},
    {"stop_reason", status.stop_reason ? json(*status.stop_reason) : json(nullptr)},
    {"speed", status.speed},
    {"perceptions", status.perceptions.names()},
  };
}

}  // namespace

TranslatorNode::TranslatorNode(
  bus::MessageBus & bus, std::shared_ptr<const translation::TranslationPipeline> pipeline, TraceLog & traces)
: utterances_(bus.subscribe(bus::kUserInstructionTopic)),
  autoir_(bus.make_publisher(bus::kAutoIRTopic)),
  pipeline_(std::move(pipeline)),
  traces_(traces)
{
}

std::size_t TranslatorNode::process_pending()
{
  std::size_t handled = 0;
  while (auto envelope = utterances_.try_pop()) {
    handle(*envelope);
    ++handled;
  }
  return handled;
}

bool TranslatorNode::process_next(std::chrono::milliseconds timeout)
{
  auto envelope = utterances_.pop_for(timeout);
  if (!envelope) {
    return false;
  }
  handle(*envelope);
  return true;
}

void TranslatorNode::handle(const bus::Envelope & envelope)
{
  const auto & msg = std::get<bus::UtteranceMsg>(envelope.payload);
  const double t = to_seconds(envelope.timestamp);
  const auto trace = pipeline_->translate(msg.text);
  record_translation(traces_, msg.request_id, t, trace);
  if (trace.program) {
    autoir_.publish(bus::AutoIRMsg{*trace.program, msg.request_id}, envelope.timestamp);
  }
}

Session::Session(const Stack & stack, sim::Scenario scenario, bool inline_translation)
: stack_(stack),
  sim_(std::move(scenario)),
  translator_(with_standard_topics(bus_), stack.pipeline, traces_),
  utterances_(bus_.make_publisher(bus::kUserInstructionTopic)),
  programs_(bus_.subscribe(bus::kAutoIRTopic)),
  assembler_(bus_),
  store_(stack.registry),
  executor_(stack.rule_base, store_, assembler_),
  inline_translation_(inline_translation)
{
  bus_.set_time_source([this] { return now(); });
  const auto apply = [this](const autoir::ParamPath & path, const autoir::ConfigValue & value) {
    try {
      sim_.set_node_param(path, value);
    } catch (const sim::SimError & e) {
      // Registry entries the simulator does not model have no effect.
      if (e.code() != sim::SimErrorCode::UnknownPath) {
        throw;
      }
    }
  };
  for (const auto & [path, value] : *store_.snapshot()) {
    apply(path, value);
  }
  store_.set_listener(apply);
  sim_.publish_status(bus_);
  states_.push_back(sim_.state());
}

Session::~Session() { store_.set_listener({}); }

TimePoint Session::now() const
{
  return std::chrono::duration_cast<Duration>(std::chrono::duration<double>(sim::kDt)) * tick_.load();
}

double Session::time() const { return to_seconds(now()); }

std::string Session::submit_instruction(std::string_view text)
{
  if (blank(text)) {
    throw HarnessError(HarnessErrorCode::BadInput, "instruction text is empty");
  }
  char id[32];
  std::snprintf(id, sizeof id, "req-%04llu", static_cast<unsigned long long>(next_request_.fetch_add(1)));
  traces_.open(id, std::string(text), time());
  try {
    utterances_.publish(bus::UtteranceMsg{std::string(text), id, wall_now()});
  } catch (const bus::BusError & e) {
    traces_.add(id, Stage::TranslationError, time(), {{"error", e.what()}});
    throw;
  }
  return id;
}

void Session::submit_programs(TimePoint now)
{
  const double t = to_seconds(now);
  for (auto & envelope : programs_.drain()) {
    const auto & msg = std::get<bus::AutoIRMsg>(envelope.payload);
    try {
      const auto id = executor_.submit(msg.program, now);
      tracked_[id] = {msg.request_id, executor::InstructionState::Validating};
      traces_.bind_instruction(msg.request_id, id);
      traces_.add(msg.request_id, Stage::Submitted, t, {{"instruction", id}});
    } catch (const executor::ExecutorError & e) {
      traces_.add(msg.request_id, Stage::Validation, t,
        {{"activation", "NotActivated"}, {"reason", std::string(executor::to_string(e.code()))},
         {"detail", e.what()}});
    }
  }
}

void Session::report_transitions(TimePoint now)
{
  using executor::InstructionState;
  const double t = to_seconds(now);
  for (auto & [id, tracked] : tracked_) {
    if (executor::is_terminal(tracked.last)) {
      continue;
    }
    const auto record = executor_.record(id);
    if (!record || record->state == tracked.last) {
      continue;
    }
    const json rule = record->rule ? json::parse(rules::rule_to_json(*record->rule)) : json(nullptr);
    const json reason = record->reason ? json(*record->reason) : json(nullptr);
    switch (record->state) {
      case InstructionState::Active:
        traces_.add(tracked.request_id, Stage::Validation, t,
          {{"activation", "Activated"}, {"instruction", id}, {"rule", rule}, {"polls", record->polls},
           {"effective_timer", to_seconds(record->effective_timer)},
           {"expires_at", record->expires_at ? json(to_seconds(*record->expires_at)) : json(nullptr)}});
        break;
      case InstructionState::Rejected:
      case InstructionState::Failed:
        traces_.add(tracked.request_id, Stage::Validation, t,
          {{"activation", record->state == InstructionState::Failed ? "Failed" : "NotActivated"},
           {"instruction", id}, {"rule", rule}, {"polls", record->polls}, {"reason", reason}});
        break;
      case InstructionState::Expired:
        traces_.add(tracked.request_id, Stage::Expired, t, {{"instruction", id}, {"reason", reason}});
        break;
      default:
        break;
    }
    tracked.last = record->state;
  }
}

const sim::WorldState & Session::step()
{
  const auto t = now();
  if (inline_translation_) {
    translator_.process_pending();
  }
  submit_programs(t);
  assembler_.pump();
  executor_.tick(t);
  report_transitions(t);
  sim_.step();
  tick_.store(sim_.state().tick);
  sim_.publish_status(bus_);
  states_.push_back(sim_.state());
  return states_.back();
}

json Session::state_frame(std::uint64_t after_seq) const
{
  const auto & state = sim_.state();
  const auto & v = state.vehicle;
  json lights = json::object();
  for (const auto & [id, color] : state.lights) {
    lights[id] = std::string(bus::to_string(color));
  }
  json obstacles = json::array();
  for (const auto & o : state.obstacles) {
    obstacles.push_back(
      {{"id", o.id}, {"kind", std::string(bus::to_string(o.kind))}, {"lane", o.lane}, {"offset", o.offset}});
  }
  json overrides = json::array();
  for (const auto & o : executor_.active_overrides(now())) {
    overrides.push_back({{"instruction", o.instruction_id}, {"path", o.path.str()},
      {"value", autoir::format_value(o.value)}, {"remaining", o.remaining_seconds}});
  }
  json events = json::array();
  for (const auto & e : traces_.since(after_seq)) {
    events.push_back(event_to_json(e));
  }
  return {
    {"type", "state"},
    {"scenario", sim_.scenario().id},
    {"tick", state.tick},
    {"t", state.time()},
    {"vehicle",
     {{"lane", v.lane}, {"occupied_lane", v.occupied_lane}, {"offset", v.offset}, {"speed", v.speed},
      {"target_lane", v.target_lane}, {"maneuver", std::string(sim::to_string(v.maneuver.kind))}}},
    {"lights", std::move(lights)},
    {"obstacles", std::move(obstacles)},
    {"status", status_to_json(sim_.vehicle_status())},
    {"overrides", std::move(overrides)},
    {"trace_events", std::move(events)},
  };
}

}  // namespace flexlane::harness
