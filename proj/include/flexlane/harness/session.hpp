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

#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "flexlane/bus/message_bus.hpp"
#include "flexlane/bus/status_assembler.hpp"
#include "flexlane/executor/executor.hpp"
#include "flexlane/executor/param_store.hpp"
#include "flexlane/harness/stack.hpp"
#include "flexlane/harness/trace.hpp"
#include "flexlane/sim/simulator.hpp"

namespace flexlane::harness
{

/// Consumes utterances from the instruction topic, translates them and
/// publishes the resulting programs on the AutoIR topic.
class TranslatorNode
{
public:
  TranslatorNode(
    bus::MessageBus & bus, std::shared_ptr<const translation::TranslationPipeline> pipeline, TraceLog & traces);

  /// Translates everything queued. Returns the number of utterances handled.
  std::size_t process_pending();
  /// Waits up to `timeout` for one utterance. False when none arrived.
  bool process_next(std::chrono::milliseconds timeout);

private:
  void handle(const bus::Envelope & envelope);

  bus::Subscription utterances_;
  bus::Publisher autoir_;
  std::shared_ptr<const translation::TranslationPipeline> pipeline_;
  TraceLog & traces_;
};

/// One live scenario with the full instruction path attached: bus, simulator,
/// status assembly, translation, validation and timed overrides.
///
/// step() and the accessors belong to a single driver thread. The
/// instruction entry point and the trace log may be used from any thread.
class Session
{
public:
  /// With `inline_translation` false the caller must run translator() elsewhere.
  Session(const Stack & stack, sim::Scenario scenario, bool inline_translation = true);
  ~Session();

  Session(const Session &) = delete;
  Session & operator=(const Session &) = delete;

  /// The only way instructions enter the system. Publishes the text on the
  /// instruction topic and returns its request id. Blank text is BadInput.
  std::string submit_instruction(std::string_view text);

  /// One tick: translate (inline mode), submit new programs, poll validation,
  /// apply/expire overrides, advance the simulator and publish status.
  const sim::WorldState & step();

  double time() const;
  const sim::Simulator & simulator() const { return sim_; }
  const executor::Executor & executor() const { return executor_; }
  const executor::ParamStore & store() const { return store_; }
  const TraceLog & traces() const { return traces_; }
  TranslatorNode & translator() { return translator_; }
  bus::MessageBus & bus() { return bus_; }
  const std::vector<sim::WorldState> & states() const { return states_; }

  /// Per-tick gateway frame with the trace events after `after_seq`.
  nlohmann::json state_frame(std::uint64_t after_seq) const;

private:
  struct Tracked
  {
    std::string request_id;
    executor::InstructionState last{executor::InstructionState::Validating};
  };

  TimePoint now() const;
  void submit_programs(TimePoint now);
  void report_transitions(TimePoint now);

  Stack stack_;
  bus::MessageBus bus_;
  sim::Simulator sim_;
  TraceLog traces_;
  TranslatorNode translator_;
  bus::Publisher utterances_;
  bus::Subscription programs_;
  bus::StatusAssembler assembler_;
  executor::ParamStore store_;
  executor::Executor executor_;
  bool inline_translation_;
  std::atomic<std::int64_t> tick_{0};
  std::atomic<std::uint64_t> next_request_{1};
  std::map<std::string, Tracked> tracked_;
  std::vector<sim::WorldState> states_;
};

}  // namespace flexlane::harness
