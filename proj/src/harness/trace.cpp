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

#include "flexlane/harness/trace.hpp"

#include "flexlane/autoir/text.hpp"

namespace flexlane::harness
{

using nlohmann::json;

std::string_view to_string(Stage stage)
{
  switch (stage) {
    case Stage::Received: return "received";
    case Stage::Relevance: return "relevance";
    case Stage::Retrieval: return "retrieval";
    case Stage::AutoIR: return "autoir";
    case Stage::TranslationError: return "translation_error";
    case Stage::Submitted: return "submitted";
    case Stage::Validation: return "validation";
    case Stage::Expired: return "expired";
  }
  return "unknown";
}

json event_to_json(const TraceEvent & event)
{
  return {
    {"seq", event.seq},
    {"request", event.request_id},
    {"stage", std::string(to_string(event.stage))},
    {"stage_index", static_cast<int>(event.stage)},
    {"t", event.t},
    {"data", event.data},
  };
}

void TraceLog::open(const std::string & request_id, const std::string & utterance, double t)
{
  {
    std::lock_guard lock(mutex_);
    requests_[request_id].utterance = utterance;
    order_.push_back(request_id);
  }
  add(request_id, Stage::Received, t, {{"text", utterance}});
}

void TraceLog::add(const std::string & request_id, Stage stage, double t, json data)
{
  std::lock_guard lock(mutex_);
  TraceEvent event{events_.size() + 1, request_id, stage, t, std::move(data)};
  requests_[request_id].events.push_back(events_.size());
  events_.push_back(std::move(event));
}

void TraceLog::bind_instruction(const std::string & request_id, const std::string & instruction_id)
{
  std::lock_guard lock(mutex_);
  requests_[request_id].instruction = instruction_id;
}

json TraceLog::render(const std::string & id, const Request & request) const
{
  json events = json::array();
  for (auto index : request.events) {
    events.push_back(event_to_json(events_[index]));
  }
  return {
    {"id", id},
    {"utterance", request.utterance},
    {"instruction", request.instruction ? json(*request.instruction) : json(nullptr)},
    {"events", std::move(events)},
  };
}

std::optional<json> TraceLog::get(const std::string & request_id) const
{
  std::lock_guard lock(mutex_);
  auto it = requests_.find(request_id);
  if (it == requests_.end()) {
    return std::nullopt;
  }
  return render(it->first, it->second);
}

std::vector<json> TraceLog::all() const
{
  std::lock_guard lock(mutex_);
  std::vector<json> out;
  for (const auto & id : order_) {
    out.push_back(render(id, requests_.at(id)));
  }
  return out;
}

std::vector<TraceEvent> TraceLog::since(std::uint64_t after_seq) const
{
  std::lock_guard lock(mutex_);
  std::vector<TraceEvent> out;
  for (std::size_t i = static_cast<std::size_t>(std::min<std::uint64_t>(after_seq, events_.size()));
       i < events_.size(); ++i) {
    out.push_back(events_[i]);
  }
  return out;
}

std::uint64_t TraceLog::last_seq() const
{
  std::lock_guard lock(mutex_);
  return events_.size();
}

void record_translation(TraceLog & log, const std::string & request_id, double t,
  const translation::TranslationTrace & trace)
{
  if (trace.verdict) {
    log.add(request_id, Stage::Relevance, t,
      {{"relevant", trace.verdict->relevant}, {"rationale", trace.verdict->rationale}});
  }
  if (!trace.retrieved.empty()) {
    json hits = json::array();
    for (const auto & ref : trace.retrieved) {
      hits.push_back({{"entry", ref.entry_id}, {"score", ref.score}});
    }
    log.add(request_id, Stage::Retrieval, t, {{"hits", std::move(hits)}});
  }
  if (trace.program) {
    log.add(request_id, Stage::AutoIR, t,
      {{"text", autoir::serialize_autoir(*trace.program)}, {"retries", trace.failed_attempts.size()}});
  }
  if (!trace.error.empty()) {
    json attempts = json::array();
    for (const auto & a : trace.failed_attempts) {
      attempts.push_back({{"response", a.response}, {"error", a.error}});
    }
    log.add(request_id, Stage::TranslationError, t, {{"error", trace.error}, {"attempts", std::move(attempts)}});
  }
}

}  // namespace flexlane::harness
