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

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "flexlane/translation/pipeline.hpp"

namespace flexlane::harness
{

/// Pipeline stages in the order a request moves through them.
enum class Stage { Received, Relevance, Retrieval, AutoIR, TranslationError, Submitted, Validation, Expired };

std::string_view to_string(Stage stage);

struct TraceEvent
{
  std::uint64_t seq{0};
  std::string request_id;
  Stage stage{Stage::Received};
  double t{0.0};  // sim seconds
  nlohmann::json data;
};

nlohmann::json event_to_json(const TraceEvent & event);

/// Per-request event history shared by the translator, the session and the
/// gateway. Internally synchronized.
class TraceLog
{
public:
  void open(const std::string & request_id, const std::string & utterance, double t);
  void add(const std::string & request_id, Stage stage, double t, nlohmann::json data);
  void bind_instruction(const std::string & request_id, const std::string & instruction_id);

  /// {"id", "utterance", "instruction", "events": [...]}
  std::optional<nlohmann::json> get(const std::string & request_id) const;
  std::vector<nlohmann::json> all() const;
  std::vector<TraceEvent> since(std::uint64_t after_seq) const;
  std::uint64_t last_seq() const;

private:
  struct Request
  {
    std::string utterance;
    std::optional<std::string> instruction;
    std::vector<std::size_t> events;
  };

  nlohmann::json render(const std::string & id, const Request & request) const;

  mutable std::mutex mutex_;
  std::map<std::string, Request> requests_;
  std::vector<std::string> order_;
  std::vector<TraceEvent> events_;
};

/// Adds the relevance, retrieval and AutoIR (or error) stages of one translation.
void record_translation(TraceLog & log, const std::string & request_id, double t,
  const translation::TranslationTrace & trace);

}  // namespace flexlane::harness
