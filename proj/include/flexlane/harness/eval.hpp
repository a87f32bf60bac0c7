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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "flexlane/autoir/program.hpp"
#include "flexlane/common/error.hpp"
#include "flexlane/translation/pipeline.hpp"

namespace flexlane::harness
{

enum class HarnessErrorCode { BadDataset, BadInput, InjectionNeverReached };

using HarnessError = CodedError<HarnessErrorCode>;

struct GoldenItem
{
  std::string utterance;
  bool relevant{false};
  std::optional<autoir::AutoIRProgram> expected;
};

/// JSON Lines: {"utterance", "relevant", "expected_program"?}. Throws
/// BadDataset on malformed lines or an empty file.
std::vector<GoldenItem> parse_golden(std::string_view document);
std::vector<GoldenItem> load_golden(const std::filesystem::path & file);

struct ItemResult
{
  std::string utterance;
  bool expected_relevant{false};
  bool judged_relevant{false};
  std::optional<autoir::AutoIRProgram> program;
  bool module_ok{false};
  bool node_ok{false};
  bool param_ok{false};
  bool value_ok{false};
  std::string error;

  bool all_ok() const { return module_ok && node_ok && param_ok && value_ok; }
};

/// Percentages in [0, 100]. Field accuracies are over the instruction pairs;
/// relevance accuracy over the irrelevant utterances.
struct EvalReport
{
  double module_select{0.0};
  double node_select{0.0};
  double param_select{0.0};
  double config_action{0.0};
  double overall{0.0};
  double relevance{0.0};
  double relevant_recall{0.0};  // instruction pairs judged relevant
  std::size_t instruction_pairs{0};
  std::size_t irrelevant{0};
  std::vector<ItemResult> items;
};

EvalReport evaluate(const std::vector<GoldenItem> & items, const translation::TranslationPipeline & pipeline);

nlohmann::json report_to_json(const EvalReport & report, bool with_items = false);

}  // namespace flexlane::harness
