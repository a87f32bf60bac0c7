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
#include <memory>
#include <optional>
#include <string>

#include "flexlane/autoir/registry.hpp"
#include "flexlane/rules/rule_base.hpp"
#include "flexlane/translation/pipeline.hpp"
#include "flexlane/translation/provider.hpp"

namespace flexlane::harness
{

/// Layout of a data directory.
struct DataPaths
{
  std::filesystem::path root;

  std::filesystem::path registry() const { return root / "registry.json"; }
  std::filesystem::path rules() const { return root / "rules.json"; }
  std::filesystem::path kb() const { return root / "kb"; }
  std::filesystem::path kb_manual() const { return root / "kb_manual"; }
  std::filesystem::path lexicon() const { return root / "lexicon.txt"; }
  std::filesystem::path relevance_prompt() const { return root / "prompts" / "relevance_cot.json"; }
  std::filesystem::path generation_prompt() const { return root / "prompts" / "generation.json"; }
  std::filesystem::path golden() const { return root / "golden" / "golden.jsonl"; }
  std::filesystem::path scenarios() const { return root / "scenarios"; }
};

/// Explicit directory, else $FLEXLANE_DATA_DIR, else the build-time default.
DataPaths resolve_data_dir(const std::optional<std::string> & explicit_dir);

/// "mock" or "http". Throws HarnessError(BadInput) for anything else.
std::shared_ptr<translation::Provider> make_provider(const std::string & name, const DataPaths & data);

/// Everything loaded once and shared read-only by sessions.
struct Stack
{
  DataPaths data;
  std::shared_ptr<const autoir::ParamRegistry> registry;
  std::shared_ptr<const rules::RuleBase> rule_base;
  std::shared_ptr<const translation::TranslationPipeline> pipeline;
};

Stack load_stack(
  const DataPaths & data, std::shared_ptr<translation::Provider> provider,
  const std::optional<std::filesystem::path> & kb_dir = std::nullopt);

}  // namespace flexlane::harness
