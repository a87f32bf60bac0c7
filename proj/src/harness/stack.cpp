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

#include "flexlane/harness/stack.hpp"

#include <cstdlib>

#include "flexlane/harness/eval.hpp"
#include "flexlane/translation/knowledge_base.hpp"
#include "flexlane/translation/prompt.hpp"

#ifndef FLEXLANE_DEFAULT_DATA_DIR
#define FLEXLANE_DEFAULT_DATA_DIR "data"
#endif

namespace flexlane::harness
{

DataPaths resolve_data_dir(const std::optional<std::string> & explicit_dir)
{
  if (explicit_dir && !explicit_dir->empty()) {
    return {*explicit_dir};
  }
  if (const char * env = std::getenv("FLEXLANE_DATA_DIR"); env != nullptr && *env != '\0') {
    return {env};
  }
  return {FLEXLANE_DEFAULT_DATA_DIR};
}

std::shared_ptr<translation::Provider> make_provider(const std::string & name, const DataPaths & data)
{
  if (name == "mock") {
    return std::make_shared<translation::MockProvider>(translation::Lexicon::load(data.lexicon()));
  }
  if (name == "http") {
    return std::make_shared<translation::HttpProvider>(translation::HttpProviderConfig::from_env());
  }
  throw HarnessError(HarnessErrorCode::BadInput, "unknown provider '" + name + "' (expected mock or http)");
}

Stack load_stack(
  const DataPaths & data, std::shared_ptr<translation::Provider> provider,
  const std::optional<std::filesystem::path> & kb_dir)
{
  Stack stack;
  stack.data = data;
  stack.registry = std::make_shared<const autoir::ParamRegistry>(autoir::ParamRegistry::load(data.registry()));
  stack.rule_base = std::make_shared<const rules::RuleBase>(rules::RuleBase::load(data.rules()));
  auto index = std::make_shared<const translation::KBIndex>(
    translation::KBIndex::build(translation::load_knowledge_base(kb_dir.value_or(data.kb()), *stack.registry)));
  stack.pipeline = std::make_shared<const translation::TranslationPipeline>(
    stack.registry, std::move(index), translation::PromptTemplate::load(data.relevance_prompt()),
    translation::PromptTemplate::load(data.generation_prompt()), std::move(provider));
  return stack;
}

}  // namespace flexlane::harness
