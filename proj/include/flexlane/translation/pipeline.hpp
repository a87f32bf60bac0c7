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

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flexlane/autoir/program.hpp"
#include "flexlane/autoir/registry.hpp"
#include "flexlane/common/error.hpp"
#include "flexlane/translation/knowledge_base.hpp"
#include "flexlane/translation/prompt.hpp"
#include "flexlane/translation/provider.hpp"

namespace flexlane::translation
{

inline constexpr std::size_t kRetrievalTopK = 3;

struct RelevanceVerdict
{
  bool relevant{false};
  std::string rationale;
};

enum class TranslationErrorCode { EmptyUtterance, UnparseableResponse, TranslationFailed };

using TranslationError = CodedError<TranslationErrorCode>;

/// One provider answer that failed to parse or validate.
struct GenerationAttempt
{
  std::string response;
  std::string error;
  std::optional<autoir::ValidationReport> report;  // set when parsing succeeded
};

/// Thrown when both generation attempts were invalid.
class TranslationFailed : public TranslationError
{
public:
  TranslationFailed(std::string message, std::vector<GenerationAttempt> attempts)
  : TranslationError(TranslationErrorCode::TranslationFailed, message), attempts_(std::move(attempts))
  {
  }

  const std::vector<GenerationAttempt> & attempts() const { return attempts_; }

private:
  std::vector<GenerationAttempt> attempts_;
};

/// Asks the provider whether `utterance` is a driving instruction and reads
/// the leading YES/NO token of the answer.
RelevanceVerdict classify_relevance(std::string_view utterance, const PromptTemplate & tmpl, Provider & provider);

struct RetrievedRef
{
  std::string entry_id;
  double score{0.0};
};

struct GenerationResult
{
  autoir::AutoIRProgram program;
  std::vector<RetrievedRef> retrieved;
  std::vector<GenerationAttempt> failed_attempts;  // at most one
};

/// Retrieve top-k, prompt, parse, validate; one retry with the failure fed back.
GenerationResult generate_autoir(
  std::string_view instruction, const KBIndex & index, const PromptTemplate & tmpl, Provider & provider,
  const autoir::ParamRegistry & registry, std::size_t top_k = kRetrievalTopK);

/// Pulls the AutoIR text out of a provider answer: strips Markdown code fences
/// and surrounding prose lines that do not look like `key: value`.
std::string extract_autoir_text(std::string_view response);

struct TranslationTrace
{
  std::string utterance;
  std::optional<RelevanceVerdict> verdict;
  std::vector<RetrievedRef> retrieved;
  std::vector<GenerationAttempt> failed_attempts;
  std::optional<autoir::AutoIRProgram> program;
  std::string error;  // non-empty when translation stopped on an error

  bool relevant() const { return verdict && verdict->relevant; }
};

/// Immutable bundle of everything translation needs; safe to share between threads
/// as long as the provider is.
class TranslationPipeline
{
public:
  TranslationPipeline(
    std::shared_ptr<const autoir::ParamRegistry> registry, std::shared_ptr<const KBIndex> index,
    PromptTemplate relevance_template, PromptTemplate generation_template, std::shared_ptr<Provider> provider);

  /// Never throws for provider/translation failures; they land in `error`.
  TranslationTrace translate(std::string_view utterance) const;

  const autoir::ParamRegistry & registry() const { return *registry_; }
  const KBIndex & index() const { return *index_; }
  Provider & provider() const { return *provider_; }
  const PromptTemplate & relevance_template() const { return relevance_template_; }
  const PromptTemplate & generation_template() const { return generation_template_; }

private:
  std::shared_ptr<const autoir::ParamRegistry> registry_;
  std::shared_ptr<const KBIndex> index_;
  PromptTemplate relevance_template_;
  PromptTemplate generation_template_;
  std::shared_ptr<Provider> provider_;
};

}  // namespace flexlane::translation
