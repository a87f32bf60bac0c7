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

#include "flexlane/translation/pipeline.hpp"

#include <cctype>

#include "flexlane/autoir/text.hpp"

namespace flexlane::translation
{

namespace
{

std::string_view trim(std::string_view s)
{
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

bool looks_like_field(std::string_view line)
{
  const auto colon = line.find(':');
  if (colon == std::string_view::npos) {
    return false;
  }
  std::string key;
  for (char c : trim(line.substr(0, colon))) {
    key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return key == "moduleselect" || key == "nodeselect" || key == "paramselect" || key == "configaction" ||
         key == "timer";
}

// Re-reads configAction through the registry so "false"/"left"/"3" land on the
// declared type. Unknown paths are left for validation to report.
void coerce_against_registry(autoir::AutoIRProgram & program, const autoir::ParamRegistry & registry)
{
  if (const auto * desc = registry.find(program.path())) {
    try {
      program.config_action = autoir::coerce_config_value(autoir::format_value(program.config_action), *desc);
    } catch (const autoir::CoerceError &) {
      // validate_program reports the mismatch
    }
  }
}

}  // namespace

RelevanceVerdict classify_relevance(std::string_view utterance, const PromptTemplate & tmpl, Provider & provider)
{
  if (trim(utterance).empty()) {
    throw TranslationError(TranslationErrorCode::EmptyUtterance, "utterance is empty");
  }
  const auto response = provider.complete({build_relevance_prompt(tmpl, trim(utterance)), PromptMode::Relevance});
  auto text = trim(response.text);
  std::string word;
  for (char c : text) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      word += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    } else if (!word.empty() || !(std::ispunct(static_cast<unsigned char>(c)) || std::isspace(static_cast<unsigned char>(c)))) {
      break;
    }
  }
  if (word == "YES") {
    return {true, std::string(text)};
  }
  if (word == "NO") {
    return {false, std::string(text)};
  }
  throw TranslationError(
    TranslationErrorCode::UnparseableResponse, "no leading YES/NO in provider answer: '" + std::string(text) + "'");
}

std::string extract_autoir_text(std::string_view response)
{
  auto body = trim(response);
  if (!body.empty() && body.front() == '{') {
    return std::string(body);
  }
  std::string out;
  while (!body.empty()) {
    const auto nl = body.find('\n');
    const auto line = trim(body.substr(0, nl));
    body = nl == std::string_view::npos ? std::string_view{} : body.substr(nl + 1);
    if (looks_like_field(line)) {
      out += line;
      out += '\n';
    }
  }
  return out.empty() ? std::string(trim(response)) : out;
}

GenerationResult generate_autoir(
  std::string_view instruction, const KBIndex & index, const PromptTemplate & tmpl, Provider & provider,
  const autoir::ParamRegistry & registry, std::size_t top_k)
{
  GenerationResult result;
  const auto hits = index.retrieve(instruction, top_k);
  for (const auto & hit : hits) {
    result.retrieved.push_back({hit.entry->entry_id, hit.score});
  }
  const auto prompt = build_generation_prompt(tmpl, hits, instruction);

  std::vector<GenerationAttempt> attempts;
  for (int attempt = 0; attempt < 2; ++attempt) {
    std::string request = prompt;
    if (!attempts.empty()) {
      request += "\n" + std::string(kRetryMarker) + ' ' + attempts.back().error +
                 "\nAnswer again with only the AutoIR program in the key/value form shown above.\n";
    }
    const auto response = provider.complete({request, PromptMode::Generation});
    GenerationAttempt failure{response.text, {}, std::nullopt};
    try {
      auto program = autoir::parse_autoir(extract_autoir_text(response.text));
      coerce_against_registry(program, registry);
      auto report = autoir::validate_program(program, registry);
      if (report.ok) {
        result.program = std::move(program);
        result.failed_attempts = std::move(attempts);
        return result;
      }
      failure.error = report.summary();
      failure.report = std::move(report);
    } catch (const autoir::ParseError & e) {
      failure.error = std::string(autoir::to_string(e.code())) + ": " + e.what();
    }
    attempts.push_back(std::move(failure));
  }
  auto message = "no valid AutoIR after retry: " + attempts.back().error;
  throw TranslationFailed(std::move(message), std::move(attempts));
}

TranslationPipeline::TranslationPipeline(
  std::shared_ptr<const autoir::ParamRegistry> registry, std::shared_ptr<const KBIndex> index,
  PromptTemplate relevance_template, PromptTemplate generation_template, std::shared_ptr<Provider> provider)
: registry_(std::move(registry)),
  index_(std::move(index)),
  relevance_template_(std::move(relevance_template)),
  generation_template_(std::move(generation_template)),
  provider_(std::move(provider))
{
}

TranslationTrace TranslationPipeline::translate(std::string_view utterance) const
{
  TranslationTrace trace;
  trace.utterance = std::string(utterance);
  try {
    trace.verdict = classify_relevance(utterance, relevance_template_, *provider_);
    if (!trace.verdict->relevant) {
      return trace;
    }
    auto generated = generate_autoir(utterance, *index_, generation_template_, *provider_, *registry_);
    trace.retrieved = std::move(generated.retrieved);
    trace.failed_attempts = std::move(generated.failed_attempts);
    trace.program = std::move(generated.program);
  } catch (const TranslationFailed & e) {
    trace.failed_attempts = e.attempts();
    trace.error = e.what();
    // Retrieval happened before the failure; recompute for the trace.
    for (const auto & hit : index_->retrieve(utterance, kRetrievalTopK)) {
      trace.retrieved.push_back({hit.entry->entry_id, hit.score});
    }
  } catch (const Error & e) {
    trace.error = e.what();
  }
  return trace;
}

}  // namespace flexlane::translation
