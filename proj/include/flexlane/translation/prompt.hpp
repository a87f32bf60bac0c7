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
#include <string>
#include <string_view>
#include <vector>

#include "flexlane/translation/knowledge_base.hpp"

namespace flexlane::translation
{

struct QAExample
{
  std::string question;
  std::string answer;
};

struct PromptTemplate
{
  std::string name;
  std::string task_description;
  std::vector<QAExample> qa_examples;
  std::string output_constraints;

  static PromptTemplate from_json(std::string_view document);
  static PromptTemplate load(const std::filesystem::path & file);
};

// Section markers shared by prompt builders and the offline provider.
inline constexpr std::string_view kUserInputMarker = "User input:";
inline constexpr std::string_view kInstructionMarker = "User instruction:";
inline constexpr std::string_view kReferenceHeader = "Reference knowledge:";
inline constexpr std::string_view kNoReferenceMarker = "No reference found.";
inline constexpr std::string_view kProgramMarker = "AutoIR:";
inline constexpr std::string_view kFreeTextMarker = "Reference:";
inline constexpr std::string_view kRetryMarker = "Previous answer rejected:";

/// Task description, Q&A examples, output constraints, then the user text last.
std::string build_relevance_prompt(const PromptTemplate & tmpl, std::string_view utterance);

/// Task description, retrieved references (scenario + canonical AutoIR for
/// curated entries, raw text for manual chunks), output constraints, then the
/// instruction last. An empty retrieval yields an explicit no-reference marker.
std::string build_generation_prompt(
  const PromptTemplate & tmpl, const std::vector<KBIndex::Hit> & retrieved, std::string_view instruction);

}  // namespace flexlane::translation
