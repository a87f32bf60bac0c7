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

#include "flexlane/translation/prompt.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "flexlane/autoir/text.hpp"

namespace flexlane::translation
{

PromptTemplate PromptTemplate::from_json(std::string_view document)
{
  const auto j = nlohmann::json::parse(document);
  PromptTemplate t;
  t.name = j.value("name", "");
  t.task_description = j.at("task_description").get<std::string>();
  t.output_constraints = j.at("output_constraints").get<std::string>();
  if (j.contains("qa_examples")) {
    for (const auto & qa : j.at("qa_examples")) {
      t.qa_examples.push_back({qa.at("question").get<std::string>(), qa.at("answer").get<std::string>()});
    }
  }
  return t;
}

PromptTemplate PromptTemplate::load(const std::filesystem::path & file)
{
  std::ifstream in(file);
  if (!in) {
    throw std::runtime_error("cannot open prompt template " + file.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

std::string build_relevance_prompt(const PromptTemplate & tmpl, std::string_view utterance)
{
  std::ostringstream out;
  out << tmpl.task_description << "\n\n";
  if (!tmpl.qa_examples.empty()) {
    out << "Examples:\n";
    for (const auto & qa : tmpl.qa_examples) {
      out << "Q: " << qa.question << "\nA: " << qa.answer << "\n";
    }
    out << "\n";
  }
  out << tmpl.output_constraints << "\n\n" << kUserInputMarker << ' ' << utterance << '\n';
  return out.str();
}

std::string build_generation_prompt(
  const PromptTemplate & tmpl, const std::vector<KBIndex::Hit> & retrieved, std::string_view instruction)
{
  std::ostringstream out;
  out << tmpl.task_description << "\n\n" << kReferenceHeader << '\n';
  if (retrieved.empty()) {
    out << kNoReferenceMarker << '\n';
  }
  std::size_t n = 0;
  for (const auto & hit : retrieved) {
    out << '[' << ++n << "]\n";
    if (hit.entry->program) {
      out << "Scenario: " << hit.entry->scenario_text << '\n'
          << kProgramMarker << '\n'
          << autoir::serialize_autoir(*hit.entry->program);
    } else {
      out << kFreeTextMarker << ' ' << hit.entry->scenario_text << '\n';
    }
  }
  out << '\n' << tmpl.output_constraints << "\n\n" << kInstructionMarker << ' ' << instruction << '\n';
  return out.str();
}

}  // namespace flexlane::translation
