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

#include "flexlane/harness/eval.hpp"

#include <fstream>
#include <sstream>

#include "flexlane/autoir/text.hpp"

namespace flexlane::harness
{

namespace
{

double percent(std::size_t hits, std::size_t total)
{
  return total == 0 ? 0.0 : 100.0 * static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace

std::vector<GoldenItem> parse_golden(std::string_view document)
{
  std::vector<GoldenItem> items;
  std::istringstream in{std::string(document)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    const auto where = "line " + std::to_string(line_no);
    try {
      const auto j = nlohmann::json::parse(line);
      GoldenItem item;
      item.utterance = j.at("utterance").get<std::string>();
      item.relevant = j.at("relevant").get<bool>();
      if (j.contains("expected_program") && !j.at("expected_program").is_null()) {
        item.expected = autoir::parse_autoir(j.at("expected_program").get<std::string>());
      }
      if (item.relevant != item.expected.has_value()) {
        throw HarnessError(HarnessErrorCode::BadDataset, where + ": relevant items need an expected_program");
      }
      items.push_back(std::move(item));
    } catch (const nlohmann::json::exception & e) {
      throw HarnessError(HarnessErrorCode::BadDataset, where + ": " + e.what());
    } catch (const autoir::ParseError & e) {
      throw HarnessError(HarnessErrorCode::BadDataset, where + ": " + e.what());
    }
  }
  if (items.empty()) {
    throw HarnessError(HarnessErrorCode::BadDataset, "dataset is empty");
  }
  return items;
}

std::vector<GoldenItem> load_golden(const std::filesystem::path & file)
{
  std::ifstream in(file);
  if (!in) {
    throw HarnessError(HarnessErrorCode::BadDataset, "cannot open dataset " + file.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_golden(text.str());
}

EvalReport evaluate(const std::vector<GoldenItem> & items, const translation::TranslationPipeline & pipeline)
{
  EvalReport report;
  std::size_t module_hits = 0;
  std::size_t node_hits = 0;
  std::size_t param_hits = 0;
  std::size_t value_hits = 0;
  std::size_t overall_hits = 0;
  std::size_t rejected = 0;
  std::size_t recalled = 0;
  for (const auto & item : items) {
    const auto trace = pipeline.translate(item.utterance);
    ItemResult r;
    r.utterance = item.utterance;
    r.expected_relevant = item.relevant;
    r.judged_relevant = trace.relevant();
    r.program = trace.program;
    r.error = trace.error;
    if (item.expected) {
      ++report.instruction_pairs;
      recalled += r.judged_relevant ? 1 : 0;
      if (r.program) {
        r.module_ok = r.program->module_select == item.expected->module_select;
        r.node_ok = r.program->node_select == item.expected->node_select;
        r.param_ok = r.program->param_select == item.expected->param_select;
        r.value_ok = r.program->config_action == item.expected->config_action;
      }
      module_hits += r.module_ok;
      node_hits += r.node_ok;
      param_hits += r.param_ok;
      value_hits += r.value_ok;
      overall_hits += r.all_ok();
    } else {
      ++report.irrelevant;
      rejected += r.judged_relevant ? 0 : 1;
    }
    report.items.push_back(std::move(r));
  }
  report.module_select = percent(module_hits, report.instruction_pairs);
  report.node_select = percent(node_hits, report.instruction_pairs);
  report.param_select = percent(param_hits, report.instruction_pairs);
  report.config_action = percent(value_hits, report.instruction_pairs);
  report.overall = percent(overall_hits, report.instruction_pairs);
  report.relevance = percent(rejected, report.irrelevant);
  report.relevant_recall = percent(recalled, report.instruction_pairs);
  return report;
}

nlohmann::json report_to_json(const EvalReport & report, bool with_items)
{
  nlohmann::json j = {
    {"module_select", report.module_select},
    {"node_select", report.node_select},
    {"param_select", report.param_select},
    {"config_action", report.config_action},
    {"overall", report.overall},
    {"relevance", report.relevance},
    {"relevant_recall", report.relevant_recall},
    {"instruction_pairs", report.instruction_pairs},
    {"irrelevant", report.irrelevant},
  };
  if (with_items) {
    auto & arr = j["items"] = nlohmann::json::array();
    for (const auto & r : report.items) {
      arr.push_back({
        {"utterance", r.utterance},
        {"expected_relevant", r.expected_relevant},
        {"judged_relevant", r.judged_relevant},
        {"program", r.program ? nlohmann::json(autoir::serialize_autoir(*r.program)) : nlohmann::json(nullptr)},
        {"fields_ok", {r.module_ok, r.node_ok, r.param_ok, r.value_ok}},
        {"error", r.error},
      });
    }
  }
  return j;
}

}  // namespace flexlane::harness
