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

#include <gtest/gtest.h>

#include <sstream>

#include "flexlane/harness/eval.hpp"
#include "flexlane/harness/run.hpp"
#include "flexlane/harness/session.hpp"
#include "flexlane/harness/stack.hpp"
#include "flexlane/sim/predicates.hpp"
#include "support/scripted_provider.hpp"

using namespace flexlane;
using namespace flexlane::harness;
using nlohmann::json;

namespace
{

const DataPaths kData{FLEXLANE_TEST_DATA_DIR};

const Stack & mock_stack()
{
  static const Stack stack = load_stack(kData, make_provider("mock", kData));
  return stack;
}

sim::Scenario scenario(const std::string & id) { return sim::load_scenario(id, kData.scenarios()); }

HarnessErrorCode code_of(const std::function<void()> & fn)
{
  try {
    fn();
  } catch (const HarnessError & e) {
    return e.code();
  }
  ADD_FAILURE() << "no HarnessError";
  return HarnessErrorCode::BadInput;
}

std::vector<std::string> stages(const json & trace)
{
  std::vector<std::string> out;
  for (const auto & e : trace["events"]) {
    out.push_back(e["stage"].get<std::string>());
  }
  return out;
}

}  // namespace

TEST(Stack, ProviderSelection)
{
  EXPECT_NO_THROW(make_provider("mock", kData));
  EXPECT_EQ(code_of([] { make_provider("psychic", kData); }), HarnessErrorCode::BadInput);
  EXPECT_EQ(resolve_data_dir(std::string("/x/y")).root, "/x/y");
}

TEST(Golden, ParseErrors)
{
  EXPECT_EQ(code_of([] { parse_golden(""); }), HarnessErrorCode::BadDataset);
  EXPECT_EQ(code_of([] { parse_golden("\n  \n"); }), HarnessErrorCode::BadDataset);
  EXPECT_EQ(code_of([] { parse_golden("{\"utterance\": 3}"); }), HarnessErrorCode::BadDataset);
  EXPECT_EQ(code_of([] { parse_golden("{\"utterance\": \"x\", \"relevant\": true}"); }), HarnessErrorCode::BadDataset);
  const auto items = parse_golden(
    "{\"utterance\": \"Hi\", \"relevant\": false}\n"
    "{\"utterance\": \"Go left\", \"relevant\": true, \"expected_program\": "
    "\"moduleSelect: planning\\nnodeSelect: mission_planner\\nparamSelect: lane_prefer\\n"
    "configAction: LEFT\\nTimer: 10\\n\"}\n");
  ASSERT_EQ(items.size(), 2u);
  EXPECT_FALSE(items[0].relevant);
  ASSERT_TRUE(items[1].expected.has_value());
  EXPECT_EQ(items[1].expected->param_select, "lane_prefer");
}

TEST(Eval, GoldenSetIsFullyTranslated)
{
  const auto golden = load_golden(kData.golden());
  const auto report = evaluate(golden, *mock_stack().pipeline);
  EXPECT_EQ(report.instruction_pairs + report.irrelevant, golden.size());
  EXPECT_GE(report.instruction_pairs, 40u);
  EXPECT_DOUBLE_EQ(report.module_select, 100.0);
  EXPECT_DOUBLE_EQ(report.node_select, 100.0);
  EXPECT_DOUBLE_EQ(report.param_select, 100.0);
  EXPECT_DOUBLE_EQ(report.config_action, 100.0);
  EXPECT_DOUBLE_EQ(report.overall, 100.0);
  EXPECT_DOUBLE_EQ(report.relevance, 100.0);
  EXPECT_DOUBLE_EQ(report.relevant_recall, 100.0);
}

TEST(Eval, ManualKnowledgeBaseScoresLower)
{
  const auto degraded = load_stack(kData, make_provider("mock", kData), kData.kb_manual());
  const auto report = evaluate(load_golden(kData.golden()), *degraded.pipeline);
  EXPECT_LT(report.overall, 100.0);
  EXPECT_LT(report.module_select, 100.0);
}

TEST(Eval, AccuracyIdentities)
{
  const auto degraded = load_stack(kData, make_provider("mock", kData), kData.kb_manual());
  for (const auto * pipeline : {mock_stack().pipeline.get(), degraded.pipeline.get()}) {
    const auto report = evaluate(load_golden(kData.golden()), *pipeline);
    const auto n = static_cast<double>(report.instruction_pairs);
    std::size_t module = 0;
    std::size_t all = 0;
    std::size_t irrelevant_ok = 0;
    for (const auto & item : report.items) {
      if (item.expected_relevant) {
        module += item.module_ok;
        all += item.all_ok();
        // A wrong node cannot hide behind a right param: all_ok needs every field.
        EXPECT_LE(item.all_ok(), item.module_ok && item.value_ok);
      } else {
        irrelevant_ok += !item.judged_relevant;
      }
    }
    EXPECT_DOUBLE_EQ(report.module_select, 100.0 * static_cast<double>(module) / n);
    EXPECT_DOUBLE_EQ(report.overall, 100.0 * static_cast<double>(all) / n);
    EXPECT_DOUBLE_EQ(
      report.relevance, 100.0 * static_cast<double>(irrelevant_ok) / static_cast<double>(report.irrelevant));
    for (double field : {report.module_select, report.node_select, report.param_select, report.config_action}) {
      EXPECT_LE(report.overall, field);
    }
    const auto j = report_to_json(report, true);
    EXPECT_EQ(j["items"].size(), report.items.size());
  }
}

TEST(Session, IrrelevantUtteranceWritesNothing)
{
  Session session(mock_stack(), scenario("malfunctioning_traffic_light"));
  const auto before = session.store().serialize();
  const auto id = session.submit_instruction("How is the weather in Tokyo?");
  for (int i = 0; i < 50; ++i) {
    session.step();
  }
  EXPECT_TRUE(session.store().change_log().empty());
  EXPECT_EQ(session.store().serialize(), before);
  EXPECT_TRUE(session.executor().records().empty());
  const auto trace = session.traces().get(id);
  ASSERT_TRUE(trace.has_value());
  EXPECT_EQ(stages(*trace), (std::vector<std::string>{"received", "relevance"}));
  EXPECT_FALSE((*trace)["events"][1]["data"]["relevant"].get<bool>());
}

TEST(Session, BlankTextIsRejected)
{
  Session session(mock_stack(), scenario("malfunctioning_traffic_light"));
  EXPECT_EQ(code_of([&] { session.submit_instruction("   \t"); }), HarnessErrorCode::BadInput);
  EXPECT_TRUE(session.traces().all().empty());
}

TEST(Session, InstructionTraceFollowsThePipeline)
{
  Session session(mock_stack(), scenario("malfunctioning_traffic_light"));
  for (int i = 0; i < 60; ++i) {
    session.step();
  }
  ASSERT_EQ(session.simulator().state().vehicle.speed, 0.0);
  const auto id = session.submit_instruction("Do not follow the traffic light.");
  for (int i = 0; i < 200; ++i) {
    session.step();
  }
  const auto trace = *session.traces().get(id);
  EXPECT_EQ(
    stages(trace),
    (std::vector<std::string>{"received", "relevance", "retrieval", "autoir", "submitted", "validation", "expired"}));
  const auto & validation = trace["events"][5]["data"];
  EXPECT_EQ(validation["activation"], "Activated");
  EXPECT_EQ(validation["polls"], 1);
  EXPECT_EQ(trace["instruction"], validation["instruction"]);
  const auto log = session.store().change_log();
  ASSERT_EQ(log.size(), 2u);
  EXPECT_EQ(log[0].new_value, autoir::ConfigValue{false});
  EXPECT_EQ(log[1].cause, "restore");
  EXPECT_EQ(session.store().get(sim::use_flag_path()), autoir::ConfigValue{true});

  const auto frame = session.state_frame(0);
  EXPECT_EQ(frame["type"], "state");
  EXPECT_EQ(frame["tick"], 260);
  EXPECT_EQ(frame["trace_events"].size(), trace["events"].size());
  EXPECT_TRUE(session.state_frame(session.traces().last_seq())["trace_events"].empty());
}

TEST(Session, TranslationFailureIsTraced)
{
  auto provider = std::make_shared<proptest::ScriptedProvider>(
    std::vector<std::string>{"Relevant: yes", "not a program", "still not a program"});
  const auto stack = load_stack(kData, provider);
  Session session(stack, scenario("malfunctioning_traffic_light"));
  const auto id = session.submit_instruction("Do not follow the traffic light.");
  session.step();
  const auto trace = *session.traces().get(id);
  const auto got = stages(trace);
  ASSERT_FALSE(got.empty());
  EXPECT_EQ(got.back(), "translation_error");
  EXPECT_TRUE(session.executor().records().empty());
}

TEST(Run, DefaultInstructionsMeetEveryPredicate)
{
  for (const auto * id : sim::kShippedScenarios) {
    const auto s = scenario(id);
    const auto baseline = run_scenario(mock_stack(), s, std::nullopt);
    EXPECT_FALSE(baseline.success()) << id;
    EXPECT_FALSE(baseline.injected_at.has_value());
    const auto instructed = run_scenario(mock_stack(), s, s.default_instruction, 7);
    EXPECT_TRUE(instructed.success()) << id;
    ASSERT_TRUE(instructed.injected_at.has_value()) << id;
    EXPECT_EQ(instructed.states.size(), static_cast<std::size_t>(s.horizon_ticks() + 1));
    EXPECT_EQ(instructed.records.size(), 1u);
  }
}

TEST(Run, TranscriptReevaluatesIdentically)
{
  for (const auto * id : sim::kShippedScenarios) {
    const auto s = scenario(id);
    const auto original = run_scenario(mock_stack(), s, s.default_instruction, 11);
    std::stringstream buffer;
    write_transcript(buffer, original);
    const auto back = read_transcript(buffer);
    EXPECT_EQ(back.scenario.id, s.id);
    EXPECT_EQ(back.instruction, s.default_instruction);
    EXPECT_EQ(back.seed, 11u);
    EXPECT_EQ(back.injected_at, original.injected_at);
    ASSERT_EQ(back.states.size(), original.states.size());
    EXPECT_EQ(back.states, original.states);
    EXPECT_EQ(back.outcomes, original.outcomes);
    EXPECT_EQ(reevaluate(back), original.outcomes) << id;
    EXPECT_EQ(back.traces.size(), original.traces.size());
  }
  std::istringstream headless("{\"type\": \"tick\"}\n");
  EXPECT_EQ(code_of([&] { read_transcript(headless); }), HarnessErrorCode::BadInput);
}

TEST(Run, DeterministicAcrossRuns)
{
  const auto s = scenario("cone_opposite_lane");
  const auto a = run_scenario(mock_stack(), s, s.default_instruction);
  const auto b = run_scenario(mock_stack(), s, s.default_instruction);
  EXPECT_EQ(a.states, b.states);
  EXPECT_EQ(a.outcomes, b.outcomes);
  EXPECT_EQ(a.changes, b.changes);
}

TEST(DraftRule, FromTheInjectionPoint)
{
  autoir::AutoIRProgram p;
  p.module_select = "perception";
  p.node_select = "traffic_light_classifier_node";
  p.param_select = "use_flag";
  p.config_action = false;
  const auto rule = draft_rule(scenario("malfunctioning_traffic_light"), p);
  EXPECT_EQ(rule.search_index, p.path());
  EXPECT_EQ(rule.conditions.motion_state, rules::MotionCondition::Stopped);
  EXPECT_EQ(rule.conditions.speed_min, 0.0);
  EXPECT_EQ(rule.conditions.speed_max, kDraftSpeedBand);
  EXPECT_EQ(rule.conditions.required, (rules::PerceptionSet{rules::Perception::TrafficLightDetected}));
  EXPECT_EQ(draft_rule(scenario("malfunctioning_traffic_light"), p), rule);

  auto never = scenario("malfunctioning_traffic_light");
  never.injection = {sim::Injection::Kind::AtTime, never.horizon + 10.0};
  EXPECT_EQ(code_of([&] { draft_rule(never, p); }), HarnessErrorCode::InjectionNeverReached);
}
