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

#include "flexlane/autoir/program.hpp"
#include "flexlane/autoir/registry.hpp"
#include "flexlane/autoir/text.hpp"
#include "flexlane/harness/eval.hpp"
#include "support/generators.hpp"

#ifndef FLEXLANE_TEST_DATA_DIR
#error "FLEXLANE_TEST_DATA_DIR must be defined"
#endif

using namespace flexlane;
using namespace flexlane::autoir;

namespace
{

const std::string kData = FLEXLANE_TEST_DATA_DIR;

const ParamRegistry & shipped_registry()
{
  static const auto registry = ParamRegistry::load(kData + "/registry.json");
  return registry;
}

ParseErrorCode parse_error_code(std::string_view text)
{
  try {
    parse_autoir(text);
  } catch (const ParseError & e) {
    return e.code();
  }
  ADD_FAILURE() << "no ParseError for: " << text;
  return ParseErrorCode::SyntaxError;
}

}  // namespace

TEST(AutoIRParse, TrafficLightProgram)
{
  const auto p = parse_autoir(
    "moduleSelect: perception\nnodeSelect: traffic_light_classifier_node\nparamSelect: use_flag\n"
    "configAction: FALSE\n");
  EXPECT_EQ(p.module_select, "perception");
  EXPECT_EQ(p.node_select, "traffic_light_classifier_node");
  EXPECT_EQ(p.param_select, "use_flag");
  EXPECT_EQ(p.config_action, ConfigValue{false});
  EXPECT_EQ(p.timer_seconds, 10.0);
}

TEST(AutoIRParse, KeysAreCaseInsensitiveValuesKeepCase)
{
  const auto p = parse_autoir("MODULESELECT: planning\nnodeselect: mission_planner\nParamSelect: lane_prefer\n"
                              "configaction: LEFT\ntimer: 30\n");
  EXPECT_EQ(p.config_action, ConfigValue{EnumToken{"LEFT"}});
  EXPECT_EQ(p.timer_seconds, 30.0);
}

TEST(AutoIRParse, ObjectForm)
{
  const auto p = parse_autoir(R"({"moduleSelect": "planning", "nodeSelect": "behavior_velocity_planner_node",
    "paramSelect": "stop_margin", "configAction": 3.0, "Timer": 12})");
  EXPECT_EQ(p.config_action, ConfigValue{3.0});
  EXPECT_EQ(p.timer_seconds, 12.0);
}

TEST(AutoIRParse, Errors)
{
  EXPECT_EQ(parse_error_code(""), ParseErrorCode::SyntaxError);
  EXPECT_EQ(parse_error_code("   \n "), ParseErrorCode::SyntaxError);
  EXPECT_EQ(parse_error_code("just some prose"), ParseErrorCode::SyntaxError);
  EXPECT_EQ(parse_error_code("moduleSelect: a\nnodeSelect: b\nconfigAction: TRUE\n"), ParseErrorCode::MissingField);
  EXPECT_EQ(parse_error_code("moduleSelect: a\nnodeSelect: b\nparamSelect: c\nconfigAction: TRUE\nTimer: 0\n"),
    ParseErrorCode::BadValue);
  EXPECT_EQ(parse_error_code("moduleSelect: a\nnodeSelect: b\nparamSelect: c\nconfigAction: TRUE\nTimer: -3\n"),
    ParseErrorCode::BadValue);
  EXPECT_EQ(parse_error_code("moduleSelect: a\nnodeSelect: b\nparamSelect: c\nconfigAction: TRUE\nTimer: soon\n"),
    ParseErrorCode::BadValue);
  EXPECT_EQ(parse_error_code("moduleSelect: A\nnodeSelect: b\nparamSelect: c\nconfigAction: TRUE\n"),
    ParseErrorCode::BadValue);
}

TEST(AutoIRSerialize, CanonicalForm)
{
  AutoIRProgram p{"planning", "mission_planner", "lane_prefer", EnumToken{"LEFT"}, 10.0};
  EXPECT_EQ(serialize_autoir(p),
    "moduleSelect: planning\nnodeSelect: mission_planner\nparamSelect: lane_prefer\nconfigAction: LEFT\nTimer: 10\n");
  p.config_action = true;
  EXPECT_NE(serialize_autoir(p).find("configAction: TRUE\n"), std::string::npos);
  p.config_action = 0.1;
  EXPECT_NE(serialize_autoir(p).find("configAction: 0.1\n"), std::string::npos);
}

TEST(AutoIRProperty, RoundTripAndIdempotence)
{
  proptest::Gen gen(0xA1);
  for (int i = 0; i < 2000; ++i) {
    const auto p = gen.program();
    const auto text = serialize_autoir(p);
    const auto back = parse_autoir(text);
    ASSERT_EQ(back, p) << text;
    ASSERT_EQ(serialize_autoir(back), text);
  }
}

TEST(AutoIRProperty, TimerChangesOnlyTheTimerLine)
{
  proptest::Gen gen(0xA2);
  for (int i = 0; i < 500; ++i) {
    auto a = gen.program();
    auto b = a;
    do {
      b.timer_seconds = gen.timer();
    } while (b.timer_seconds == a.timer_seconds);
    const auto ta = serialize_autoir(a);
    const auto tb = serialize_autoir(b);
    const auto cut_a = ta.find("Timer:");
    const auto cut_b = tb.find("Timer:");
    ASSERT_EQ(ta.substr(0, cut_a), tb.substr(0, cut_b));
    ASSERT_NE(ta.substr(cut_a), tb.substr(cut_b));
  }
}

TEST(AutoIRProperty, NumberFormattingRoundTrips)
{
  proptest::Gen gen(0xA3);
  for (int i = 0; i < 5000; ++i) {
    const double v = gen.number();
    const auto text = format_number(v);
    const auto back = parse_decimal(text);
    ASSERT_TRUE(back.has_value()) << text;
    ASSERT_EQ(*back, v) << text;
  }
  EXPECT_EQ(format_number(3.0), "3");
  EXPECT_EQ(format_number(0.77), "0.77");
}

TEST(AutoIRGolden, CanonicalRoundTripOverDataset)
{
  const auto items = harness::load_golden(kData + "/golden/golden.jsonl");
  std::size_t programs = 0;
  for (const auto & item : items) {
    if (!item.expected) {
      continue;
    }
    ++programs;
    const auto text = serialize_autoir(*item.expected);
    EXPECT_EQ(serialize_autoir(parse_autoir(text)), canonicalize_autoir(text));
    EXPECT_TRUE(validate_program(*item.expected, shipped_registry()).ok) << text;
  }
  EXPECT_GE(programs, 40u);
}

TEST(Registry, ShippedContents)
{
  const auto & reg = shipped_registry();
  EXPECT_EQ(reg.size(), 5u);
  const auto * lane = reg.find({"planning", "mission_planner", "lane_prefer"});
  ASSERT_NE(lane, nullptr);
  EXPECT_EQ(lane->value_type, ValueType::Enum);
  EXPECT_EQ(lane->tokens, (std::vector<std::string>{"LEFT", "RIGHT", "NONE"}));
  EXPECT_EQ(lane->default_value, ConfigValue{EnumToken{"NONE"}});
  const auto * margin = reg.find({"planning", "behavior_velocity_planner_node", "stop_margin"});
  ASSERT_NE(margin, nullptr);
  EXPECT_EQ(margin->default_value, ConfigValue{1.0});
  EXPECT_EQ(margin->min, 0.0);
  EXPECT_EQ(margin->max, 10.0);
  for (const auto & path : reg.paths()) {
    const auto * d = reg.find(path);
    EXPECT_TRUE(d->accepts(d->default_value)) << path.str();
  }
}

TEST(Registry, RejectsDuplicatesAndBadDefaults)
{
  ParamRegistry reg;
  ParamDescriptor d;
  d.value_type = ValueType::Boolean;
  d.default_value = true;
  reg.add({"m", "n", "p"}, d);
  EXPECT_THROW(reg.add({"m", "n", "p"}, d), RegistryError);
  ParamDescriptor bad;
  bad.value_type = ValueType::Number;
  bad.min = 0.0;
  bad.max = 1.0;
  bad.default_value = 2.0;
  EXPECT_THROW(reg.add({"m", "n", "q"}, bad), RegistryError);
  EXPECT_THROW(ParamRegistry::from_json("{not json"), RegistryError);
}

TEST(Registry, JsonRoundTrip)
{
  const auto & reg = shipped_registry();
  const auto again = ParamRegistry::from_json(reg.to_json());
  EXPECT_EQ(again.to_json(), reg.to_json());
  EXPECT_EQ(again.paths(), reg.paths());
}

TEST(Validate, Examples)
{
  const auto & reg = shipped_registry();
  AutoIRProgram ped{"planning", "behavior_velocity_planner_node", "stop_margin", 3.0, 10.0};
  EXPECT_TRUE(validate_program(ped, reg).ok);

  auto typo = ped;
  typo.module_select = "perceptoin";
  const auto r1 = validate_program(typo, reg);
  ASSERT_EQ(r1.issues.size(), 1u);
  EXPECT_EQ(r1.issues[0].code, IssueCode::UnknownModule);

  auto negative = ped;
  negative.config_action = -1.0;
  const auto r2 = validate_program(negative, reg);
  ASSERT_EQ(r2.issues.size(), 1u);
  EXPECT_EQ(r2.issues[0].code, IssueCode::OutOfRange);

  auto several = ped;
  several.config_action = true;
  several.timer_seconds = 0.0;
  const auto r3 = validate_program(several, reg);
  ASSERT_EQ(r3.issues.size(), 2u);
  EXPECT_EQ(r3.issues[0].code, IssueCode::TypeMismatch);
  EXPECT_EQ(r3.issues[1].code, IssueCode::BadTimer);
  EXPECT_FALSE(r3.ok);

  auto node = ped;
  node.node_select = "nope";
  EXPECT_EQ(validate_program(node, reg).issues.at(0).code, IssueCode::UnknownNode);
  auto param = ped;
  param.param_select = "nope";
  EXPECT_EQ(validate_program(param, reg).issues.at(0).code, IssueCode::UnknownParam);
}

TEST(ValidateProperty, PureAndOkIffNoIssues)
{
  proptest::Gen gen(0xA4);
  const auto & reg = shipped_registry();
  const auto paths = reg.paths();
  for (int i = 0; i < 2000; ++i) {
    auto p = gen.program();
    if (gen.chance(0.7)) {
      const auto & path = gen.pick(paths);
      p.module_select = path.module;
      p.node_select = path.node;
      p.param_select = path.param;
    }
    const auto a = validate_program(p, reg);
    const auto b = validate_program(p, reg);
    ASSERT_EQ(a, b);
    ASSERT_EQ(a.ok, a.issues.empty());
    if (a.ok) {
      ASSERT_NE(reg.find(p.path()), nullptr);
    }
  }
}

TEST(Coerce, Examples)
{
  const auto & reg = shipped_registry();
  const auto * flag = reg.find({"perception", "traffic_light_classifier_node", "use_flag"});
  const auto * lane = reg.find({"planning", "mission_planner", "lane_prefer"});
  const auto * margin = reg.find({"planning", "behavior_velocity_planner_node", "stop_margin"});
  EXPECT_EQ(coerce_config_value("FALSE", *flag), ConfigValue{false});
  EXPECT_EQ(coerce_config_value("true", *flag), ConfigValue{true});
  EXPECT_EQ(coerce_config_value("LEFT", *lane), ConfigValue{EnumToken{"LEFT"}});
  EXPECT_EQ(coerce_config_value("3.0", *margin), ConfigValue{3.0});
  EXPECT_THROW(coerce_config_value("fast", *margin), CoerceError);
  EXPECT_THROW(coerce_config_value("UP", *lane), CoerceError);
  EXPECT_THROW(coerce_config_value("1", *flag), CoerceError);
}
