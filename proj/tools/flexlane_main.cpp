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

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "flexlane/autoir/text.hpp"
#include "flexlane/harness/bench_setup.hpp"
#include "flexlane/harness/eval.hpp"
#include "flexlane/harness/gateway.hpp"
#include "flexlane/harness/run.hpp"
#include "flexlane/harness/stack.hpp"
#include "flexlane/rules/bench.hpp"

namespace
{

using namespace flexlane;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitScenarioFailed = 2;
constexpr int kExitInputError = 3;

struct Common
{
  std::optional<std::string> data_dir;
  std::string provider{"mock"};
};

std::string read_file(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw harness::HarnessError(harness::HarnessErrorCode::BadInput, "cannot read '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string & path, const std::string & text)
{
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw harness::HarnessError(harness::HarnessErrorCode::BadInput, "cannot write '" + path + "'");
  }
  out << text;
}

struct RunArgs
{
  std::string scenario;
  std::optional<std::string> instruction;
  bool default_instruction{false};
  std::optional<std::uint64_t> seed;
  std::string transcript;
  std::optional<std::string> kb;
};

int cmd_run(const Common & common, const RunArgs & args)
{
  const auto data = harness::resolve_data_dir(common.data_dir);
  const auto scenario = sim::load_scenario(args.scenario, data.scenarios());
  auto instruction = args.instruction;
  if (args.default_instruction) {
    instruction = scenario.default_instruction;
  }
  const auto stack = harness::load_stack(data, harness::make_provider(common.provider, data), args.kb);
  const auto t = harness::run_scenario(stack, scenario, instruction, args.seed);

  const auto path = args.transcript.empty() ? scenario.id + ".transcript.jsonl" : args.transcript;
  std::ostringstream transcript;
  harness::write_transcript(transcript, t);
  write_text(path, transcript.str());

  auto & log = path == "-" ? std::cerr : std::cout;
  log << "scenario " << scenario.id << " (" << t.states.size() - 1 << " ticks, " << std::fixed
      << std::setprecision(3) << t.wall_seconds << " s wall)\n";
  if (instruction) {
    log << "instruction \"" << *instruction << "\"";
    if (t.injected_at) {
      log << " at t=" << std::setprecision(1) << *t.injected_at << " s\n";
    } else {
      log << " never injected\n";
    }
  }
  for (const auto & trace : t.traces) {
    for (const auto & e : trace.at("events")) {
      log << "  " << std::setprecision(1) << e.at("t").get<double>() << " s  " << e.at("stage").get<std::string>()
          << "  " << e.at("data").dump() << '\n';
    }
  }
  for (const auto & o : t.outcomes) {
    log << (o.passed ? "PASS " : "FAIL ") << o.id << " (" << o.kind << ")";
    if (o.value) {
      log << " value=" << std::setprecision(3) << *o.value;
    }
    log << ": " << o.detail << '\n';
  }
  log << (t.success() ? "success" : "failure") << '\n';
  return t.success() ? kExitOk : kExitScenarioFailed;
}

struct EvalArgs
{
  std::optional<std::string> dataset;
  std::optional<std::string> kb;
  std::string report{"eval_report.json"};
  bool items{false};
};

int cmd_eval(const Common & common, const EvalArgs & args)
{
  const auto data = harness::resolve_data_dir(common.data_dir);
  const auto items = harness::load_golden(args.dataset.value_or(data.golden().string()));
  const auto stack = harness::load_stack(data, harness::make_provider(common.provider, data), args.kb);
  const auto report = harness::evaluate(items, *stack.pipeline);
  std::cout << std::fixed << std::setprecision(1) << "instruction pairs " << report.instruction_pairs
            << ", irrelevant utterances " << report.irrelevant << '\n'
            << "moduleSelect  " << report.module_select << " %\n"
            << "nodeSelect    " << report.node_select << " %\n"
            << "paramSelect   " << report.param_select << " %\n"
            << "configAction  " << report.config_action << " %\n"
            << "overall       " << report.overall << " %\n"
            << "relevance     " << report.relevance << " %\n"
            << "recall        " << report.relevant_recall << " %\n";
  write_text(args.report, harness::report_to_json(report, args.items).dump(2) + "\n");
  return kExitOk;
}

int cmd_bench(const Common & common, std::size_t rule_count, std::size_t rounds)
{
  if (rounds < rules::kMinBenchRounds) {
    std::cerr << "bench: --rounds must be at least " << rules::kMinBenchRounds << '\n';
    return kExitInputError;
  }
  const auto data = harness::resolve_data_dir(common.data_dir);
  const auto setup = harness::make_bench_setup(rules::RuleBase::load(data.rules()), rule_count);
  const auto stats = rules::bench_rule_matching(setup.rule_base, setup.probes, setup.status, rounds);
  std::cout << json{
                 {"rules", setup.rule_base.size()},
                 {"rounds", stats.rounds},
                 {"hits", stats.hits},
                 {"max_ms", stats.max_ms},
                 {"mean_ms", stats.mean_ms},
                 {"p99_ms", stats.p99_ms},
                 {"budget_ms", rules::kRuleMatchBudgetMs},
                 {"within_budget", stats.max_ms <= rules::kRuleMatchBudgetMs},
                 {"fallback_budget_ms", rules::kRuleMatchFallbackMs},
                 {"within_fallback", stats.max_ms <= rules::kRuleMatchFallbackMs},
               }.dump(2)
            << '\n';
  return kExitOk;
}

int cmd_record_rule(const Common & common, const std::string & scenario_name, const std::string & autoir_file,
  const std::string & out)
{
  const auto data = harness::resolve_data_dir(common.data_dir);
  const auto scenario = sim::load_scenario(scenario_name, data.scenarios());
  const auto program = autoir::parse_autoir(read_file(autoir_file));
  const auto rule = harness::draft_rule(scenario, program);
  const json fragment = {{"rules", json::array({json::parse(rules::rule_to_json(rule))})}};
  write_text(out, fragment.dump(2) + "\n");
  return kExitOk;
}

volatile std::sig_atomic_t g_stop = 0;

void on_signal(int) { g_stop = 1; }

int cmd_serve(const Common & common, harness::GatewayOptions options, double run_for)
{
  const auto data = harness::resolve_data_dir(common.data_dir);
  harness::Gateway gateway(harness::load_stack(data, harness::make_provider(common.provider, data)), options);
  gateway.start();
  std::cout << "listening on http://" << options.address << ':' << gateway.port() << std::endl;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  const auto started = std::chrono::steady_clock::now();
  while (g_stop == 0) {
    if (run_for > 0.0 &&
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count() >= run_for) {
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  gateway.stop();
  return kExitOk;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"flexlane: instructable driving stack harness"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--data-dir", common.data_dir, "Data directory (default: $FLEXLANE_DATA_DIR or the build default)");
  app.add_option("--provider", common.provider, "Completion provider")
    ->check(CLI::IsMember({"mock", "http"}))
    ->capture_default_str();

  RunArgs run_args;
  auto * run = app.add_subcommand("run", "Run a scenario, optionally with an instruction");
  run->add_option("scenario", run_args.scenario, "Scenario name or script path")->required();
  auto * instruction_opt = run->add_option("-i,--instruction", run_args.instruction, "Instruction text");
  run->add_flag("--default-instruction", run_args.default_instruction, "Use the scenario's own instruction")
    ->excludes(instruction_opt);
  run->add_option("--seed", run_args.seed, "Recorded in the transcript");
  run->add_option("-t,--transcript", run_args.transcript, "Transcript path, '-' for stdout");
  run->add_option("--kb", run_args.kb, "Knowledge base directory");

  EvalArgs eval_args;
  auto * eval = app.add_subcommand("eval", "Score translation against the golden dataset");
  eval->add_option("--dataset", eval_args.dataset, "Golden JSON Lines file");
  eval->add_option("--kb", eval_args.kb, "Knowledge base directory");
  eval->add_option("--report", eval_args.report, "Report path, '-' for stdout")->capture_default_str();
  eval->add_flag("--items", eval_args.items, "Include per-item results in the report");

  std::size_t bench_rules = 50;
  std::size_t bench_rounds = 100000;
  auto * bench = app.add_subcommand("bench", "Time rule search and matching");
  bench->add_option("--rules", bench_rules, "Rule base size")->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--rounds", bench_rounds, "Timed rounds")->capture_default_str();

  std::string record_scenario;
  std::string record_autoir;
  std::string record_out = "-";
  auto * record = app.add_subcommand("record-rule", "Draft a rule from the status at a scenario's injection point");
  record->add_option("scenario", record_scenario, "Scenario name or script path")->required();
  record->add_option("autoir", record_autoir, "AutoIR program file")->required();
  record->add_option("-o,--out", record_out, "Output path, '-' for stdout")->capture_default_str();

  harness::GatewayOptions serve_opts;
  double serve_for = 0.0;
  auto * serve = app.add_subcommand("serve", "Serve the live state and instruction API");
  serve->add_option("--port", serve_opts.port, "TCP port, 0 for any")->capture_default_str();
  serve->add_option("--address", serve_opts.address, "Bind address")->capture_default_str();
  serve->add_option("--scenario", serve_opts.scenario, "Initial scenario")->capture_default_str();
  serve->add_option("--time-scale", serve_opts.time_scale, "Sim seconds per wall second")
    ->check(CLI::PositiveNumber)
    ->capture_default_str();
  serve->add_option("--for", serve_for, "Stop after this many seconds (0 runs until interrupted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    app.exit(e);
    return kExitInputError;
  }

  try {
    if (*run) {
      return cmd_run(common, run_args);
    }
    if (*eval) {
      return cmd_eval(common, eval_args);
    }
    if (*bench) {
      return cmd_bench(common, bench_rules, bench_rounds);
    }
    if (*record) {
      return cmd_record_rule(common, record_scenario, record_autoir, record_out);
    }
    if (*serve) {
      return cmd_serve(common, serve_opts, serve_for);
    }
  } catch (const flexlane::Error & e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}
