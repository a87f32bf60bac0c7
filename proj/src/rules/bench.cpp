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

#include "flexlane/rules/bench.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <vector>

namespace flexlane::rules
{

LatencyStats bench_rule_matching(
  const RuleBase & rule_base, std::span<const autoir::AutoIRProgram> probes, const VehicleStatus & status,
  std::size_t rounds)
{
  if (rounds < kMinBenchRounds) {
    throw std::invalid_argument("bench_rule_matching: need at least 1000 rounds");
  }
  if (probes.empty()) {
    throw std::invalid_argument("bench_rule_matching: no probes");
  }
  using clock = std::chrono::steady_clock;
  std::vector<clock::duration> samples(rounds);
  std::size_t hits = 0;
  std::size_t matched = 0;

  for (std::size_t i = 0; i < rounds; ++i) {
    const auto & probe = probes[i % probes.size()];
    const auto start = clock::now();
    const Rule * rule = search_rule(rule_base, probe);
    const bool ok = rule != nullptr && match_conditions(*rule, status);
    const auto stop = clock::now();
    samples[i] = stop - start;
    hits += rule != nullptr ? 1 : 0;
    matched += ok ? 1 : 0;
  }
  // Keeps the match result observable so the loop body is not elided.
  volatile std::size_t sink = matched;
  (void)sink;

  auto to_ms = [](clock::duration d) { return std::chrono::duration<double, std::milli>(d).count(); };
  LatencyStats stats;
  stats.rounds = rounds;
  stats.hits = hits;
  double total = 0.0;
  for (const auto & s : samples) {
    total += to_ms(s);
  }
  stats.mean_ms = total / static_cast<double>(rounds);
  const auto p99_rank = (rounds * 99 + 99) / 100 - 1;
  std::nth_element(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(p99_rank), samples.end());
  stats.p99_ms = to_ms(samples[p99_rank]);
  stats.max_ms = to_ms(*std::max_element(samples.begin(), samples.end()));
  return stats;
}

}  // namespace flexlane::rules
