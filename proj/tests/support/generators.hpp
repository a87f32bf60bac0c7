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

#include <cctype>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "flexlane/autoir/program.hpp"
#include "flexlane/autoir/registry.hpp"
#include "flexlane/rules/rule_base.hpp"
#include "flexlane/rules/vehicle_status.hpp"

namespace flexlane::proptest
{

/// Seeded source for the hand-rolled generators below. Every property test
/// names its seed so a failure reproduces exactly.
class Gen
{
public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t next() { return rng_(); }

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  std::int64_t range(std::int64_t lo, std::int64_t hi)
  {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  template <typename T>
  const T & pick(const std::vector<T> & items)
  {
    return items[below(items.size())];
  }

  std::string identifier(std::size_t max_len = 10)
  {
    static constexpr char head[] = "abcdefghijklmnopqrstuvwxyz";
    static constexpr char tail[] = "abcdefghijklmnopqrstuvwxyz0123456789_";
    std::string out(1, head[below(26)]);
    const auto len = below(max_len);
    for (std::size_t i = 0; i < len; ++i) {
      out += tail[below(sizeof tail - 1)];
    }
    return out;
  }

  /// Numbers with short and long decimal expansions, negatives and zero.
  double number()
  {
    switch (below(4)) {
      case 0: return static_cast<double>(range(-1000, 1000));
      case 1: return static_cast<double>(range(-100000, 100000)) / 100.0;
      case 2: return uniform(-1e6, 1e6);
      default: return uniform(0.0, 1.0) * std::pow(10.0, static_cast<double>(range(-8, 8)));
    }
  }

  autoir::ConfigValue config_value()
  {
    switch (below(3)) {
      case 0: return chance(0.5);
      case 1: return number();
      default: {
        std::string token = identifier(8);
        for (auto & c : token) {
          c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        }
        return autoir::EnumToken{token};
      }
    }
  }

  double timer() { return static_cast<double>(range(1, 6000)) / 10.0; }

  autoir::AutoIRProgram program()
  {
    autoir::AutoIRProgram p;
    p.module_select = identifier();
    p.node_select = identifier();
    p.param_select = identifier();
    p.config_action = config_value();
    p.timer_seconds = timer();
    return p;
  }

  rules::PerceptionSet perceptions()
  {
    return rules::PerceptionSet::from_raw(static_cast<std::uint8_t>(below(1u << rules::kPerceptionCount)));
  }

  rules::VehicleStatus status()
  {
    rules::VehicleStatus s;
    s.motion_state = chance(0.5) ? rules::MotionState::Stopped : rules::MotionState::Driving;
    s.speed = s.motion_state == rules::MotionState::Stopped ? 0.0 : static_cast<double>(range(1, 250)) / 10.0;
    s.perceptions = perceptions();
    return s;
  }

  rules::ConditionSet conditions()
  {
    rules::ConditionSet c;
    c.motion_state = static_cast<rules::MotionCondition>(below(3));
    const double a = static_cast<double>(range(0, 200)) / 10.0;
    const double b = static_cast<double>(range(0, 200)) / 10.0;
    c.speed_min = std::min(a, b);
    c.speed_max = chance(0.2) ? rules::kUnboundedSpeed : std::max(a, b);
    for (std::size_t i = 0; i < rules::kPerceptionCount; ++i) {
      const auto tag = static_cast<rules::Perception>(i);
      switch (below(3)) {
        case 0: c.required.insert(tag); break;
        case 1: c.forbidden.insert(tag); break;
        default: break;
      }
    }
    return c;
  }

  /// Paths drawn from small alphabets so probes collide with the base often.
  autoir::ParamPath small_path()
  {
    static const std::vector<std::string> modules{"perception", "planning", "control"};
    static const std::vector<std::string> nodes{"n0", "n1", "n2", "n3"};
    static const std::vector<std::string> params{"p0", "p1", "p2", "p3", "p4"};
    return {pick(modules), pick(nodes), pick(params)};
  }

  rules::Rule rule(const autoir::ParamPath & path)
  {
    rules::Rule r;
    r.search_index = path;
    r.conditions = conditions();
    if (chance(0.3)) {
      r.timer_cap_seconds = static_cast<double>(range(1, 300)) / 10.0;
    }
    return r;
  }

  rules::RuleBase rule_base(std::size_t max_rules)
  {
    rules::RuleBase base;
    const auto n = below(max_rules + 1);
    for (std::size_t i = 0; i < n; ++i) {
      const auto path = small_path();
      if (base.find(path.module, path.node, path.param) == nullptr) {
        base.add(rule(path));
      }
    }
    return base;
  }

private:
  std::mt19937_64 rng_;
};

}  // namespace flexlane::proptest
