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

#include <chrono>
#include <cmath>
#include <cstdint>

namespace flexlane
{

// All timers run on a monotonic timeline measured from an arbitrary epoch.
using Duration = std::chrono::nanoseconds;
using TimePoint = std::chrono::nanoseconds;

inline Duration seconds_to_duration(double seconds)
{
  return Duration{static_cast<std::int64_t>(std::llround(seconds * 1e9))};
}

inline double to_seconds(Duration d) { return static_cast<double>(d.count()) / 1e9; }

class MonotonicClock
{
public:
  virtual ~MonotonicClock() = default;
  virtual TimePoint now() const = 0;
  /// Blocks (or, for scripted clocks, advances) until `t`.
  virtual void sleep_until(TimePoint t) = 0;
};

class SteadyClock final : public MonotonicClock
{
public:
  SteadyClock() : epoch_(std::chrono::steady_clock::now()) {}

  TimePoint now() const override
  {
    return std::chrono::duration_cast<Duration>(std::chrono::steady_clock::now() - epoch_);
  }

  void sleep_until(TimePoint t) override;

private:
  std::chrono::steady_clock::time_point epoch_;
};

/// Clock that only moves when told to. sleep_until jumps straight to the target.
class ScriptedClock final : public MonotonicClock
{
public:
  explicit ScriptedClock(TimePoint start = TimePoint{0}) : now_(start) {}

  TimePoint now() const override { return now_; }
  void sleep_until(TimePoint t) override
  {
    if (t > now_) {
      now_ = t;
    }
  }
  void advance(Duration d) { now_ += d; }
  void set(TimePoint t) { now_ = t; }

private:
  TimePoint now_;
};

}  // namespace flexlane
