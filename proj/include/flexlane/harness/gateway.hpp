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

#include <cstdint>
#include <memory>
#include <string>

#include "flexlane/harness/stack.hpp"

namespace flexlane::harness
{

struct GatewayOptions
{
  std::string address{"127.0.0.1"};
  std::uint16_t port{8080};  // 0 picks a free port
  std::string scenario{"malfunctioning_traffic_light"};
  double time_scale{1.0};  // sim seconds per wall second
};

/// HTTP + WebSocket front end over one live Session.
///
///   GET  /ws/state          state frames, one per tick and at least 10 per second
///   POST /api/instruction   {"text"} -> {"id"}
///   GET  /api/trace/{id}    pipeline trace of one request
///   GET  /api/scenarios     shipped scenarios and the current one
///   POST /api/scenario      {"name"} restarts the session on that scenario
///
/// Instructions only enter through Session::submit_instruction.
class Gateway
{
public:
  Gateway(Stack stack, GatewayOptions options);
  ~Gateway();

  Gateway(const Gateway &) = delete;
  Gateway & operator=(const Gateway &) = delete;

  /// Binds and starts the worker threads. Throws on bind failure.
  void start();
  void stop();
  std::uint16_t port() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace flexlane::harness
