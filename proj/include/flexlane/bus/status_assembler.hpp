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

#include <mutex>
#include <optional>

#include "flexlane/bus/message_bus.hpp"
#include "flexlane/rules/validation.hpp"
#include "flexlane/rules/vehicle_status.hpp"

namespace flexlane::bus
{

/// Rebuilds a VehicleStatus from the four status topics.
rules::VehicleStatus assemble_status(
  const MotionStateMsg & motion, const VelocityStatusMsg & velocity, const DetectedObjectsMsg & objects,
  const TrafficLightRoisMsg & lights);

/// Status source fed by bus subscriptions. Keeps the latest message per
/// topic; yields nothing until every topic has delivered at least once.
class StatusAssembler final : public rules::StatusSource
{
public:
  explicit StatusAssembler(MessageBus & bus);

  /// Drains pending envelopes into the latest-value cache.
  void pump();

  std::optional<rules::VehicleStatus> current_status() override;

private:
  Subscription motion_sub_;
  Subscription velocity_sub_;
  Subscription objects_sub_;
  Subscription lights_sub_;

  std::mutex mutex_;
  std::optional<MotionStateMsg> motion_;
  std::optional<VelocityStatusMsg> velocity_;
  std::optional<DetectedObjectsMsg> objects_;
  std::optional<TrafficLightRoisMsg> lights_;
};

}  // namespace flexlane::bus
