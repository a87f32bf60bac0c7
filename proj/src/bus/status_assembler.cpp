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

#include "flexlane/bus/status_assembler.hpp"

namespace flexlane::bus
{

rules::VehicleStatus assemble_status(
  const MotionStateMsg & motion, const VelocityStatusMsg & velocity, const DetectedObjectsMsg & objects,
  const TrafficLightRoisMsg & lights)
{
  rules::VehicleStatus status;
  status.motion_state = motion.state;
  status.stop_reason = motion.stop_reason;
  status.speed = velocity.speed;
  for (const auto & obj : objects.objects) {
    status.perceptions.insert(rules::Perception::ObstacleDetected);
    if (obj.kind == ObjectKind::Pedestrian) {
      status.perceptions.insert(rules::Perception::PedestrianDetected);
    }
  }
  if (!lights.rois.empty()) {
    status.perceptions.insert(rules::Perception::TrafficLightDetected);
  }
  return status;
}

StatusAssembler::StatusAssembler(MessageBus & bus)
: motion_sub_(bus.subscribe(kMotionStateTopic)),
  velocity_sub_(bus.subscribe(kVelocityStatusTopic)),
  objects_sub_(bus.subscribe(kObjectsTopic)),
  lights_sub_(bus.subscribe(kTrafficLightTopic))
{
}

void StatusAssembler::pump()
{
  std::lock_guard lock(mutex_);
  for (auto & e : motion_sub_.drain()) {
    motion_ = std::get<MotionStateMsg>(std::move(e.payload));
  }
  for (auto & e : velocity_sub_.drain()) {
    velocity_ = std::get<VelocityStatusMsg>(std::move(e.payload));
  }
  for (auto & e : objects_sub_.drain()) {
    objects_ = std::get<DetectedObjectsMsg>(std::move(e.payload));
  }
  for (auto & e : lights_sub_.drain()) {
    lights_ = std::get<TrafficLightRoisMsg>(std::move(e.payload));
  }
}

std::optional<rules::VehicleStatus> StatusAssembler::current_status()
{
  pump();
  std::lock_guard lock(mutex_);
  if (!motion_ || !velocity_ || !objects_ || !lights_) {
    return std::nullopt;
  }
  return assemble_status(*motion_, *velocity_, *objects_, *lights_);
}

}  // namespace flexlane::bus
