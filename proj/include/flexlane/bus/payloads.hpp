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
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "flexlane/autoir/program.hpp"
#include "flexlane/common/clock.hpp"
#include "flexlane/rules/vehicle_status.hpp"

namespace flexlane::bus
{

// Topic names of the instruction path and the simulated status feeds.
inline constexpr std::string_view kUserInstructionTopic = "/flex/user_instruction";
inline constexpr std::string_view kAutoIRTopic = "/flex/AutoIR";
inline constexpr std::string_view kMotionStateTopic = "/sim/api/motion/state";
inline constexpr std::string_view kVelocityStatusTopic = "/sim/vehicle/status/velocity_status";
inline constexpr std::string_view kObjectsTopic = "/sim/perception/object_recognition/detection/objects";
inline constexpr std::string_view kTrafficLightTopic =
  "/sim/perception/traffic_light_recognition/traffic_light/detection/rois";

struct UtteranceMsg
{
  std::string text;
  std::string request_id;
  double wall_time{0.0};  // seconds since the Unix epoch

  bool operator==(const UtteranceMsg &) const = default;
};

struct AutoIRMsg
{
  autoir::AutoIRProgram program;
  std::string request_id;

  bool operator==(const AutoIRMsg &) const = default;
};

struct MotionStateMsg
{
  rules::MotionState state{rules::MotionState::Driving};
  std::optional<std::string> stop_reason;

  bool operator==(const MotionStateMsg &) const = default;
};

struct VelocityStatusMsg
{
  double speed{0.0};  // m/s

  bool operator==(const VelocityStatusMsg &) const = default;
};

enum class ObjectKind { Cone, Pedestrian };

std::string_view to_string(ObjectKind kind);
std::optional<ObjectKind> object_kind_from_string(std::string_view name);

struct DetectedObject
{
  std::string id;
  ObjectKind kind{ObjectKind::Cone};
  double distance{0.0};  // m ahead of the vehicle front

  bool operator==(const DetectedObject &) const = default;
};

struct DetectedObjectsMsg
{
  std::vector<DetectedObject> objects;

  bool operator==(const DetectedObjectsMsg &) const = default;
};

enum class LightColor { Red, Green };

std::string_view to_string(LightColor color);
std::optional<LightColor> light_color_from_string(std::string_view name);

struct TrafficLightRoi
{
  std::string light_id;
  LightColor color{LightColor::Red};
  double distance{0.0};  // m to the stop line

  bool operator==(const TrafficLightRoi &) const = default;
};

struct TrafficLightRoisMsg
{
  std::vector<TrafficLightRoi> rois;

  bool operator==(const TrafficLightRoisMsg &) const = default;
};

using Payload =
  std::variant<UtteranceMsg, AutoIRMsg, MotionStateMsg, VelocityStatusMsg, DetectedObjectsMsg, TrafficLightRoisMsg>;

/// Schema identifiers; the enumerator order mirrors the Payload alternatives.
enum class Schema { Utterance, AutoIRProgram, MotionState, VelocityStatus, DetectedObjects, TrafficLightRois };

std::string_view to_string(Schema schema);

inline Schema schema_of(const Payload & payload) { return static_cast<Schema>(payload.index()); }

struct Envelope
{
  std::string topic;
  std::uint64_t publisher_id{0};
  std::uint64_t seq{0};
  TimePoint timestamp{};
  Payload payload;
};

nlohmann::json payload_to_json(const Payload & payload);
nlohmann::json envelope_to_json(const Envelope & envelope);

}  // namespace flexlane::bus
