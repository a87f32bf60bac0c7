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

#include "flexlane/bus/payloads.hpp"

#include "flexlane/autoir/text.hpp"

namespace flexlane::bus
{

std::string_view to_string(ObjectKind kind) { return kind == ObjectKind::Cone ? "cone" : "pedestrian"; }

std::string_view to_string(LightColor color) { return color == LightColor::Red ? "Red" : "Green"; }

std::optional<ObjectKind> object_kind_from_string(std::string_view name)
{
  if (name == "cone") {
    return ObjectKind::Cone;
  }
  if (name == "pedestrian") {
    return ObjectKind::Pedestrian;
  }
  return std::nullopt;
}

std::optional<LightColor> light_color_from_string(std::string_view name)
{
  if (name == "Red") {
    return LightColor::Red;
  }
  if (name == "Green") {
    return LightColor::Green;
  }
  return std::nullopt;
}

std::string_view to_string(Schema schema)
{
  switch (schema) {
    case Schema::Utterance:
      return "flexlane/Utterance";
    case Schema::AutoIRProgram:
      return "flexlane/AutoIRProgram";
    case Schema::MotionState:
      return "flexlane/MotionState";
    case Schema::VelocityStatus:
      return "flexlane/VelocityStatus";
    case Schema::DetectedObjects:
      return "flexlane/DetectedObjects";
    case Schema::TrafficLightRois:
      return "flexlane/TrafficLightRois";
  }
  return "flexlane/Unknown";
}

nlohmann::json payload_to_json(const Payload & payload)
{
  using nlohmann::json;
  struct Visitor
  {
    json operator()(const UtteranceMsg & m) const
    {
      return {{"text", m.text}, {"request_id", m.request_id}, {"wall_time", m.wall_time}};
    }
    json operator()(const AutoIRMsg & m) const
    {
      return {{"autoir", autoir::serialize_autoir(m.program)}, {"request_id", m.request_id}};
    }
    json operator()(const MotionStateMsg & m) const
    {
      json j = {{"state", std::string(rules::to_string(m.state))}};
      j["stop_reason"] = m.stop_reason ? json(*m.stop_reason) : json(nullptr);
      return j;
    }
    json operator()(const VelocityStatusMsg & m) const { return {{"speed", m.speed}}; }
    json operator()(const DetectedObjectsMsg & m) const
    {
      json list = json::array();
      for (const auto & o : m.objects) {
        list.push_back({{"id", o.id}, {"kind", std::string(to_string(o.kind))}, {"distance", o.distance}});
      }
      return {{"objects", list}};
    }
    json operator()(const TrafficLightRoisMsg & m) const
    {
      json list = json::array();
      for (const auto & r : m.rois) {
        list.push_back(
          {{"light_id", r.light_id}, {"color", std::string(to_string(r.color))}, {"distance", r.distance}});
      }
      return {{"rois", list}};
    }
  };
  return std::visit(Visitor{}, payload);
}

nlohmann::json envelope_to_json(const Envelope & envelope)
{
  return {
    {"topic", envelope.topic},
    {"schema", std::string(to_string(schema_of(envelope.payload)))},
    {"publisher", envelope.publisher_id},
    {"seq", envelope.seq},
    {"t", to_seconds(envelope.timestamp)},
    {"payload", payload_to_json(envelope.payload)}};
}

}  // namespace flexlane::bus
