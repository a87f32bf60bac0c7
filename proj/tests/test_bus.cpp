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

#include <map>
#include <sstream>
#include <thread>

#include "flexlane/bus/message_bus.hpp"
#include "flexlane/bus/status_assembler.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace flexlane;
using namespace flexlane::bus;
using namespace std::chrono_literals;

namespace
{

Payload speed(double v) { return VelocityStatusMsg{v}; }

double speed_of(const Envelope & e) { return std::get<VelocityStatusMsg>(e.payload).speed; }

template <typename Fn>
BusErrorCode code_of(Fn && fn)
{
  try {
    fn();
  } catch (const BusError & e) {
    return e.code();
  }
  ADD_FAILURE() << "no BusError";
  return BusErrorCode::BadTopicName;
}

}  // namespace

TEST(TopicName, Grammar)
{
  EXPECT_TRUE(is_valid_topic_name("/flex/AutoIR"));
  EXPECT_TRUE(is_valid_topic_name("/a"));
  EXPECT_TRUE(is_valid_topic_name("/sim/vehicle/status/velocity_status"));
  EXPECT_FALSE(is_valid_topic_name(""));
  EXPECT_FALSE(is_valid_topic_name("/"));
  EXPECT_FALSE(is_valid_topic_name("flex/a"));
  EXPECT_FALSE(is_valid_topic_name("/flex/"));
  EXPECT_FALSE(is_valid_topic_name("/flex//a"));
  EXPECT_FALSE(is_valid_topic_name("/flex/a-b"));
  MessageBus bus;
  EXPECT_EQ(code_of([&] { bus.declare_topic("no/slash", Schema::Utterance); }), BusErrorCode::BadTopicName);
}

TEST(Declare, IdempotentAndConflicts)
{
  MessageBus bus;
  const auto first = bus.declare_topic("/t", Schema::VelocityStatus);
  const auto again = bus.declare_topic("/t", Schema::VelocityStatus);
  EXPECT_EQ(first.schema, again.schema);
  EXPECT_EQ(bus.topics().size(), 1u);
  EXPECT_EQ(code_of([&] { bus.declare_topic("/t", Schema::MotionState); }), BusErrorCode::SchemaConflict);
  EXPECT_EQ(bus.topic("/t")->schema, Schema::VelocityStatus);
  EXPECT_FALSE(bus.topic("/missing").has_value());

  declare_standard_topics(bus);
  EXPECT_EQ(bus.topics().size(), 7u);
  EXPECT_EQ(bus.topic(kUserInstructionTopic)->policy.kind, QueuePolicy::Kind::Reliable);
  EXPECT_EQ(bus.topic(kAutoIRTopic)->policy.kind, QueuePolicy::Kind::Reliable);
  EXPECT_EQ(bus.topic(kTrafficLightTopic)->policy.kind, QueuePolicy::Kind::DropOldest);
}

TEST(Publish, Errors)
{
  MessageBus bus;
  bus.declare_topic("/t", Schema::VelocityStatus);
  EXPECT_EQ(code_of([&] { bus.publish("/nope", speed(1)); }), BusErrorCode::UnknownTopic);
  EXPECT_EQ(code_of([&] { bus.subscribe("/nope"); }), BusErrorCode::UnknownTopic);
  EXPECT_EQ(code_of([&] { bus.make_publisher("/nope"); }), BusErrorCode::UnknownTopic);
  auto sub = bus.subscribe("/t");
  EXPECT_EQ(code_of([&] { bus.publish("/t", MotionStateMsg{}); }), BusErrorCode::SchemaMismatch);
  EXPECT_EQ(sub.pending(), 0u);
}

TEST(Publish, OrderedDeliveryAndTimestamps)
{
  MessageBus bus;
  bus.declare_topic("/t", Schema::VelocityStatus);
  TimePoint now = 3s;
  bus.set_time_source([&] { return now; });
  auto a = bus.subscribe("/t");
  auto b = bus.subscribe("/t");
  for (int i = 0; i < 10; ++i) {
    EXPECT_EQ(bus.publish("/t", speed(i)), static_cast<std::uint64_t>(i + 1));
  }
  bus.publish("/t", speed(99), 7s);
  for (auto * sub : {&a, &b}) {
    const auto got = sub->drain();
    ASSERT_EQ(got.size(), 11u);
    for (int i = 0; i < 10; ++i) {
      EXPECT_EQ(speed_of(got[i]), i);
      EXPECT_EQ(got[i].timestamp, 3s);
      EXPECT_EQ(got[i].publisher_id, 0u);
    }
    EXPECT_EQ(got[10].timestamp, 7s);
  }
}

TEST(Queues, DropOldestCountsDrops)
{
  MessageBus bus;
  bus.declare_topic("/t", Schema::VelocityStatus, QueuePolicy::drop_oldest(64));
  auto sub = bus.subscribe("/t");
  for (int i = 0; i < 100; ++i) {
    bus.publish("/t", speed(i));
  }
  EXPECT_EQ(sub.dropped(), 36u);
  const auto got = sub.drain();
  ASSERT_EQ(got.size(), 64u);
  EXPECT_EQ(speed_of(got.front()), 36);
  EXPECT_EQ(speed_of(got.back()), 99);
}

TEST(Queues, ReliableRejectsOverflow)
{
  MessageBus bus;
  bus.declare_topic("/r", Schema::Utterance, QueuePolicy::reliable(4));
  auto sub = bus.subscribe("/r");
  for (int i = 0; i < 4; ++i) {
    bus.publish("/r", UtteranceMsg{"x", std::to_string(i), 0});
  }
  EXPECT_EQ(code_of([&] { bus.publish("/r", UtteranceMsg{"y", "late", 0}); }), BusErrorCode::QueueFull);
  EXPECT_EQ(sub.pending(), 4u);
  EXPECT_EQ(sub.dropped(), 0u);
  ASSERT_TRUE(sub.try_pop().has_value());
  bus.publish("/r", UtteranceMsg{"y", "late", 0});
  const auto rest = sub.drain();
  ASSERT_EQ(rest.size(), 4u);
  EXPECT_EQ(std::get<UtteranceMsg>(rest.back().payload).request_id, "late");
}

TEST(QueuesProperty, DropOldestMatchesOracle)
{
  proptest::Gen gen(0xC1);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t capacity = gen.range(1, 20);
    MessageBus bus;
    bus.declare_topic("/t", Schema::VelocityStatus, QueuePolicy::drop_oldest(capacity));
    auto sub = bus.subscribe("/t");
    proptest::DropOldestOracle oracle{capacity, {}, 0};
    std::vector<double> popped_bus;
    std::vector<double> popped_oracle;  // oracle stores the publish index
    const int ops = static_cast<int>(gen.range(1, 200));
    for (int i = 0; i < ops; ++i) {
      if (gen.chance(0.7)) {
        bus.publish("/t", speed(i));
        oracle.push(i);
      } else {
        if (auto e = sub.try_pop()) {
          popped_bus.push_back(speed_of(*e));
        }
        if (!oracle.items.empty()) {
          popped_oracle.push_back(oracle.items.front());
          oracle.items.pop_front();
        }
      }
    }
    ASSERT_EQ(popped_bus, popped_oracle);
    ASSERT_EQ(sub.dropped(), oracle.dropped);
    ASSERT_EQ(sub.pending(), oracle.items.size());
  }
}

TEST(OrderingProperty, PerPublisherFifoUnderRandomSchedules)
{
  proptest::Gen gen(0xC2);
  for (int trial = 0; trial < 1000; ++trial) {
    MessageBus bus;
    bus.declare_topic("/a", Schema::VelocityStatus, QueuePolicy::drop_oldest(1024));
    bus.declare_topic("/b", Schema::MotionState, QueuePolicy::drop_oldest(1024));
    std::vector<Publisher> pubs;
    const int n_pubs = static_cast<int>(gen.range(1, 5));
    for (int i = 0; i < n_pubs; ++i) {
      pubs.push_back(bus.make_publisher("/a"));
    }
    auto other = bus.make_publisher("/b");
    auto sub_a = bus.subscribe("/a");
    auto sub_b = bus.subscribe("/b");
    std::map<std::uint64_t, std::vector<double>> sent;
    std::size_t sent_b = 0;
    const int steps = static_cast<int>(gen.range(1, 60));
    for (int s = 0; s < steps; ++s) {
      if (gen.chance(0.2)) {
        other.publish(MotionStateMsg{});
        ++sent_b;
        continue;
      }
      auto & p = pubs[gen.below(pubs.size())];
      const double v = gen.uniform(0, 30);
      p.publish(speed(v));
      sent[p.id()].push_back(v);
    }
    std::map<std::uint64_t, std::vector<double>> received;
    std::map<std::uint64_t, std::uint64_t> last_seq;
    for (const auto & e : sub_a.drain()) {
      ASSERT_EQ(e.topic, "/a");
      ASSERT_EQ(e.seq, last_seq[e.publisher_id] + 1) << "gap for publisher " << e.publisher_id;
      last_seq[e.publisher_id] = e.seq;
      received[e.publisher_id].push_back(speed_of(e));
    }
    ASSERT_EQ(received, sent);
    ASSERT_EQ(sub_b.drain().size(), sent_b);
  }
}

TEST(Subscription, DropUnsubscribes)
{
  MessageBus bus;
  bus.declare_topic("/r", Schema::Utterance, QueuePolicy::reliable(1));
  {
    auto sub = bus.subscribe("/r");
    bus.publish("/r", UtteranceMsg{});
  }
  // The full queue belonged to a dropped subscriber and no longer blocks.
  bus.publish("/r", UtteranceMsg{});
  bus.publish("/r", UtteranceMsg{});
  Subscription empty;
  EXPECT_FALSE(empty.valid());
}

TEST(Subscription, PopForWakesOnPublish)
{
  MessageBus bus;
  bus.declare_topic("/t", Schema::VelocityStatus);
  auto sub = bus.subscribe("/t");
  EXPECT_FALSE(sub.pop_for(10ms).has_value());
  std::thread producer([&] {
    std::this_thread::sleep_for(20ms);
    bus.publish("/t", speed(4));
  });
  const auto got = sub.pop_for(5000ms);
  producer.join();
  ASSERT_TRUE(got.has_value());
  EXPECT_EQ(speed_of(*got), 4);
}

TEST(Tap, SeesEveryEnvelopeAsJson)
{
  MessageBus bus;
  declare_standard_topics(bus);
  std::ostringstream out;
  bus.set_tap(json_lines_tap(out));
  bus.publish(kVelocityStatusTopic, speed(2.5), 1500ms);
  bus.publish(kMotionStateTopic, MotionStateMsg{rules::MotionState::Stopped, "TrafficLight"});
  std::istringstream in(out.str());
  std::string line;
  std::vector<nlohmann::json> lines;
  while (std::getline(in, line)) {
    lines.push_back(nlohmann::json::parse(line));
  }
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0]["topic"], std::string(kVelocityStatusTopic));
  EXPECT_EQ(lines[0]["seq"], 1);
  EXPECT_EQ(lines[1]["topic"], std::string(kMotionStateTopic));
}

TEST(StatusAssembler, WaitsForAllTopicsThenMerges)
{
  MessageBus bus;
  declare_standard_topics(bus);
  StatusAssembler assembler(bus);
  EXPECT_FALSE(assembler.current_status().has_value());
  bus.publish(kMotionStateTopic, MotionStateMsg{rules::MotionState::Stopped, "Obstacle"});
  bus.publish(kVelocityStatusTopic, speed(0.0));
  bus.publish(kObjectsTopic, DetectedObjectsMsg{{{"p1", ObjectKind::Pedestrian, 6.0}}});
  EXPECT_FALSE(assembler.current_status().has_value());
  bus.publish(kTrafficLightTopic, TrafficLightRoisMsg{});
  auto status = assembler.current_status();
  ASSERT_TRUE(status.has_value());
  EXPECT_EQ(status->motion_state, rules::MotionState::Stopped);
  EXPECT_EQ(status->stop_reason, "Obstacle");
  EXPECT_EQ(
    status->perceptions,
    (rules::PerceptionSet{rules::Perception::ObstacleDetected, rules::Perception::PedestrianDetected}));

  bus.publish(kVelocityStatusTopic, speed(4.0));
  bus.publish(kObjectsTopic, DetectedObjectsMsg{});
  bus.publish(kTrafficLightTopic, TrafficLightRoisMsg{{{"tl", LightColor::Red, 20.0}}});
  status = assembler.current_status();
  EXPECT_EQ(status->speed, 4.0);
  EXPECT_EQ(status->perceptions, (rules::PerceptionSet{rules::Perception::TrafficLightDetected}));
}
