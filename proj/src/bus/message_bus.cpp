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

#include "flexlane/bus/message_bus.hpp"

#include <algorithm>

namespace flexlane::bus
{

namespace detail
{

struct SubscriberQueue
{
  explicit SubscriberQueue(QueuePolicy p) : policy(p) {}

  QueuePolicy policy;
  mutable std::mutex mutex;
  std::condition_variable ready;
  std::deque<Envelope> items;
  std::uint64_t dropped{0};
  bool closed{false};
};

struct TopicState
{
  TopicDecl decl;
  std::vector<std::weak_ptr<SubscriberQueue>> subscribers;
  std::map<std::uint64_t, std::uint64_t> last_seq;  // publisher id -> seq
};

struct BusState
{
  mutable std::mutex mutex;
  std::map<std::string, TopicState, std::less<>> topics;
  std::uint64_t next_publisher_id{1};
  MessageBus::Tap tap;
  MessageBus::TimeSource time_source;

  TopicState & topic_or_throw(std::string_view name)
  {
    const auto it = topics.find(name);
    if (it == topics.end()) {
      throw BusError(BusErrorCode::UnknownTopic, "unknown topic " + std::string(name));
    }
    return it->second;
  }

  std::uint64_t publish(
    std::string_view topic, std::uint64_t publisher, Payload payload, std::optional<TimePoint> timestamp)
  {
    std::lock_guard lock(mutex);
    auto & state = topic_or_throw(topic);
    if (schema_of(payload) != state.decl.schema) {
      throw BusError(
        BusErrorCode::SchemaMismatch, "topic " + state.decl.name + " carries " +
                                        std::string(to_string(state.decl.schema)) + ", got " +
                                        std::string(to_string(schema_of(payload))));
    }

    std::vector<std::shared_ptr<SubscriberQueue>> live;
    auto & subs = state.subscribers;
    subs.erase(
      std::remove_if(subs.begin(), subs.end(), [&live](const std::weak_ptr<SubscriberQueue> & w) {
        auto q = w.lock();
        if (!q) {
          return true;
        }
        {
          std::lock_guard ql(q->mutex);
          if (q->closed) {
            return true;
          }
        }
        live.push_back(std::move(q));
        return false;
      }),
      subs.end());

    if (state.decl.policy.kind == QueuePolicy::Kind::Reliable) {
      for (const auto & q : live) {
        std::lock_guard ql(q->mutex);
        if (q->items.size() >= q->policy.capacity) {
          throw BusError(BusErrorCode::QueueFull, "subscriber queue full on " + state.decl.name);
        }
      }
    }

    Envelope envelope;
    envelope.topic = state.decl.name;
    envelope.publisher_id = publisher;
    envelope.seq = ++state.last_seq[publisher];
    envelope.timestamp = timestamp ? *timestamp : (time_source ? time_source() : TimePoint{});
    envelope.payload = std::move(payload);

    for (const auto & q : live) {
      {
        std::lock_guard ql(q->mutex);
        if (q->items.size() >= q->policy.capacity) {
          q->items.pop_front();
          ++q->dropped;
        }
        q->items.push_back(envelope);
      }
      q->ready.notify_one();
    }
    if (tap) {
      tap(envelope);
    }
    return envelope.seq;
  }
};

}  // namespace detail

std::string_view to_string(BusErrorCode code)
{
  switch (code) {
    case BusErrorCode::BadTopicName:
      return "BadTopicName";
    case BusErrorCode::SchemaConflict:
      return "SchemaConflict";
    case BusErrorCode::UnknownTopic:
      return "UnknownTopic";
    case BusErrorCode::SchemaMismatch:
      return "SchemaMismatch";
    case BusErrorCode::QueueFull:
      return "QueueFull";
  }
  return "Unknown";
}

bool is_valid_topic_name(std::string_view name)
{
  if (name.empty() || name.front() != '/') {
    return false;
  }
  bool segment_empty = true;
  for (std::size_t i = 1; i < name.size(); ++i) {
    const char c = name[i];
    if (c == '/') {
      if (segment_empty) {
        return false;
      }
      segment_empty = true;
      continue;
    }
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) {
      return false;
    }
    segment_empty = false;
  }
  return !segment_empty;
}

Subscription & Subscription::operator=(Subscription && other) noexcept
{
  if (this != &other) {
    if (queue_) {
      std::lock_guard lock(queue_->mutex);
      queue_->closed = true;
    }
    topic_ = std::move(other.topic_);
    queue_ = std::move(other.queue_);
  }
  return *this;
}

Subscription::~Subscription()
{
  if (queue_) {
    std::lock_guard lock(queue_->mutex);
    queue_->closed = true;
  }
}

std::optional<Envelope> Subscription::try_pop()
{
  if (!queue_) {
    return std::nullopt;
  }
  std::lock_guard lock(queue_->mutex);
  if (queue_->items.empty()) {
    return std::nullopt;
  }
  auto e = std::move(queue_->items.front());
  queue_->items.pop_front();
  return e;
}

std::optional<Envelope> Subscription::pop_for(std::chrono::milliseconds timeout)
{
  if (!queue_) {
    return std::nullopt;
  }
  std::unique_lock lock(queue_->mutex);
  if (!queue_->ready.wait_for(lock, timeout, [this] { return !queue_->items.empty(); })) {
    return std::nullopt;
  }
  auto e = std::move(queue_->items.front());
  queue_->items.pop_front();
  return e;
}

std::vector<Envelope> Subscription::drain()
{
  std::vector<Envelope> out;
  if (!queue_) {
    return out;
  }
  std::lock_guard lock(queue_->mutex);
  out.assign(std::make_move_iterator(queue_->items.begin()), std::make_move_iterator(queue_->items.end()));
  queue_->items.clear();
  return out;
}

std::size_t Subscription::pending() const
{
  if (!queue_) {
    return 0;
  }
  std::lock_guard lock(queue_->mutex);
  return queue_->items.size();
}

std::uint64_t Subscription::dropped() const
{
  if (!queue_) {
    return 0;
  }
  std::lock_guard lock(queue_->mutex);
  return queue_->dropped;
}

std::uint64_t Publisher::publish(Payload payload)
{
  return state_->publish(topic_, id_, std::move(payload), std::nullopt);
}

std::uint64_t Publisher::publish(Payload payload, TimePoint timestamp)
{
  return state_->publish(topic_, id_, std::move(payload), timestamp);
}

MessageBus::MessageBus() : state_(std::make_shared<detail::BusState>()) {}

TopicDecl MessageBus::declare_topic(std::string_view name, Schema schema, QueuePolicy policy)
{
  if (!is_valid_topic_name(name)) {
    throw BusError(BusErrorCode::BadTopicName, "invalid topic name '" + std::string(name) + "'");
  }
  if (policy.capacity == 0) {
    throw BusError(BusErrorCode::BadTopicName, "queue capacity must be positive");
  }
  std::lock_guard lock(state_->mutex);
  const auto it = state_->topics.find(name);
  if (it != state_->topics.end()) {
    if (it->second.decl.schema != schema) {
      throw BusError(
        BusErrorCode::SchemaConflict, "topic " + std::string(name) + " already declared with " +
                                        std::string(to_string(it->second.decl.schema)));
    }
    return it->second.decl;
  }
  detail::TopicState state;
  state.decl = {std::string(name), schema, policy};
  auto decl = state.decl;
  state_->topics.emplace(std::string(name), std::move(state));
  return decl;
}

Subscription MessageBus::subscribe(std::string_view topic)
{
  std::lock_guard lock(state_->mutex);
  auto & state = state_->topic_or_throw(topic);
  auto queue = std::make_shared<detail::SubscriberQueue>(state.decl.policy);
  state.subscribers.push_back(queue);
  return Subscription(state.decl.name, std::move(queue));
}

Publisher MessageBus::make_publisher(std::string_view topic)
{
  std::lock_guard lock(state_->mutex);
  auto & state = state_->topic_or_throw(topic);
  return Publisher(state_, state.decl.name, state_->next_publisher_id++);
}

std::uint64_t MessageBus::publish(std::string_view topic, Payload payload)
{
  return state_->publish(topic, 0, std::move(payload), std::nullopt);
}

std::uint64_t MessageBus::publish(std::string_view topic, Payload payload, TimePoint timestamp)
{
  return state_->publish(topic, 0, std::move(payload), timestamp);
}

std::vector<TopicDecl> MessageBus::topics() const
{
  std::lock_guard lock(state_->mutex);
  std::vector<TopicDecl> out;
  for (const auto & [name, state] : state_->topics) {
    out.push_back(state.decl);
  }
  return out;
}

std::optional<TopicDecl> MessageBus::topic(std::string_view name) const
{
  std::lock_guard lock(state_->mutex);
  const auto it = state_->topics.find(name);
  if (it == state_->topics.end()) {
    return std::nullopt;
  }
  return it->second.decl;
}

void MessageBus::set_tap(Tap tap)
{
  std::lock_guard lock(state_->mutex);
  state_->tap = std::move(tap);
}

void MessageBus::set_time_source(TimeSource source)
{
  std::lock_guard lock(state_->mutex);
  state_->time_source = std::move(source);
}

MessageBus::Tap json_lines_tap(std::ostream & out)
{
  return [&out](const Envelope & e) { out << envelope_to_json(e).dump() << '\n'; };
}

void declare_standard_topics(MessageBus & bus)
{
  bus.declare_topic(kUserInstructionTopic, Schema::Utterance, QueuePolicy::reliable());
  bus.declare_topic(kAutoIRTopic, Schema::AutoIRProgram, QueuePolicy::reliable());
  bus.declare_topic(kMotionStateTopic, Schema::MotionState);
  bus.declare_topic(kVelocityStatusTopic, Schema::VelocityStatus);
  bus.declare_topic(kObjectsTopic, Schema::DetectedObjects);
  bus.declare_topic(kTrafficLightTopic, Schema::TrafficLightRois);
}

}  // namespace flexlane::bus
