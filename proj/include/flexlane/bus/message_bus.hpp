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
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "flexlane/bus/payloads.hpp"
#include "flexlane/common/error.hpp"

namespace flexlane::bus
{

enum class BusErrorCode { BadTopicName, SchemaConflict, UnknownTopic, SchemaMismatch, QueueFull };

std::string_view to_string(BusErrorCode code);

using BusError = CodedError<BusErrorCode>;

struct QueuePolicy
{
  enum class Kind { DropOldest, Reliable };

  Kind kind{Kind::DropOldest};
  std::size_t capacity{64};

  /// Sensor streams: overflow evicts the oldest envelope and counts a drop.
  static QueuePolicy drop_oldest(std::size_t capacity = 64) { return {Kind::DropOldest, capacity}; }
  /// Instruction streams: overflow fails the publish, nothing is enqueued.
  static QueuePolicy reliable(std::size_t capacity = 16) { return {Kind::Reliable, capacity}; }

  bool operator==(const QueuePolicy &) const = default;
};

struct TopicDecl
{
  std::string name;
  Schema schema{Schema::Utterance};
  QueuePolicy policy;
};

/// `(/[A-Za-z0-9_]+)+`
bool is_valid_topic_name(std::string_view name);

namespace detail
{
struct SubscriberQueue;
struct BusState;
}  // namespace detail

/// Receiving end of one subscription. Move-only; dropping it unsubscribes.
class Subscription
{
public:
  Subscription() = default;
  Subscription(Subscription &&) noexcept = default;
  Subscription & operator=(Subscription &&) noexcept;
  Subscription(const Subscription &) = delete;
  Subscription & operator=(const Subscription &) = delete;
  ~Subscription();

  std::optional<Envelope> try_pop();
  std::optional<Envelope> pop_for(std::chrono::milliseconds timeout);
  std::vector<Envelope> drain();

  std::size_t pending() const;
  std::uint64_t dropped() const;
  const std::string & topic() const { return topic_; }
  bool valid() const { return queue_ != nullptr; }

private:
  friend class MessageBus;
  Subscription(std::string topic, std::shared_ptr<detail::SubscriberQueue> queue)
  : topic_(std::move(topic)), queue_(std::move(queue))
  {
  }

  std::string topic_;
  std::shared_ptr<detail::SubscriberQueue> queue_;
};

class MessageBus;

/// Publishing end bound to one topic, with its own gapless sequence.
class Publisher
{
public:
  std::uint64_t publish(Payload payload);
  std::uint64_t publish(Payload payload, TimePoint timestamp);
  std::uint64_t id() const { return id_; }
  const std::string & topic() const { return topic_; }

private:
  friend class MessageBus;
  Publisher(std::shared_ptr<detail::BusState> state, std::string topic, std::uint64_t id)
  : state_(std::move(state)), topic_(std::move(topic)), id_(id)
  {
  }

  std::shared_ptr<detail::BusState> state_;
  std::string topic_;
  std::uint64_t id_;
};

/// In-process publish/subscribe fabric with schema-typed topics. Internally
/// synchronized; publish never blocks on subscribers.
class MessageBus
{
public:
  using Tap = std::function<void(const Envelope &)>;
  using TimeSource = std::function<TimePoint()>;

  MessageBus();

  /// Idempotent for an identical schema; SchemaConflict otherwise.
  TopicDecl declare_topic(std::string_view name, Schema schema, QueuePolicy policy = QueuePolicy::drop_oldest());

  Subscription subscribe(std::string_view topic);
  Publisher make_publisher(std::string_view topic);

  /// Publishes as the shared anonymous publisher (id 0).
  std::uint64_t publish(std::string_view topic, Payload payload);
  std::uint64_t publish(std::string_view topic, Payload payload, TimePoint timestamp);

  std::vector<TopicDecl> topics() const;
  std::optional<TopicDecl> topic(std::string_view name) const;

  /// Called synchronously for every published envelope.
  void set_tap(Tap tap);
  /// Stamps envelopes published without an explicit timestamp.
  void set_time_source(TimeSource source);

private:
  std::shared_ptr<detail::BusState> state_;
};

/// Tap that writes one JSON object per envelope to `out`.
MessageBus::Tap json_lines_tap(std::ostream & out);

/// Declares the two instruction topics (reliable) and the four status topics.
void declare_standard_topics(MessageBus & bus);

}  // namespace flexlane::bus
