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

#include "flexlane/harness/gateway.hpp"

#include <sys/socket.h>

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <list>
#include <mutex>
#include <thread>

#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <json.hpp>

#include "flexlane/harness/eval.hpp"
#include "flexlane/harness/session.hpp"
#include "flexlane/sim/scenario.hpp"

namespace flexlane::harness
{

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using nlohmann::json;

namespace
{

using Request = http::request<http::string_body>;
using Response = http::response<http::string_body>;

constexpr std::size_t kClientQueueCapacity = 256;
constexpr std::chrono::milliseconds kMaxFrameGap{100};
constexpr std::chrono::milliseconds kTranslatorWait{50};
constexpr std::chrono::milliseconds kPumpWait{20};
constexpr std::size_t kBodyLimit = 1 << 20;

/// Outgoing frames of one WebSocket client. A slow reader loses the oldest.
class FrameQueue
{
public:
  void push(std::shared_ptr<const std::string> frame)
  {
    {
      std::lock_guard lock(mutex_);
      if (frames_.size() == kClientQueueCapacity) {
        frames_.pop_front();
      }
      frames_.push_back(std::move(frame));
    }
    cv_.notify_one();
  }

  /// Null when nothing arrived within `timeout`; see closed().
  std::shared_ptr<const std::string> pop_for(std::chrono::milliseconds timeout)
  {
    std::unique_lock lock(mutex_);
    cv_.wait_for(lock, timeout, [this] { return closed_ || !frames_.empty(); });
    if (frames_.empty()) {
      return nullptr;
    }
    auto frame = std::move(frames_.front());
    frames_.pop_front();
    return frame;
  }

  bool closed()
  {
    std::lock_guard lock(mutex_);
    return closed_ && frames_.empty();
  }

  void close()
  {
    {
      std::lock_guard lock(mutex_);
      closed_ = true;
    }
    cv_.notify_all();
  }

private:
  std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<std::shared_ptr<const std::string>> frames_;
  bool closed_{false};
};

Response json_response(const Request & req, http::status status, const json & body)
{
  Response res{status, req.version()};
  res.set(http::field::content_type, "application/json");
  res.keep_alive(req.keep_alive());
  res.body() = body.dump();
  res.prepare_payload();
  return res;
}

Response issues_response(const Request & req, const std::string & field, const std::string & message)
{
  return json_response(req, http::status::bad_request, {{"issues", {{{"field", field}, {"message", message}}}}});
}

Response error_response(const Request & req, http::status status, const std::string & message)
{
  return json_response(req, status, {{"error", message}});
}

std::optional<json> parse_body(const Request & req)
{
  try {
    auto body = json::parse(req.body());
    if (body.is_object()) {
      return body;
    }
  } catch (const json::exception &) {
  }
  return std::nullopt;
}

}  // namespace

struct Gateway::Impl
{
  struct Connection
  {
    std::thread thread;
    std::atomic<bool> done{false};
    std::atomic<int> fd{-1};
  };

  Impl(Stack s, GatewayOptions o) : stack(std::move(s)), options(std::move(o)) {}

  std::shared_ptr<Session> current()
  {
    std::lock_guard lock(session_mutex);
    return session;
  }

  void replace_session(const sim::Scenario & scenario)
  {
    auto fresh = std::make_shared<Session>(stack, scenario, false);
    std::lock_guard lock(session_mutex);
    session = std::move(fresh);
    last_event_seq = 0;
  }

  void broadcast_frame()
  {
    json frame;
    {
      std::lock_guard lock(session_mutex);
      frame = session->state_frame(last_event_seq);
      const auto & events = frame.at("trace_events");
      if (!events.empty()) {
        last_event_seq = events.back().at("seq").get<std::uint64_t>();
      }
    }
    auto text = std::make_shared<const std::string>(frame.dump());
    std::lock_guard lock(clients_mutex);
    for (auto & client : clients) {
      client->push(text);
    }
  }

  void drive()
  {
    using clock = std::chrono::steady_clock;
    const auto tick_period = std::chrono::duration_cast<clock::duration>(
      std::chrono::duration<double>(sim::kDt / options.time_scale));
    auto next_tick = clock::now();
    auto next_frame = next_tick;
    while (running) {
      const auto now = clock::now();
      if (now >= next_tick) {
        {
          std::lock_guard lock(session_mutex);
          session->step();
        }
        broadcast_frame();
        next_tick += tick_period;
        if (next_tick < now - std::chrono::seconds(1)) {
          next_tick = now;
        }
        next_frame = now + kMaxFrameGap;
      } else if (now >= next_frame) {
        broadcast_frame();
        next_frame = now + kMaxFrameGap;
      }
      std::this_thread::sleep_until(std::min(next_tick, next_frame));
    }
  }

  void translate_loop()
  {
    while (running) {
      current()->translator().process_next(kTranslatorWait);
    }
  }

  Response handle(const Request & req)
  {
    const std::string target(req.target());
    if (target == "/api/instruction") {
      if (req.method() != http::verb::post) {
        return error_response(req, http::status::method_not_allowed, "use POST");
      }
      auto body = parse_body(req);
      if (!body) {
        return issues_response(req, "body", "expected a JSON object");
      }
      if (!body->contains("text") || !body->at("text").is_string()) {
        return issues_response(req, "text", "missing or not a string");
      }
      try {
        const auto id = current()->submit_instruction(body->at("text").get<std::string>());
        return json_response(req, http::status::ok, {{"id", id}});
      } catch (const HarnessError & e) {
        return issues_response(req, "text", e.what());
      } catch (const bus::BusError & e) {
        return error_response(req, http::status::service_unavailable, e.what());
      }
    }
    if (target.rfind("/api/trace/", 0) == 0) {
      if (req.method() != http::verb::get) {
        return error_response(req, http::status::method_not_allowed, "use GET");
      }
      const auto id = target.substr(std::string("/api/trace/").size());
      auto trace = current()->traces().get(id);
      if (!trace) {
        return error_response(req, http::status::not_found, "no request '" + id + "'");
      }
      return json_response(req, http::status::ok, *trace);
    }
    if (target == "/api/scenarios") {
      if (req.method() != http::verb::get) {
        return error_response(req, http::status::method_not_allowed, "use GET");
      }
      json list = json::array();
      for (const auto & name : sim::list_scenarios(stack.data.scenarios())) {
        const auto scenario = sim::load_scenario(name, stack.data.scenarios());
        list.push_back({{"id", scenario.id}, {"description", scenario.description},
          {"default_instruction", scenario.default_instruction}});
      }
      return json_response(
        req, http::status::ok, {{"current", current()->simulator().scenario().id}, {"scenarios", std::move(list)}});
    }
    if (target == "/api/scenario") {
      if (req.method() != http::verb::post) {
        return error_response(req, http::status::method_not_allowed, "use POST");
      }
      auto body = parse_body(req);
      if (!body) {
        return issues_response(req, "body", "expected a JSON object");
      }
      if (!body->contains("name") || !body->at("name").is_string()) {
        return issues_response(req, "name", "missing or not a string");
      }
      const auto name = body->at("name").get<std::string>();
      try {
        const auto names = sim::list_scenarios(stack.data.scenarios());
        if (std::find(names.begin(), names.end(), name) == names.end()) {
          return error_response(req, http::status::not_found, "unknown scenario '" + name + "'");
        }
        const auto scenario = sim::load_scenario(name, stack.data.scenarios());
        replace_session(scenario);
        return json_response(req, http::status::ok, {{"scenario", scenario.id}});
      } catch (const sim::SimError & e) {
        return error_response(req, http::status::unprocessable_entity, e.what());
      }
    }
    return error_response(req, http::status::not_found, "no route for '" + target + "'");
  }

  void serve_websocket(tcp::socket socket, const Request & req)
  {
    // Private context per client: a pending read notices the client's close
    // frame while queued frames go out.
    net::io_context client_ioc;
    beast::error_code ec;
    const auto protocol = socket.local_endpoint(ec).protocol();
    if (ec) {
      return;
    }
    websocket::stream<tcp::socket> ws(client_ioc);
    const auto handle = socket.release(ec);
    if (ec) {
      return;
    }
    ws.next_layer().assign(protocol, handle, ec);
    if (ec) {
      return;
    }
    ws.accept(req, ec);
    if (ec) {
      return;
    }
    ws.text(true);
    auto queue = std::make_shared<FrameQueue>();
    {
      std::lock_guard lock(clients_mutex);
      clients.push_back(queue);
      if (!running) {
        queue->close();
      }
    }

    bool finished = false;
    beast::flat_buffer inbound;
    std::function<void()> read_next = [&] {
      ws.async_read(inbound, [&](beast::error_code rec, std::size_t n) {
        if (rec) {
          finished = true;
          queue->close();
          return;
        }
        inbound.consume(n);
        read_next();
      });
    };
    std::shared_ptr<const std::string> in_flight;
    std::function<void()> write_next = [&] {
      if (finished) {
        return;
      }
      in_flight = queue->pop_for(kPumpWait);
      if (in_flight) {
        ws.async_write(net::buffer(*in_flight), [&](beast::error_code wec, std::size_t) {
          if (wec) {
            finished = true;
            queue->close();
            beast::error_code ignored;
            ws.next_layer().close(ignored);
            return;
          }
          write_next();
        });
      } else if (queue->closed()) {
        finished = true;
        ws.async_close(websocket::close_code::going_away, [&](beast::error_code) {
          beast::error_code ignored;
          ws.next_layer().close(ignored);
        });
      } else {
        net::post(client_ioc, write_next);
      }
    };
    read_next();
    write_next();
    client_ioc.run();

    std::lock_guard lock(clients_mutex);
    clients.remove(queue);
  }

  void serve_connection(tcp::socket socket)
  {
    beast::flat_buffer buffer;
    beast::error_code ec;
    while (running) {
      http::request_parser<http::string_body> parser;
      parser.body_limit(kBodyLimit);
      http::read(socket, buffer, parser, ec);
      if (ec) {
        break;
      }
      auto req = parser.release();
      if (websocket::is_upgrade(req)) {
        if (req.target() == "/ws/state") {
          serve_websocket(std::move(socket), req);
          return;
        }
        http::write(socket, error_response(req, http::status::not_found, "no socket at this path"), ec);
        break;
      }
      Response res;
      try {
        res = handle(req);
      } catch (const std::exception & e) {
        res = error_response(req, http::status::internal_server_error, e.what());
      }
      http::write(socket, res, ec);
      if (ec || !res.keep_alive()) {
        break;
      }
    }
    socket.shutdown(tcp::socket::shutdown_both, ec);
  }

  void reap()
  {
    std::lock_guard lock(connections_mutex);
    for (auto it = connections.begin(); it != connections.end();) {
      if ((*it)->done) {
        (*it)->thread.join();
        it = connections.erase(it);
      } else {
        ++it;
      }
    }
  }

  void accept_loop()
  {
    while (running) {
      beast::error_code ec;
      tcp::socket socket(ioc);
      acceptor.accept(socket, ec);
      if (ec) {
        if (!running) {
          break;
        }
        continue;
      }
      reap();
      auto conn = std::make_shared<Connection>();
      conn->fd = socket.native_handle();
      std::lock_guard lock(connections_mutex);
      connections.push_back(conn);
      conn->thread = std::thread([this, conn, s = std::move(socket)]() mutable {
        serve_connection(std::move(s));
        conn->fd = -1;
        conn->done = true;
      });
    }
  }

  Stack stack;
  GatewayOptions options;
  net::io_context ioc;
  tcp::acceptor acceptor{ioc};
  std::atomic<bool> running{false};

  std::mutex session_mutex;
  std::shared_ptr<Session> session;
  std::uint64_t last_event_seq{0};

  std::mutex clients_mutex;
  std::list<std::shared_ptr<FrameQueue>> clients;

  std::mutex connections_mutex;
  std::list<std::shared_ptr<Connection>> connections;

  std::thread accept_thread;
  std::thread driver_thread;
  std::thread translator_thread;
};

Gateway::Gateway(Stack stack, GatewayOptions options)
: impl_(std::make_unique<Impl>(std::move(stack), std::move(options)))
{
  if (!(impl_->options.time_scale > 0.0)) {
    throw HarnessError(HarnessErrorCode::BadInput, "time scale must be positive");
  }
}

Gateway::~Gateway() { stop(); }

void Gateway::start()
{
  auto & d = *impl_;
  if (d.running) {
    return;
  }
  d.replace_session(sim::load_scenario(d.options.scenario, d.stack.data.scenarios()));
  const tcp::endpoint endpoint(net::ip::make_address(d.options.address), d.options.port);
  d.acceptor.open(endpoint.protocol());
  d.acceptor.set_option(net::socket_base::reuse_address(true));
  d.acceptor.bind(endpoint);
  d.acceptor.listen();
  d.running = true;
  d.driver_thread = std::thread([&d] { d.drive(); });
  d.translator_thread = std::thread([&d] { d.translate_loop(); });
  d.accept_thread = std::thread([&d] { d.accept_loop(); });
}

void Gateway::stop()
{
  auto & d = *impl_;
  if (!d.running.exchange(false)) {
    return;
  }
  ::shutdown(d.acceptor.native_handle(), SHUT_RDWR);
  d.accept_thread.join();
  beast::error_code ec;
  d.acceptor.close(ec);
  d.driver_thread.join();
  d.translator_thread.join();
  {
    std::lock_guard lock(d.clients_mutex);
    for (auto & client : d.clients) {
      client->close();
    }
  }
  std::list<std::shared_ptr<Impl::Connection>> connections;
  {
    std::lock_guard lock(d.connections_mutex);
    connections.swap(d.connections);
  }
  for (auto & conn : connections) {
    if (const int fd = conn->fd; fd >= 0) {
      ::shutdown(fd, SHUT_RDWR);
    }
  }
  for (auto & conn : connections) {
    conn->thread.join();
  }
}

std::uint16_t Gateway::port() const
{
  beast::error_code ec;
  const auto endpoint = impl_->acceptor.local_endpoint(ec);
  return ec ? 0 : endpoint.port();
}

}  // namespace flexlane::harness
