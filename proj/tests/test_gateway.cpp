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

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <chrono>
#include <thread>

#include <json.hpp>

#include "flexlane/harness/gateway.hpp"
#include "flexlane/harness/stack.hpp"

using namespace flexlane;
using namespace flexlane::harness;
using namespace std::chrono_literals;
using nlohmann::json;

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

namespace
{

const DataPaths kData{FLEXLANE_TEST_DATA_DIR};

struct Reply
{
  unsigned status{0};
  json body;
};

Reply request(std::uint16_t port, http::verb verb, const std::string & target, const std::string & body = {})
{
  asio::io_context io;
  tcp::socket socket(io);
  socket.connect({asio::ip::make_address("127.0.0.1"), port});
  http::request<http::string_body> req{verb, target, 11};
  req.set(http::field::host, "127.0.0.1");
  req.set(http::field::content_type, "application/json");
  req.body() = body;
  req.prepare_payload();
  http::write(socket, req);
  beast::flat_buffer buffer;
  http::response<http::string_body> res;
  http::read(socket, buffer, res);
  beast::error_code ec;
  socket.shutdown(tcp::socket::shutdown_both, ec);
  Reply reply{res.result_int(), json()};
  if (!res.body().empty()) {
    reply.body = json::parse(res.body());
  }
  return reply;
}

class WsClient
{
public:
  explicit WsClient(std::uint16_t port) : ws_(io_)
  {
    ws_.next_layer().connect({asio::ip::make_address("127.0.0.1"), port});
    ws_.handshake("127.0.0.1", "/ws/state");
  }

  ~WsClient()
  {
    beast::error_code ec;
    ws_.close(websocket::close_code::normal, ec);
  }

  json next()
  {
    beast::flat_buffer buffer;
    ws_.read(buffer);
    return json::parse(beast::buffers_to_string(buffer.data()));
  }

private:
  asio::io_context io_;
  websocket::stream<tcp::socket> ws_;
};

class GatewayTest : public ::testing::Test
{
protected:
  void SetUp() override
  {
    GatewayOptions options;
    options.port = 0;
    options.time_scale = 10.0;
    gateway_ = std::make_unique<Gateway>(load_stack(kData, make_provider("mock", kData)), options);
    gateway_->start();
    port_ = gateway_->port();
    ASSERT_NE(port_, 0);
  }

  void TearDown() override { gateway_->stop(); }

  std::unique_ptr<Gateway> gateway_;
  std::uint16_t port_{0};
};

}  // namespace

TEST_F(GatewayTest, BroadcastsConsecutiveTicksToEveryClient)
{
  WsClient a(port_);
  WsClient b(port_);
  for (auto * client : {&a, &b}) {
    std::int64_t last = -1;
    int advances = 0;
    for (int i = 0; i < 30; ++i) {
      const auto frame = client->next();
      ASSERT_EQ(frame["type"], "state");
      ASSERT_EQ(frame["scenario"], "malfunctioning_traffic_light");
      const auto tick = frame["tick"].get<std::int64_t>();
      if (last >= 0) {
        ASSERT_GE(tick, last);
        ASSERT_LE(tick - last, 1) << "skipped a tick";
        advances += tick == last + 1;
      }
      last = tick;
      ASSERT_TRUE(frame["vehicle"].contains("speed"));
    }
    EXPECT_GE(advances, 10);
  }
}

TEST_F(GatewayTest, InstructionActivatesAndShowsInFrames)
{
  const auto switched = request(port_, http::verb::post, "/api/scenario", R"({"name": "pedestrian_margin"})");
  ASSERT_EQ(switched.status, 200u);
  WsClient ws(port_);
  const auto posted =
    request(port_, http::verb::post, "/api/instruction", R"({"text": "Keep a larger distance from the pedestrian."})");
  ASSERT_EQ(posted.status, 200u);
  const auto id = posted.body["id"].get<std::string>();

  bool activated = false;
  bool override_seen = false;
  const auto deadline = std::chrono::steady_clock::now() + 20s;
  while (!(activated && override_seen) && std::chrono::steady_clock::now() < deadline) {
    const auto frame = ws.next();
    ASSERT_EQ(frame["scenario"], "pedestrian_margin");
    for (const auto & e : frame["trace_events"]) {
      if (e["request"] == id && e["stage"] == "validation") {
        EXPECT_EQ(e["data"]["activation"], "Activated");
        activated = true;
      }
    }
    for (const auto & o : frame["overrides"]) {
      if (o["path"] == "planning/behavior_velocity_planner_node/stop_margin") {
        EXPECT_EQ(o["value"], "3");
        override_seen = true;
      }
    }
  }
  EXPECT_TRUE(activated);
  EXPECT_TRUE(override_seen);

  const auto trace = request(port_, http::verb::get, "/api/trace/" + id);
  ASSERT_EQ(trace.status, 200u);
  EXPECT_EQ(trace.body["id"], id);
  EXPECT_GE(trace.body["events"].size(), 6u);
}

TEST_F(GatewayTest, RejectsBadRequests)
{
  const auto empty = request(port_, http::verb::post, "/api/instruction", R"({"text": "  "})");
  EXPECT_EQ(empty.status, 400u);
  ASSERT_FALSE(empty.body["issues"].empty());
  EXPECT_EQ(empty.body["issues"][0]["field"], "text");
  EXPECT_EQ(request(port_, http::verb::post, "/api/instruction", "not json").status, 400u);
  EXPECT_EQ(request(port_, http::verb::post, "/api/instruction", R"({"text": 4})").status, 400u);
  EXPECT_EQ(request(port_, http::verb::get, "/api/trace/req-9999").status, 404u);
  EXPECT_EQ(request(port_, http::verb::get, "/api/nothing").status, 404u);
  EXPECT_EQ(request(port_, http::verb::post, "/api/scenario", R"({"name": "moon_base"})").status, 404u);
  EXPECT_EQ(request(port_, http::verb::delete_, "/api/scenarios").status, 405u);
}

TEST_F(GatewayTest, ListsAndSwitchesScenarios)
{
  const auto listed = request(port_, http::verb::get, "/api/scenarios");
  ASSERT_EQ(listed.status, 200u);
  EXPECT_EQ(listed.body["current"], "malfunctioning_traffic_light");
  EXPECT_EQ(listed.body["scenarios"].size(), 5u);
  for (const auto & s : listed.body["scenarios"]) {
    EXPECT_FALSE(s["default_instruction"].get<std::string>().empty());
  }
  ASSERT_EQ(request(port_, http::verb::post, "/api/scenario", R"({"name": "extended_stop"})").status, 200u);
  EXPECT_EQ(request(port_, http::verb::get, "/api/scenarios").body["current"], "extended_stop");
  WsClient ws(port_);
  EXPECT_EQ(ws.next()["scenario"], "extended_stop");
}

TEST_F(GatewayTest, StopEndsAttachedStreams)
{
  WsClient ws(port_);
  ws.next();
  gateway_->stop();
  EXPECT_THROW(
    {
      for (int i = 0; i < 300; ++i) {
        ws.next();
      }
    },
    boost::system::system_error);
}
