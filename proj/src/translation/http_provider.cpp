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

#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

#include "flexlane/translation/provider.hpp"

namespace flexlane::translation
{

HttpProviderConfig HttpProviderConfig::from_env()
{
  HttpProviderConfig config;
  const char * url = std::getenv("FLEX_PROVIDER_URL");
  if (url == nullptr || *url == '\0') {
    throw ProviderError(ProviderErrorCode::Config, "FLEX_PROVIDER_URL is not set");
  }
  config.url = url;
  if (const char * key = std::getenv("FLEX_PROVIDER_KEY")) {
    config.api_key = key;
  }
  return config;
}

HttpProvider::HttpProvider(HttpProviderConfig config) : config_(std::move(config))
{
  const auto scheme_end = config_.url.find("://");
  if (scheme_end == std::string::npos) {
    throw ProviderError(ProviderErrorCode::Config, "provider URL needs a scheme: " + config_.url);
  }
  const auto scheme = config_.url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw ProviderError(ProviderErrorCode::Config, "unsupported scheme '" + scheme + "'");
  }
  const auto path_at = config_.url.find('/', scheme_end + 3);
  origin_ = config_.url.substr(0, path_at);
  path_ = path_at == std::string::npos ? "/" : config_.url.substr(path_at);
}

ProviderResponse HttpProvider::complete(const ProviderRequest & request)
{
  httplib::Client client(origin_);
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  const auto micros =
    std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());

  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }
  const nlohmann::json body = {{"prompt", request.prompt}, {"mode", std::string(to_string(request.mode))}};
  const auto result = client.Post(path_, headers, body.dump(), "application/json");
  if (!result) {
    const auto err = result.error();
    const auto code = (err == httplib::Error::Read || err == httplib::Error::Write ||
                       err == httplib::Error::ConnectionTimeout)
                        ? ProviderErrorCode::Timeout
                        : ProviderErrorCode::Transport;
    throw ProviderError(code, "provider request failed: " + httplib::to_string(err));
  }
  if (result->status != 200) {
    throw ProviderError(
      ProviderErrorCode::BadResponse, "provider returned HTTP " + std::to_string(result->status));
  }
  try {
    const auto reply = nlohmann::json::parse(result->body);
    auto text = reply.at("text").get<std::string>();
    if (text.empty()) {
      throw ProviderError(ProviderErrorCode::BadResponse, "provider returned empty text");
    }
    return {std::move(text)};
  } catch (const nlohmann::json::exception & e) {
    throw ProviderError(ProviderErrorCode::BadResponse, std::string("malformed provider reply: ") + e.what());
  }
}

}  // namespace flexlane::translation
