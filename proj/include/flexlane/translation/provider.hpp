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
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "flexlane/common/error.hpp"

namespace flexlane::translation
{

enum class PromptMode { Relevance, Generation };

std::string_view to_string(PromptMode mode);

struct ProviderRequest
{
  std::string prompt;
  PromptMode mode{PromptMode::Relevance};
};

struct ProviderResponse
{
  std::string text;
};

enum class ProviderErrorCode { Transport, Timeout, BadResponse, Config };

using ProviderError = CodedError<ProviderErrorCode>;

/// Completion service used for relevance analysis and AutoIR generation.
/// Implementations must be safe to call from several threads at once.
class Provider
{
public:
  virtual ~Provider() = default;
  virtual ProviderResponse complete(const ProviderRequest & request) = 0;
  virtual std::string name() const = 0;
};

/// Driving vocabulary for the offline provider; one lemma per line, `#` comments.
class Lexicon
{
public:
  Lexicon() = default;
  explicit Lexicon(std::set<std::string> lemmas) : lemmas_(std::move(lemmas)) {}

  static Lexicon parse(std::string_view document);
  static Lexicon load(const std::filesystem::path & file);

  /// The lemma `term` reduces to, if it is in the lexicon.
  std::optional<std::string> match(std::string_view term) const;
  std::size_t size() const { return lemmas_.size(); }

private:
  std::set<std::string> lemmas_;
};

/// Deterministic offline provider.
///
/// Relevance: YES iff the user text shares a lemma with the lexicon.
/// Generation: echoes the first reference AutoIR block embedded in the prompt;
/// with free-text references only, it falls back to a best-effort extraction
/// of a dotted `module.node.param` mention and its documented default value.
class MockProvider final : public Provider
{
public:
  explicit MockProvider(Lexicon lexicon) : lexicon_(std::move(lexicon)) {}

  ProviderResponse complete(const ProviderRequest & request) override;
  std::string name() const override { return "mock"; }

private:
  ProviderResponse relevance(std::string_view prompt) const;
  ProviderResponse generation(std::string_view prompt) const;

  Lexicon lexicon_;
};

struct HttpProviderConfig
{
  std::string url;  // e.g. http://localhost:8080/v1/complete
  std::string api_key;
  std::chrono::milliseconds timeout{30000};

  /// Reads FLEX_PROVIDER_URL and FLEX_PROVIDER_KEY. Throws Config when the URL is unset.
  static HttpProviderConfig from_env();
};

/// POSTs {"prompt", "mode"} as JSON and expects {"text"} back.
class HttpProvider final : public Provider
{
public:
  explicit HttpProvider(HttpProviderConfig config);

  ProviderResponse complete(const ProviderRequest & request) override;
  std::string name() const override { return "http"; }

private:
  HttpProviderConfig config_;
  std::string origin_;  // scheme://host[:port]
  std::string path_;
};

}  // namespace flexlane::translation
