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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace flexlane::translation
{

inline constexpr std::size_t kDefaultChunkTokens = 700;

/// Whitespace split; punctuation stays attached to its word.
std::vector<std::string> tokenize(std::string_view text);

/// Lower-cases a token and strips leading/trailing punctuation.
/// "Light." -> "light"; returns empty for pure punctuation.
std::string normalize_term(std::string_view token);

struct Chunk
{
  std::string source_id;
  std::size_t ordinal{0};
  std::string text;  // tokens joined by single spaces
  std::size_t token_count{0};

  bool operator==(const Chunk &) const = default;
};

/// Greedy packing: each chunk takes the longest prefix of the remaining tokens
/// that fits in `max_tokens`. Throws std::invalid_argument when max_tokens == 0.
std::vector<Chunk> chunk_document(
  std::string_view text, std::size_t max_tokens = kDefaultChunkTokens, std::string_view source_id = {});

}  // namespace flexlane::translation
