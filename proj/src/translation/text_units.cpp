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

#include "flexlane/translation/text_units.hpp"

#include <cctype>
#include <stdexcept>

namespace flexlane::translation
{

std::vector<std::string> tokenize(std::string_view text)
{
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    const auto start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    if (i > start) {
      tokens.emplace_back(text.substr(start, i - start));
    }
  }
  return tokens;
}

std::string normalize_term(std::string_view token)
{
  auto is_word = [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || u >= 0x80;
  };
  while (!token.empty() && !is_word(token.front())) {
    token.remove_prefix(1);
  }
  while (!token.empty() && !is_word(token.back())) {
    token.remove_suffix(1);
  }
  std::string out(token);
  for (auto & c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::vector<Chunk> chunk_document(std::string_view text, std::size_t max_tokens, std::string_view source_id)
{
  if (max_tokens == 0) {
    throw std::invalid_argument("chunk_document: max_tokens must be >= 1");
  }
  const auto tokens = tokenize(text);
  std::vector<Chunk> chunks;
  for (std::size_t begin = 0; begin < tokens.size(); begin += max_tokens) {
    const auto end = std::min(tokens.size(), begin + max_tokens);
    Chunk chunk;
    chunk.source_id = std::string(source_id);
    chunk.ordinal = chunks.size();
    chunk.token_count = end - begin;
    for (std::size_t i = begin; i < end; ++i) {
      if (i > begin) {
        chunk.text += ' ';
      }
      chunk.text += tokens[i];
    }
    chunks.push_back(std::move(chunk));
  }
  return chunks;
}

}  // namespace flexlane::translation
