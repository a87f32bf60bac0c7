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

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace flexlane::translation
{

inline constexpr std::size_t kEmbeddingDim = 256;
inline constexpr std::uint64_t kEmbeddingSeed = 0x5eed'f1e7'a0d1'2024ULL;

using EmbeddingVector = std::array<double, kEmbeddingDim>;

/// Seeded FNV-1a with a splitmix64 finisher. Stable across platforms.
std::uint64_t stable_hash(std::string_view bytes, std::uint64_t seed = kEmbeddingSeed);

/// Hashed term-frequency embedding, L2-normalized. Terms are tokens passed
/// through normalize_term; empty text (or text with no terms) yields zeros.
EmbeddingVector embed_text(std::string_view text);

double cosine(const EmbeddingVector & a, const EmbeddingVector & b);

}  // namespace flexlane::translation
