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

#include "flexlane/translation/embedding.hpp"

#include <cmath>

#include "flexlane/simd/vector_kernels.hpp"
#include "flexlane/translation/text_units.hpp"

namespace flexlane::translation
{

std::uint64_t stable_hash(std::string_view bytes, std::uint64_t seed)
{
  std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  h += 0x9e3779b97f4a7c15ULL;
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
  return h ^ (h >> 31);
}

EmbeddingVector embed_text(std::string_view text)
{
  EmbeddingVector v{};
  for (const auto & token : tokenize(text)) {
    const auto term = normalize_term(token);
    if (term.empty()) {
      continue;
    }
    v[stable_hash(term) % kEmbeddingDim] += 1.0;
  }
  simd::normalize(v);
  return v;
}

double cosine(const EmbeddingVector & a, const EmbeddingVector & b)
{
  const double ab = simd::dot(a, b);
  const double aa = simd::dot(a, a);
  const double bb = simd::dot(b, b);
  if (aa == 0.0 || bb == 0.0) {
    return 0.0;
  }
  return ab / std::sqrt(aa * bb);
}

}  // namespace flexlane::translation
