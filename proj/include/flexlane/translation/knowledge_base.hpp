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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flexlane/autoir/program.hpp"
#include "flexlane/autoir/registry.hpp"
#include "flexlane/common/error.hpp"
#include "flexlane/translation/embedding.hpp"

namespace flexlane::translation
{

/// A driving scenario paired with the AutoIR program that serves it.
/// Entries ingested from free-form manuals carry no program.
struct KnowledgeEntry
{
  std::string entry_id;
  std::string scenario_text;
  std::optional<autoir::AutoIRProgram> program;

  bool operator==(const KnowledgeEntry &) const = default;
};

enum class KnowledgeBaseErrorCode { BadEntry, DuplicateId, Io };

using KnowledgeBaseError = CodedError<KnowledgeBaseErrorCode>;

/// Parses one `.kb` document:
///
///     id: traffic_light_ignore        (optional, defaults to `fallback_id`)
///     scenario:
///     free text, any number of lines
///     autoir:
///     moduleSelect: ...
KnowledgeEntry parse_kb_entry(std::string_view document, std::string_view fallback_id);

/// Loads every `.kb` file in `dir` (sorted by name) as one entry and every
/// `.md`/`.txt` file as unstructured text chunked at 700 tokens. Entries with
/// a program are validated against `registry`.
std::vector<KnowledgeEntry> load_knowledge_base(
  const std::filesystem::path & dir, const autoir::ParamRegistry & registry);

/// Exact cosine-similarity index over scenario texts.
class KBIndex
{
public:
  KBIndex() = default;

  /// Throws DuplicateId when two entries share an id.
  static KBIndex build(std::vector<KnowledgeEntry> entries);

  struct Hit
  {
    const KnowledgeEntry * entry;
    double score;
  };

  /// Top-k by cosine, descending; ties broken by ascending entry_id.
  /// Throws std::invalid_argument when k == 0.
  std::vector<Hit> retrieve(std::string_view query, std::size_t k) const;

  const std::vector<KnowledgeEntry> & entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

private:
  std::vector<KnowledgeEntry> entries_;
  std::vector<double> matrix_;  // row-major, one kEmbeddingDim row per entry
};

}  // namespace flexlane::translation
