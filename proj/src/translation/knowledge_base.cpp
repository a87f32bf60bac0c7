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

#include "flexlane/translation/knowledge_base.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "flexlane/autoir/text.hpp"
#include "flexlane/simd/vector_kernels.hpp"
#include "flexlane/translation/text_units.hpp"

namespace flexlane::translation
{

namespace
{

std::string_view trim(std::string_view s)
{
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

bool starts_with_key(std::string_view line, std::string_view key)
{
  if (line.size() < key.size()) {
    return false;
  }
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(line[i])) != key[i]) {
      return false;
    }
  }
  return true;
}

std::string read_file(const std::filesystem::path & file)
{
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    throw KnowledgeBaseError(KnowledgeBaseErrorCode::Io, "cannot read " + file.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string identifier_from(std::string_view stem)
{
  std::string id;
  for (char c : stem) {
    const auto u = static_cast<unsigned char>(c);
    id += std::isalnum(u) ? static_cast<char>(std::tolower(u)) : '_';
  }
  if (id.empty() || !std::isalpha(static_cast<unsigned char>(id.front()))) {
    id.insert(0, "doc_");
  }
  return id;
}

}  // namespace

KnowledgeEntry parse_kb_entry(std::string_view document, std::string_view fallback_id)
{
  enum class Section { None, Scenario, AutoIR };
  KnowledgeEntry entry;
  entry.entry_id = std::string(fallback_id);
  std::string scenario;
  std::string autoir_block;
  Section section = Section::None;
  bool saw_scenario = false;
  bool saw_autoir = false;

  while (!document.empty()) {
    const auto nl = document.find('\n');
    const auto raw_line = document.substr(0, nl);
    document = nl == std::string_view::npos ? std::string_view{} : document.substr(nl + 1);
    const auto line = trim(raw_line);

    if (section != Section::AutoIR && starts_with_key(line, "id:")) {
      entry.entry_id = std::string(trim(line.substr(3)));
      continue;
    }
    if (section != Section::AutoIR && starts_with_key(line, "scenario:")) {
      section = Section::Scenario;
      saw_scenario = true;
      scenario += trim(line.substr(9));
      continue;
    }
    if (starts_with_key(line, "autoir:")) {
      section = Section::AutoIR;
      saw_autoir = true;
      continue;
    }
    switch (section) {
      case Section::Scenario:
        if (!line.empty()) {
          if (!scenario.empty()) {
            scenario += ' ';
          }
          scenario += line;
        }
        break;
      case Section::AutoIR:
        autoir_block += line;
        autoir_block += '\n';
        break;
      case Section::None:
        if (!line.empty() && line.front() != '#') {
          throw KnowledgeBaseError(
            KnowledgeBaseErrorCode::BadEntry, entry.entry_id + ": text outside of a section");
        }
        break;
    }
  }
  if (!saw_scenario || trim(scenario).empty()) {
    throw KnowledgeBaseError(KnowledgeBaseErrorCode::BadEntry, entry.entry_id + ": missing scenario");
  }
  if (!saw_autoir) {
    throw KnowledgeBaseError(KnowledgeBaseErrorCode::BadEntry, entry.entry_id + ": missing autoir block");
  }
  if (!autoir::is_identifier(entry.entry_id)) {
    throw KnowledgeBaseError(KnowledgeBaseErrorCode::BadEntry, "'" + entry.entry_id + "' is not an identifier");
  }
  entry.scenario_text = std::move(scenario);
  try {
    entry.program = autoir::parse_autoir(autoir_block);
  } catch (const autoir::ParseError & e) {
    throw KnowledgeBaseError(KnowledgeBaseErrorCode::BadEntry, entry.entry_id + ": " + e.what());
  }
  return entry;
}

std::vector<KnowledgeEntry> load_knowledge_base(
  const std::filesystem::path & dir, const autoir::ParamRegistry & registry)
{
  if (!std::filesystem::is_directory(dir)) {
    throw KnowledgeBaseError(KnowledgeBaseErrorCode::Io, "not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto & item : std::filesystem::directory_iterator(dir)) {
    if (item.is_regular_file()) {
      files.push_back(item.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::vector<KnowledgeEntry> entries;
  for (const auto & file : files) {
    const auto ext = file.extension().string();
    if (ext == ".kb") {
      auto entry = parse_kb_entry(read_file(file), file.stem().string());
      const auto report = autoir::validate_program(*entry.program, registry);
      if (!report.ok) {
        throw KnowledgeBaseError(
          KnowledgeBaseErrorCode::BadEntry, entry.entry_id + ": " + report.summary());
      }
      entries.push_back(std::move(entry));
    } else if (ext == ".md" || ext == ".txt") {
      const auto stem = identifier_from(file.stem().string());
      for (auto & chunk : chunk_document(read_file(file), kDefaultChunkTokens, stem)) {
        entries.push_back(
          {stem + "_chunk" + std::to_string(chunk.ordinal), std::move(chunk.text), std::nullopt});
      }
    }
  }
  return entries;
}

KBIndex KBIndex::build(std::vector<KnowledgeEntry> entries)
{
  std::set<std::string_view> seen;
  for (const auto & e : entries) {
    if (!seen.insert(e.entry_id).second) {
      throw KnowledgeBaseError(KnowledgeBaseErrorCode::DuplicateId, "duplicate entry id '" + e.entry_id + "'");
    }
  }
  KBIndex index;
  index.matrix_.reserve(entries.size() * kEmbeddingDim);
  for (const auto & e : entries) {
    const auto v = embed_text(e.scenario_text);
    index.matrix_.insert(index.matrix_.end(), v.begin(), v.end());
  }
  index.entries_ = std::move(entries);
  return index;
}

std::vector<KBIndex::Hit> KBIndex::retrieve(std::string_view query, std::size_t k) const
{
  if (k == 0) {
    throw std::invalid_argument("retrieve: k must be >= 1");
  }
  if (entries_.empty()) {
    return {};
  }
  const auto q = embed_text(query);
  std::vector<double> scores(entries_.size());
  simd::dot_rows(matrix_, kEmbeddingDim, q, scores);

  std::vector<std::size_t> order(entries_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto n = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(),
    [&](std::size_t a, std::size_t b) {
      if (scores[a] != scores[b]) {
        return scores[a] > scores[b];
      }
      return entries_[a].entry_id < entries_[b].entry_id;
    });

  std::vector<Hit> hits;
  hits.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    hits.push_back({&entries_[order[i]], scores[order[i]]});
  }
  return hits;
}

}  // namespace flexlane::translation
