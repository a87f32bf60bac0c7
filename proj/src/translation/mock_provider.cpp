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

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "flexlane/autoir/program.hpp"
#include "flexlane/translation/prompt.hpp"
#include "flexlane/translation/provider.hpp"
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

std::string_view rest_of_line(std::string_view text, std::size_t from)
{
  const auto nl = text.find('\n', from);
  return trim(text.substr(from, nl == std::string_view::npos ? std::string_view::npos : nl - from));
}

bool is_consonant(char c) { return std::string_view("aeiou").find(c) == std::string_view::npos; }

// Crude English suffix stripping; good enough for a closed driving vocabulary.
std::vector<std::string> lemma_candidates(const std::string & term)
{
  std::vector<std::string> out{term};
  auto ends = [&](std::string_view s) {
    return term.size() > s.size() + 1 && term.compare(term.size() - s.size(), s.size(), s) == 0;
  };
  auto add_stem = [&](std::size_t cut) {
    auto stem = term.substr(0, term.size() - cut);
    out.push_back(stem);
    out.push_back(stem + "e");
    if (stem.size() >= 2 && stem.back() == stem[stem.size() - 2] && is_consonant(stem.back())) {
      out.push_back(stem.substr(0, stem.size() - 1));
    }
  };
  if (ends("'s")) {
    out.push_back(term.substr(0, term.size() - 2));
  }
  if (ends("ies")) {
    out.push_back(term.substr(0, term.size() - 3) + "y");
  }
  if (ends("es")) {
    out.push_back(term.substr(0, term.size() - 2));
  }
  if (ends("s")) {
    out.push_back(term.substr(0, term.size() - 1));
  }
  if (ends("ing")) {
    add_stem(3);
  }
  if (ends("ed")) {
    add_stem(2);
  }
  if (ends("er")) {
    add_stem(2);
  }
  if (ends("est")) {
    add_stem(3);
  }
  return out;
}

// Strips surrounding punctuation but keeps case and inner dots.
std::string_view strip_punct(std::string_view token)
{
  auto keep = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  while (!token.empty() && !keep(token.front())) {
    token.remove_prefix(1);
  }
  while (!token.empty() && !keep(token.back())) {
    token.remove_suffix(1);
  }
  return token;
}

struct PathMention
{
  std::string module;
  std::string node;
  std::string param;
};

std::optional<PathMention> as_dotted_path(std::string_view token)
{
  token = strip_punct(token);
  const auto a = token.find('.');
  if (a == std::string_view::npos) {
    return std::nullopt;
  }
  const auto b = token.find('.', a + 1);
  if (b == std::string_view::npos || token.find('.', b + 1) != std::string_view::npos) {
    return std::nullopt;
  }
  PathMention m{
    std::string(token.substr(0, a)), std::string(token.substr(a + 1, b - a - 1)),
    std::string(token.substr(b + 1))};
  if (!autoir::is_identifier(m.module) || !autoir::is_identifier(m.node) || !autoir::is_identifier(m.param)) {
    return std::nullopt;
  }
  return m;
}

}  // namespace

std::string_view to_string(PromptMode mode)
{
  return mode == PromptMode::Relevance ? "relevance" : "generation";
}

Lexicon Lexicon::parse(std::string_view document)
{
  std::set<std::string> lemmas;
  while (!document.empty()) {
    const auto nl = document.find('\n');
    auto line = trim(document.substr(0, nl));
    document = nl == std::string_view::npos ? std::string_view{} : document.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = trim(line.substr(0, hash));
    }
    for (const auto & token : tokenize(line)) {
      auto term = normalize_term(token);
      if (!term.empty()) {
        lemmas.insert(std::move(term));
      }
    }
  }
  return Lexicon(std::move(lemmas));
}

Lexicon Lexicon::load(const std::filesystem::path & file)
{
  std::ifstream in(file);
  if (!in) {
    throw std::runtime_error("cannot open lexicon " + file.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::optional<std::string> Lexicon::match(std::string_view term) const
{
  const auto normalized = normalize_term(term);
  if (normalized.empty()) {
    return std::nullopt;
  }
  for (const auto & candidate : lemma_candidates(normalized)) {
    if (lemmas_.count(candidate) != 0) {
      return candidate;
    }
  }
  return std::nullopt;
}

ProviderResponse MockProvider::complete(const ProviderRequest & request)
{
  return request.mode == PromptMode::Relevance ? relevance(request.prompt) : generation(request.prompt);
}

ProviderResponse MockProvider::relevance(std::string_view prompt) const
{
  const auto at = prompt.rfind(kUserInputMarker);
  if (at == std::string_view::npos) {
    return {"NO. No user input was found in the prompt."};
  }
  const auto utterance = rest_of_line(prompt, at + kUserInputMarker.size());
  for (const auto & token : tokenize(utterance)) {
    if (auto lemma = lexicon_.match(token)) {
      return {"YES. The input refers to '" + *lemma + "', which concerns how the vehicle drives."};
    }
  }
  return {"NO. The input is not about operating the vehicle."};
}

ProviderResponse MockProvider::generation(std::string_view prompt) const
{
  const auto ref_at = prompt.find(kReferenceHeader);
  const auto instr_at = prompt.find(kInstructionMarker);
  if (ref_at == std::string_view::npos || instr_at == std::string_view::npos || instr_at < ref_at) {
    return {"I cannot answer without reference knowledge."};
  }
  const auto references = prompt.substr(ref_at, instr_at - ref_at);

  // Curated references: echo the first embedded program.
  if (const auto prog_at = references.find(kProgramMarker); prog_at != std::string_view::npos) {
    std::string program;
    auto rest = references.substr(prog_at + kProgramMarker.size());
    while (!rest.empty()) {
      const auto nl = rest.find('\n');
      const auto line = trim(rest.substr(0, nl));
      rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
      if (line.empty() && program.empty()) {
        continue;
      }
      if (line.empty() || line.front() == '[') {
        break;
      }
      program += line;
      program += '\n';
    }
    return {program};
  }

  // Free-text references: pick the dotted path mention whose neighbourhood
  // overlaps the instruction most, and report its documented default.
  const auto instruction = rest_of_line(prompt, instr_at + kInstructionMarker.size());
  std::set<std::string> instruction_terms;
  for (const auto & token : tokenize(instruction)) {
    auto term = normalize_term(token);
    if (term.size() >= 3) {
      instruction_terms.insert(std::move(term));
    }
  }

  constexpr std::ptrdiff_t kWindow = 30;
  std::optional<PathMention> best;
  std::string best_value;
  std::size_t best_score = 0;
  std::size_t search = 0;
  while ((search = references.find(kFreeTextMarker, search)) != std::string_view::npos) {
    search += kFreeTextMarker.size();
    const auto tokens = tokenize(rest_of_line(references, search));
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      auto mention = as_dotted_path(tokens[i]);
      if (!mention) {
        continue;
      }
      std::size_t score = 0;
      const auto lo = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(i) - kWindow));
      const auto hi = std::min(tokens.size(), i + static_cast<std::size_t>(kWindow) + 1);
      for (std::size_t j = lo; j < hi; ++j) {
        score += instruction_terms.count(normalize_term(tokens[j]));
      }
      std::string value;
      for (std::size_t j = i + 1; j < std::min(tokens.size(), i + 16); ++j) {
        if (normalize_term(tokens[j]) == "default" && j + 1 < tokens.size()) {
          value = std::string(strip_punct(tokens[j + 1]));
          break;
        }
      }
      if (!best || score > best_score) {
        best = std::move(mention);
        best_score = score;
        best_value = value;
      }
    }
  }
  if (!best || best_value.empty()) {
    return {"I could not determine which parameter this instruction should change."};
  }
  return {"moduleSelect: " + best->module + "\nnodeSelect: " + best->node + "\nparamSelect: " + best->param +
          "\nconfigAction: " + best_value + "\n"};
}

}  // namespace flexlane::translation
