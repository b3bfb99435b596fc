// Copyright 2026 The Hypernym Authors.
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

#include "hypernym/ne_pipeline.h"

#include <algorithm>
#include <string>

#include "hypernym/error.h"
#include "hypernym/records.h"
#include "hypernym/text.h"

namespace hypernym {
namespace {

bool IsClosingPunct(char c) {
  switch (c) {
    case ',': case '.': case ';': case ':': case '!': case '?':
    case ')': case ']': case '}':
      return true;
    default:
      return false;
  }
}

bool IsOpeningBracket(char c) { return c == '(' || c == '[' || c == '{'; }

bool IsSeparator(char c) { return c == ',' || c == ';' || c == ':'; }

bool BoundaryBefore(std::string_view text, std::size_t pos) {
  return pos == 0 || !IsWordByte(static_cast<unsigned char>(text[pos - 1]));
}

bool BoundaryAfter(std::string_view text, std::size_t pos) {
  return pos >= text.size() || !IsWordByte(static_cast<unsigned char>(text[pos]));
}

}  // namespace

void NormalizeSpans(const CaptionRecord& caption, std::vector<NESpan>& spans) {
  if (caption.text.empty()) {
    throw DataError("caption \"" + caption.id + "\" has empty text");
  }
  const std::size_t len = caption.text.size();
  for (NESpan& s : spans) {
    if (s.start >= s.end || s.end > len) {
      throw DataError("caption \"" + caption.id + "\": span [" +
                      std::to_string(s.start) + ", " + std::to_string(s.end) +
                      ") out of range for text of " + std::to_string(len) +
                      " bytes");
    }
    std::string covered = caption.text.substr(s.start, s.end - s.start);
    if (s.surface.empty()) {
      s.surface = std::move(covered);
    } else if (s.surface != covered) {
      throw DataError("caption \"" + caption.id + "\": span surface \"" +
                      s.surface + "\" does not match text \"" + covered + "\"");
    }
  }
  std::stable_sort(spans.begin(), spans.end(),
                   [](const NESpan& a, const NESpan& b) { return a.start < b.start; });
  for (std::size_t i = 1; i < spans.size(); ++i) {
    if (spans[i].start < spans[i - 1].end) {
      throw DataError("caption \"" + caption.id + "\": overlapping spans \"" +
                      spans[i - 1].surface + "\" and \"" + spans[i].surface + "\"");
    }
  }
}

std::vector<TaggedCaption> IngestTagged(std::istream& in, std::string_view source) {
  std::vector<TaggedCaption> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(ParseTaggedCaption(line, line_no));
    } catch (const DataError& e) {
      throw DataError(std::string(source) + ":" + std::to_string(line_no) +
                      ": " + e.what());
    }
  }
  return out;
}

std::vector<NESpan> GazetteerTag(const CaptionRecord& caption,
                                 const Gazetteer& gazetteer) {
  std::vector<std::pair<std::string_view, std::string_view>> entries;
  for (const auto& [surface, label] : gazetteer) {
    if (!surface.empty()) entries.emplace_back(surface, label);
  }
  std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return a.first.size() > b.first.size();
  });

  const std::string_view text = caption.text;
  std::vector<NESpan> spans;
  std::size_t pos = 0;
  while (pos < text.size()) {
    bool matched = false;
    if (!IsSpaceByte(static_cast<unsigned char>(text[pos])) &&
        BoundaryBefore(text, pos)) {
      for (const auto& [surface, label] : entries) {
        if (text.compare(pos, surface.size(), surface) == 0 &&
            BoundaryAfter(text, pos + surface.size())) {
          spans.push_back({pos, pos + surface.size(), std::string(surface),
                           std::string(label)});
          pos += surface.size();
          matched = true;
          break;
        }
      }
    }
    if (!matched) ++pos;
  }
  return spans;
}

std::string RenderHypernym(std::string_view type_id) {
  return CamelCaseToWords(type_id);
}

std::string CleanupText(std::string_view text) {
  const std::string collapsed = CollapseWhitespace(text);
  std::string out;
  out.reserve(collapsed.size());
  for (std::size_t i = 0; i < collapsed.size(); ++i) {
    const char c = collapsed[i];
    if (c == ' ') {
      const bool before_close = i + 1 < collapsed.size() && IsClosingPunct(collapsed[i + 1]);
      const bool after_open = !out.empty() && IsOpeningBracket(out.back());
      if (before_close || after_open || out.empty()) continue;
    }
    out.push_back(c);
  }
  // Separators left at the very start by a removed leading entity.
  std::size_t lead = 0;
  while (lead < out.size() && (IsSeparator(out[lead]) || out[lead] == ' ')) ++lead;
  out.erase(0, lead);
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

HypernymizedCaption HypernymizeCaption(const CaptionRecord& caption,
                                       std::span<const NESpan> spans,
                                       const Ontology& ontology,
                                       KnowledgeBase& kb) {
  HypernymizedCaption result;
  result.id = caption.id;
  result.replacements.resize(spans.size());
  std::string text = caption.text;

  // Right to left so earlier byte offsets stay valid.
  for (std::size_t k = spans.size(); k-- > 0;) {
    const NESpan& span = spans[k];
    Replacement& rep = result.replacements[k];
    rep.span = span;

    const std::vector<EntityCandidate> candidates = kb.Lookup(span.surface);
    if (std::optional<EntityCandidate> top = SelectEntity(candidates)) {
      std::vector<std::string> known;
      for (const std::string& t : top->types) {
        if (ontology.Contains(t)) known.push_back(t);
      }
      if (!known.empty()) rep.hypernym = ontology.MostSpecific(known);
    }
    const std::size_t len = span.end - span.start;
    if (rep.hypernym) {
      text.replace(span.start, len, RenderHypernym(*rep.hypernym));
    } else {
      text.erase(span.start, len);
    }
  }
  result.text = CleanupText(text);
  return result;
}

}  // namespace hypernym
