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

#ifndef HYPERNYM_NE_PIPELINE_H_
#define HYPERNYM_NE_PIPELINE_H_

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hypernym/kb_client.h"
#include "hypernym/ontology.h"

namespace hypernym {

struct CaptionRecord {
  std::string id;
  std::string text;
  std::optional<std::string> image_ref;
};

// Byte range [start, end) of a named entity in its caption.
struct NESpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
  std::string ner_label;

  friend bool operator==(const NESpan&, const NESpan&) = default;
};

struct TaggedCaption {
  CaptionRecord caption;
  std::vector<NESpan> spans;
};

struct Replacement {
  NESpan span;
  std::optional<std::string> hypernym;  // chosen type id; empty when removed
};

struct HypernymizedCaption {
  std::string id;
  std::string text;
  std::vector<Replacement> replacements;  // in span order
};

// Sorts spans by start, fills missing surfaces, and checks the span
// invariants. Throws DataError on an empty caption, an out-of-range offset,
// a surface mismatch, or overlapping spans.
void NormalizeSpans(const CaptionRecord& caption, std::vector<NESpan>& spans);

// Reads span-annotated JSON Lines (see records.h). Throws DataError naming
// the source and line of the first violating record.
std::vector<TaggedCaption> IngestTagged(std::istream& in,
                                        std::string_view source = "<input>");

using Gazetteer = std::map<std::string, std::string, std::less<>>;

// Longest-match, whole-token, non-overlapping gazetteer spans, left to right.
// Matching is case-sensitive.
std::vector<NESpan> GazetteerTag(const CaptionRecord& caption,
                                 const Gazetteer& gazetteer);

// "MeanOfTransport" -> "mean of transport".
std::string RenderHypernym(std::string_view type_id);

// Collapses whitespace runs, drops spaces before closing punctuation and
// after opening brackets, strips separators left dangling at the start, and
// trims. Idempotent.
std::string CleanupText(std::string_view text);

// Replaces every span with the rendered most specific ontology type of its
// top knowledge-base entity, or deletes it when the entity is unknown or
// carries no loaded type. Transport errors from `kb` propagate.
HypernymizedCaption HypernymizeCaption(const CaptionRecord& caption,
                                       std::span<const NESpan> spans,
                                       const Ontology& ontology,
                                       KnowledgeBase& kb);

}  // namespace hypernym

#endif  // HYPERNYM_NE_PIPELINE_H_
