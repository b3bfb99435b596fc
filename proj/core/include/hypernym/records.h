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

// JSON Lines record formats shared by the command-line tool and tests.
//
//   tagged caption   {"id", "text", "image"?, "spans": [[start, end, label] |
//                     {"start", "end", "label"?, "surface"?}, ...]}
//   caption          {"id"?, "text" | "caption", "image_id"?}
//   NE snapshot      {"type", "surface"}
//   ground truth     {"image_id", "width", "height",
//                     "boxes": [{"bbox": [x0, y0, x1, y1], "class"}]}
//   image labels     {"image_id", "labels": [...]}
//   detection        {"image_id", "class", "bbox", "score", "box_index"?}
//   grounding        {"image_id", "caption_id", "tokens", "attention"}
//
// Parsers throw ParseError carrying a short excerpt of the line.

#ifndef HYPERNYM_RECORDS_H_
#define HYPERNYM_RECORDS_H_

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "hypernym/enricher.h"
#include "hypernym/grounding_eval.h"
#include "hypernym/ne_pipeline.h"

namespace hypernym {

// Spans are normalized with NormalizeSpans.
TaggedCaption ParseTaggedCaption(std::string_view line, std::size_t line_no);

// A missing id defaults to the 1-based line number.
CaptionRecord ParseCaptionLine(std::string_view line, std::size_t line_no);

enum class TextFormat { kAuto, kJsonl, kText };

// Parses "auto", "jsonl" or "text"; throws UsageError otherwise.
TextFormat ParseTextFormat(std::string_view name);

// Caption text of one input line. Plain text lines are returned as-is; in
// kAuto mode a line starting with '{' is read as JSON.
std::string CaptionText(std::string_view line, TextFormat format,
                        std::size_t line_no);

// (image_id, caption text).
std::pair<std::string, std::string> ParseImageCaptionLine(std::string_view line,
                                                          std::size_t line_no);

NeSnapshotEntry ParseNeSnapshotLine(std::string_view line, std::size_t line_no);
ImageGroundTruth ParseGroundTruthLine(std::string_view line, std::size_t line_no);
std::pair<std::string, std::set<std::string>> ParseImageLabelsLine(
    std::string_view line, std::size_t line_no);
Detection ParseDetectionLine(std::string_view line, std::size_t line_no);
CaptionGrounding ParseGroundingLine(std::string_view line, std::size_t line_no);

std::string ToJsonLine(const HypernymizedCaption& caption);
std::string ToJsonLine(const TrainingPair& pair);
std::string ToJsonLine(const NeSnapshotEntry& entry);
std::string ToJsonLine(const Detection& detection);

}  // namespace hypernym

#endif  // HYPERNYM_RECORDS_H_
