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

#ifndef HYPERNYM_TEXT_H_
#define HYPERNYM_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace hypernym {

// Byte-level character classes. Bytes >= 0x80 (UTF-8 lead and continuation
// bytes) count as word characters so non-ASCII words are never split.
bool IsWordByte(unsigned char c);
bool IsSpaceByte(unsigned char c);
bool IsPunctByte(unsigned char c);

std::string AsciiLower(std::string_view text);

// Half-open byte range [begin, end).
struct ByteRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const ByteRange&, const ByteRange&) = default;
};

// Maximal runs of word bytes, left to right.
std::vector<ByteRange> WordRanges(std::string_view text);

// Corpus tokenizer: case-folded, split on whitespace, surrounding punctuation
// stripped, empty tokens dropped. "Class 319/4." -> {"class", "319/4"}.
std::vector<std::string> Tokenize(std::string_view text);

// Word tokenizer: case-folded, split on whitespace and punctuation.
// "traffic-light's" -> {"traffic", "light", "s"}.
std::vector<std::string> TokenizeWords(std::string_view text);

// "MeanOfTransport" -> "mean of transport"; "NCAATeam" -> "ncaa team".
std::string CamelCaseToWords(std::string_view id);

// Trims, collapses internal whitespace runs to one space.
std::string CollapseWhitespace(std::string_view text);

}  // namespace hypernym

#endif  // HYPERNYM_TEXT_H_
