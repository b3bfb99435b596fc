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

#include "hypernym/text.h"

#include <cctype>

namespace hypernym {

bool IsWordByte(unsigned char c) { return c >= 0x80 || std::isalnum(c); }

bool IsSpaceByte(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool IsPunctByte(unsigned char c) { return c < 0x80 && std::ispunct(c); }

std::string AsciiLower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::vector<ByteRange> WordRanges(std::string_view text) {
  std::vector<ByteRange> ranges;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!IsWordByte(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && IsWordByte(static_cast<unsigned char>(text[j]))) {
      ++j;
    }
    ranges.push_back({i, j});
    i = j;
  }
  return ranges;
}

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpaceByte(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    std::size_t j = i;
    while (j < text.size() && !IsSpaceByte(static_cast<unsigned char>(text[j]))) {
      ++j;
    }
    std::size_t b = i, e = j;
    while (b < e && IsPunctByte(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && IsPunctByte(static_cast<unsigned char>(text[e - 1]))) --e;
    if (b < e) tokens.push_back(AsciiLower(text.substr(b, e - b)));
    i = j;
  }
  return tokens;
}

std::vector<std::string> TokenizeWords(std::string_view text) {
  std::vector<std::string> tokens;
  for (const ByteRange& r : WordRanges(text)) {
    tokens.push_back(AsciiLower(text.substr(r.begin, r.size())));
  }
  return tokens;
}

std::string CamelCaseToWords(std::string_view id) {
  auto upper = [](char c) { return std::isupper(static_cast<unsigned char>(c)); };
  auto lower = [](char c) { return std::islower(static_cast<unsigned char>(c)); };
  auto digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)); };
  std::string out;
  for (std::size_t i = 0; i < id.size(); ++i) {
    char c = id[i];
    if (c == '_' || c == ' ' || c == '-') {
      if (!out.empty() && out.back() != ' ') out.push_back(' ');
      continue;
    }
    if (i > 0 && upper(c) && !out.empty() && out.back() != ' ') {
      char prev = id[i - 1];
      bool next_lower = i + 1 < id.size() && lower(id[i + 1]);
      if (lower(prev) || digit(prev) || (upper(prev) && next_lower)) {
        out.push_back(' ');
      }
    }
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

std::string CollapseWhitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (IsSpaceByte(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

}  // namespace hypernym
