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

#ifndef HYPERNYM_MENTIONS_H_
#define HYPERNYM_MENTIONS_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hypernym/ontology.h"

namespace hypernym {

// Ordered class names, possibly multiword ("traffic light"), unique after
// case folding.
class ClassVocabulary {
 public:
  ClassVocabulary() = default;
  // Throws DataError on duplicates (after case folding) or empty names.
  explicit ClassVocabulary(std::vector<std::string> names);
  // One class name per line; blank lines skipped.
  static ClassVocabulary Load(const std::filesystem::path& path);

  const std::vector<std::string>& names() const { return names_; }
  // Lowercased word tokens of class `i`.
  const std::vector<std::string>& tokens(std::size_t i) const { return tokens_[i]; }
  std::size_t size() const { return names_.size(); }
  bool Contains(std::string_view name) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<std::string>> tokens_;
};

struct ExactMatchOptions {
  // Off by default: "dogs" does not match "dog".
  bool match_plurals = false;
};

// One class occurrence over a token sequence, as a half-open token range.
struct ClassMention {
  std::string class_name;
  std::size_t token_begin = 0;
  std::size_t token_end = 0;
};

// Every contiguous, case-insensitive whole-token occurrence of every class,
// including nested ones ("traffic light" and "light").
std::vector<ClassMention> FindClassMentions(std::span<const std::string> tokens,
                                            const ClassVocabulary& vocabulary,
                                            const ExactMatchOptions& options = {});

std::set<std::string> ExactMatch(std::string_view caption,
                                 const ClassVocabulary& vocabulary,
                                 const ExactMatchOptions& options = {});

// Union of ExactMatch over the captions of one image.
std::set<std::string> ImageMentionSet(std::span<const std::string> captions,
                                      const ClassVocabulary& vocabulary,
                                      const ExactMatchOptions& options = {});

// image id -> set of class names.
using LabelSets = std::map<std::string, std::set<std::string>>;

struct ClassScore {
  std::string name;
  std::size_t mentioned = 0;  // images where the class was extracted
  std::size_t in_truth = 0;   // images where the class is a true label
  std::size_t both = 0;
  std::optional<double> precision;  // absent when never extracted
  std::optional<double> recall;     // absent when never a true label
};

struct MentionReport {
  std::vector<ClassScore> classes;  // vocabulary order
  std::optional<double> macro_precision;
  std::optional<double> macro_recall;
  std::size_t images = 0;
};

// Per-class image-level precision and recall over the union of image ids in
// both maps; macro averages skip undefined entries.
MentionReport PrecisionRecall(const LabelSets& mentions,
                              const LabelSets& ground_truth,
                              const ClassVocabulary& vocabulary);

// Classes whose precision is defined and >= threshold.
std::set<std::string> HighPrecisionClasses(const MentionReport& report,
                                           double threshold);

// Classes whose name equals the rendered name of some ontology type.
std::set<std::string> ClassesInOntology(const ClassVocabulary& vocabulary,
                                        const Ontology& ontology);

// Aligned text table.
std::string FormatMentionReport(const MentionReport& report);

}  // namespace hypernym

#endif  // HYPERNYM_MENTIONS_H_
