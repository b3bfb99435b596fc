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

#include "hypernym/mentions.h"

#include <cstdio>
#include <fstream>

#include "hypernym/error.h"
#include "hypernym/ne_pipeline.h"
#include "hypernym/text.h"

namespace hypernym {

ClassVocabulary::ClassVocabulary(std::vector<std::string> names)
    : names_(std::move(names)) {
  std::set<std::string> folded;
  for (const std::string& name : names_) {
    std::vector<std::string> toks = TokenizeWords(name);
    if (toks.empty()) throw DataError("vocabulary: empty class name");
    if (!folded.insert(AsciiLower(CollapseWhitespace(name))).second) {
      throw DataError("vocabulary: duplicate class \"" + name + "\"");
    }
    tokens_.push_back(std::move(toks));
  }
}

ClassVocabulary ClassVocabulary::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open vocabulary file " + path.string());
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    std::string name = CollapseWhitespace(line);
    if (!name.empty()) names.push_back(std::move(name));
  }
  return ClassVocabulary(std::move(names));
}

bool ClassVocabulary::Contains(std::string_view name) const {
  for (const std::string& n : names_) {
    if (n == name) return true;
  }
  return false;
}

std::vector<ClassMention> FindClassMentions(std::span<const std::string> tokens,
                                            const ClassVocabulary& vocabulary,
                                            const ExactMatchOptions& options) {
  std::vector<std::string> folded;
  folded.reserve(tokens.size());
  for (const std::string& t : tokens) folded.push_back(AsciiLower(t));

  std::vector<ClassMention> mentions;
  for (std::size_t c = 0; c < vocabulary.size(); ++c) {
    const std::vector<std::string>& pattern = vocabulary.tokens(c);
    const std::size_t n = pattern.size();
    for (std::size_t i = 0; i + n <= folded.size(); ++i) {
      bool ok = true;
      for (std::size_t k = 0; k < n && ok; ++k) {
        const std::string& word = folded[i + k];
        ok = word == pattern[k];
        if (!ok && options.match_plurals && k + 1 == n) {
          ok = word == pattern[k] + "s" || word == pattern[k] + "es";
        }
      }
      if (ok) mentions.push_back({vocabulary.names()[c], i, i + n});
    }
  }
  return mentions;
}

std::set<std::string> ExactMatch(std::string_view caption,
                                 const ClassVocabulary& vocabulary,
                                 const ExactMatchOptions& options) {
  const std::vector<std::string> tokens = TokenizeWords(caption);
  std::set<std::string> found;
  for (ClassMention& m : FindClassMentions(tokens, vocabulary, options)) {
    found.insert(std::move(m.class_name));
  }
  return found;
}

std::set<std::string> ImageMentionSet(std::span<const std::string> captions,
                                      const ClassVocabulary& vocabulary,
                                      const ExactMatchOptions& options) {
  std::set<std::string> found;
  for (const std::string& caption : captions) {
    found.merge(ExactMatch(caption, vocabulary, options));
  }
  return found;
}

MentionReport PrecisionRecall(const LabelSets& mentions,
                              const LabelSets& ground_truth,
                              const ClassVocabulary& vocabulary) {
  std::set<std::string> images;
  for (const auto& [id, _] : mentions) images.insert(id);
  for (const auto& [id, _] : ground_truth) images.insert(id);

  static const std::set<std::string> kEmpty;
  auto lookup = [](const LabelSets& sets, const std::string& id) -> const std::set<std::string>& {
    auto it = sets.find(id);
    return it == sets.end() ? kEmpty : it->second;
  };

  MentionReport report;
  report.images = images.size();
  report.classes.reserve(vocabulary.size());
  for (const std::string& name : vocabulary.names()) {
    ClassScore score;
    score.name = name;
    for (const std::string& image : images) {
      const bool m = lookup(mentions, image).contains(name);
      const bool g = lookup(ground_truth, image).contains(name);
      score.mentioned += m;
      score.in_truth += g;
      score.both += m && g;
    }
    if (score.mentioned > 0) {
      score.precision = static_cast<double>(score.both) / score.mentioned;
    }
    if (score.in_truth > 0) {
      score.recall = static_cast<double>(score.both) / score.in_truth;
    }
    report.classes.push_back(std::move(score));
  }

  double p_sum = 0.0, r_sum = 0.0;
  std::size_t p_n = 0, r_n = 0;
  for (const ClassScore& s : report.classes) {
    if (s.precision) p_sum += *s.precision, ++p_n;
    if (s.recall) r_sum += *s.recall, ++r_n;
  }
  if (p_n > 0) report.macro_precision = p_sum / p_n;
  if (r_n > 0) report.macro_recall = r_sum / r_n;
  return report;
}

std::set<std::string> HighPrecisionClasses(const MentionReport& report,
                                           double threshold) {
  std::set<std::string> out;
  for (const ClassScore& s : report.classes) {
    if (s.precision && *s.precision >= threshold) out.insert(s.name);
  }
  return out;
}

std::set<std::string> ClassesInOntology(const ClassVocabulary& vocabulary,
                                        const Ontology& ontology) {
  std::set<std::string> rendered;
  for (const std::string& id : ontology.Ids()) {
    rendered.insert(RenderHypernym(id));
    rendered.insert(AsciiLower(ontology.Get(id).label));
  }
  std::set<std::string> out;
  for (const std::string& name : vocabulary.names()) {
    if (rendered.contains(AsciiLower(CollapseWhitespace(name)))) out.insert(name);
  }
  return out;
}

std::string FormatMentionReport(const MentionReport& report) {
  std::size_t width = 5;
  for (const ClassScore& s : report.classes) width = std::max(width, s.name.size());
  auto fmt = [](const std::optional<double>& v) {
    if (!v) return std::string("     -");
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%6.4f", *v);
    return std::string(buf);
  };
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-*s %9s %9s %9s %9s %9s\n",
                static_cast<int>(width), "class", "mentioned", "truth", "both",
                "precision", "recall");
  out += line;
  for (const ClassScore& s : report.classes) {
    std::snprintf(line, sizeof(line), "%-*s %9zu %9zu %9zu %9s %9s\n",
                  static_cast<int>(width), s.name.c_str(), s.mentioned,
                  s.in_truth, s.both, fmt(s.precision).c_str(),
                  fmt(s.recall).c_str());
    out += line;
  }
  std::snprintf(line, sizeof(line), "%-*s %29s %9s %9s\n", static_cast<int>(width),
                "macro", "", fmt(report.macro_precision).c_str(),
                fmt(report.macro_recall).c_str());
  out += line;
  return out;
}

}  // namespace hypernym
