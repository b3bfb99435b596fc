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

#include "hypernym/enricher.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "hypernym/error.h"
#include "hypernym/ne_pipeline.h"

namespace hypernym {
namespace {

// Stream domains.
constexpr std::uint64_t kCaptionDomain = 1;
constexpr std::uint64_t kNeOnlyDomain = 3;
constexpr std::uint64_t kNoObjectDomain = 4;
constexpr std::uint64_t kNoObjectSelectDomain = 5;

constexpr std::array<std::string_view, 12> kMonths = {
    "January", "February", "March",     "April",   "May",      "June",
    "July",    "August",   "September", "October", "November", "December"};

constexpr std::array<std::string_view, 13> kPluralWords = {
    "two",   "three",   "four",     "five",     "six",      "seven", "eight",
    "nine",  "ten",     "several",  "many",     "multiple", "numerous"};

// Quantifier phrases ending in "of".
constexpr std::array<std::string_view, 10> kPluralOfHeads = {
    "group", "groups", "couple", "pair", "bunch",
    "lot",   "lots",   "herd",   "fleet", "flock"};

bool IsEligiblePunct(char c) {
  return c == ',' || c == ';' || c == ':' || c == '.' || c == '!' || c == '?';
}

bool IsTerminalPunct(char c) { return c == '.' || c == '!' || c == '?'; }

int DaysInMonth(int month, int year) {
  static constexpr std::array<int, 12> kDays = {31, 28, 31, 30, 31, 30,
                                                31, 31, 30, 31, 30, 31};
  bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
  return month == 1 && leap ? 29 : kDays[month];
}

std::string GenerateDate(Rng& rng) {
  const int year = 1950 + static_cast<int>(rng.UniformInt(2023 - 1950 + 1));
  const int month = static_cast<int>(rng.UniformInt(12));
  std::string date(kMonths[month]);
  if (rng.Bernoulli(0.5)) {
    const int day = 1 + static_cast<int>(rng.UniformInt(DaysInMonth(month, year)));
    date += " " + std::to_string(day) + ",";
  }
  date += " " + std::to_string(year);
  return date;
}

// `k` distinct indices in [0, n), ascending (Floyd's algorithm).
std::vector<std::size_t> SampleDistinct(std::size_t n, std::size_t k, Rng& rng) {
  std::set<std::size_t> chosen;
  for (std::size_t j = n - k; j < n; ++j) {
    const std::size_t t = rng.UniformInt(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  return {chosen.begin(), chosen.end()};
}

std::string JoinWith(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

std::vector<std::string> EnrichConfig::DefaultPrepositions() {
  return {"in",     "on",     "at",    "near",    "by",      "with",
          "under",  "over",   "behind", "beside", "from",    "during",
          "along",  "across", "inside", "outside", "between", "above"};
}

void EnrichConfig::Validate() const {
  auto check_prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw UsageError(std::string("enrich: ") + name + " must lie in [0, 1]");
    }
  };
  check_prob(p_ne, "p_ne");
  check_prob(p_date_loc, "p_date_loc");
  check_prob(p_middle, "p_middle");
  if (plural_ne_count < 2) {
    throw UsageError("enrich: plural_ne_count must be >= 2");
  }
  for (const auto& [type, list] : ne_lists) {
    if (list.empty()) throw UsageError("enrich: empty NE list for type " + type);
  }
  if (!(ne_only_ratio >= 0.0) || !(no_object_ratio >= 0.0)) {
    throw UsageError("enrich: mixing ratios must be non-negative");
  }
}

const char* ManipulationName(Manipulation m) {
  switch (m) {
    case Manipulation::kNeReplace: return "ne_replace";
    case Manipulation::kDateLocBegin: return "date_loc_begin";
    case Manipulation::kDateLocEnd: return "date_loc_end";
    case Manipulation::kDateLocMiddle: return "date_loc_middle";
    case Manipulation::kNeOnly: return "ne_only";
    case Manipulation::kNoObject: return "no_object";
  }
  return "unknown";
}

NeLists BuildNeLists(std::span<const NeSnapshotEntry> snapshot,
                     const Ontology& ontology,
                     std::span<const std::string> requested,
                     std::size_t max_per_type,
                     const std::function<void(const std::string&)>& warn) {
  std::set<std::string, std::less<>> wanted(requested.begin(), requested.end());
  for (const std::string& type : wanted) {
    if (!ontology.Contains(type)) {
      throw UsageError("ne lists: requested type \"" + type +
                       "\" is not in the ontology");
    }
  }
  std::map<std::string, std::set<std::string>, std::less<>> grouped;
  for (const NeSnapshotEntry& e : snapshot) {
    if (!wanted.empty() && !wanted.contains(e.type_id)) continue;
    if (!ontology.Contains(e.type_id)) {
      if (warn) warn("ne lists: skipping unknown type \"" + e.type_id + "\"");
      continue;
    }
    std::string surface = CollapseWhitespace(e.surface);
    if (!surface.empty()) grouped[e.type_id].insert(std::move(surface));
  }
  NeLists lists;
  for (auto& [type, surfaces] : grouped) {
    std::vector<std::string> list(surfaces.begin(), surfaces.end());
    if (max_per_type > 0 && list.size() > max_per_type) list.resize(max_per_type);
    lists.emplace(type, std::move(list));
  }
  for (const std::string& type : wanted) {
    if (!lists.contains(type) && warn) {
      warn("ne lists: no NEs retrieved for type \"" + type +
           "\"; excluded from replacement");
    }
  }
  return lists;
}

TypeSurfaces DefaultTypeSurfaces(const NeLists& lists) {
  TypeSurfaces surfaces;
  for (const auto& [type, list] : lists) {
    surfaces.emplace(RenderHypernym(type), type);
  }
  return surfaces;
}

std::vector<TypeMention> FindTypeMentions(std::string_view caption,
                                          const TypeSurfaces& surfaces) {
  struct Pattern {
    std::vector<std::string> tokens;
    const std::string* type_id;
  };
  std::vector<Pattern> patterns;
  for (const auto& [surface, type] : surfaces) {
    std::vector<std::string> tokens = TokenizeWords(surface);
    if (!tokens.empty()) patterns.push_back({std::move(tokens), &type});
  }
  // Longest first; ties in surface order.
  std::stable_sort(patterns.begin(), patterns.end(),
                   [](const Pattern& a, const Pattern& b) {
                     return a.tokens.size() > b.tokens.size();
                   });

  const std::vector<ByteRange> ranges = WordRanges(caption);
  std::vector<std::string> words;
  words.reserve(ranges.size());
  for (const ByteRange& r : ranges) {
    words.push_back(AsciiLower(caption.substr(r.begin, r.size())));
  }

  auto preceded_by_quantifier = [&](std::size_t i) {
    if (i >= 1) {
      for (std::string_view q : kPluralWords) {
        if (words[i - 1] == q) return true;
      }
    }
    if (i >= 2 && words[i - 1] == "of") {
      for (std::string_view q : kPluralOfHeads) {
        if (words[i - 2] == q) return true;
      }
    }
    return false;
  };

  std::vector<TypeMention> mentions;
  std::size_t i = 0;
  while (i < words.size()) {
    bool matched = false;
    for (const Pattern& p : patterns) {
      const std::size_t n = p.tokens.size();
      if (i + n > words.size()) continue;
      bool ok = true;
      for (std::size_t k = 0; k + 1 < n && ok; ++k) {
        ok = words[i + k] == p.tokens[k];
      }
      if (!ok) continue;
      const std::string& last = words[i + n - 1];
      const std::string& want = p.tokens.back();
      bool plural_form = false;
      if (last != want) {
        if (last == want + "s" || last == want + "es") {
          plural_form = true;
        } else {
          continue;
        }
      }
      mentions.push_back({{ranges[i].begin, ranges[i + n - 1].end},
                          *p.type_id,
                          plural_form || preceded_by_quantifier(i)});
      i += n;
      matched = true;
      break;
    }
    if (!matched) ++i;
  }
  return mentions;
}

EnrichedText EnrichCaption(std::string_view caption,
                           std::span<const TypeMention> mentions,
                           const EnrichConfig& config, Rng& rng) {
  struct Edit {
    ByteRange span;
    std::string replacement;
  };
  std::vector<Edit> edits;
  for (const TypeMention& m : mentions) {
    auto it = config.ne_lists.find(m.type_id);
    if (it == config.ne_lists.end() || it->second.empty()) continue;
    if (!rng.Bernoulli(config.p_ne)) continue;
    const std::vector<std::string>& list = it->second;
    std::size_t count = 1;
    if (m.plural) {
      count = std::min<std::size_t>(config.plural_ne_count, list.size());
    }
    std::vector<std::string> chosen;
    for (std::size_t idx : SampleDistinct(list.size(), count, rng)) {
      chosen.push_back(list[idx]);
    }
    edits.push_back({m.span, JoinWith(chosen, " and ")});
  }

  EnrichedText out;
  if (edits.empty()) {
    out.text = std::string(caption);
    return out;
  }
  std::size_t pos = 0;
  for (const Edit& e : edits) {
    out.text.append(caption.substr(pos, e.span.begin - pos));
    out.text.append(e.replacement);
    pos = e.span.end;
  }
  out.text.append(caption.substr(pos));
  out.fired.push_back(Manipulation::kNeReplace);
  return out;
}

std::string SampleDateOrLocation(const EnrichConfig& config, Rng& rng) {
  const bool have_locations = !config.locations.empty();
  bool use_date = !have_locations || rng.Bernoulli(0.5);
  if (use_date) {
    if (!config.dates.empty()) {
      return config.dates[rng.UniformInt(config.dates.size())];
    }
    return GenerateDate(rng);
  }
  return config.locations[rng.UniformInt(config.locations.size())];
}

EnrichedText InsertDatesLocations(std::string_view text,
                                  const EnrichConfig& config, Rng& rng) {
  // All draws happen up front in a fixed order.
  const bool begin = rng.Bernoulli(config.p_date_loc);
  const bool end = rng.Bernoulli(config.p_date_loc);
  const bool middle = rng.Bernoulli(config.p_middle);

  EnrichedText out;
  out.text = std::string(text);

  if (middle) {
    std::set<std::string, std::less<>> preps;
    for (const std::string& p : config.prepositions) preps.insert(AsciiLower(p));
    // Byte positions to insert before, with whether the slot is punctuation.
    std::vector<std::pair<std::size_t, bool>> slots;
    for (const ByteRange& r : WordRanges(out.text)) {
      if (r.begin > 0 &&
          preps.contains(AsciiLower(std::string_view(out.text).substr(r.begin, r.size())))) {
        slots.emplace_back(r.begin, false);
      }
    }
    for (std::size_t i = 1; i < out.text.size(); ++i) {
      const bool attached = IsWordByte(static_cast<unsigned char>(out.text[i - 1]));
      const bool followed = i + 1 == out.text.size() ||
                            IsSpaceByte(static_cast<unsigned char>(out.text[i + 1]));
      if (IsEligiblePunct(out.text[i]) && attached && followed) {
        slots.emplace_back(i, true);
      }
    }
    std::sort(slots.begin(), slots.end());
    if (!slots.empty()) {
      const auto [at, punct] = slots[rng.UniformInt(slots.size())];
      const std::string insert = SampleDateOrLocation(config, rng);
      out.text.insert(at, punct ? " " + insert : insert + " ");
      out.fired.push_back(Manipulation::kDateLocMiddle);
    }
  }
  if (begin) {
    out.text = SampleDateOrLocation(config, rng) + " " + out.text;
    out.fired.push_back(Manipulation::kDateLocBegin);
  }
  if (end) {
    const std::string insert = ", " + SampleDateOrLocation(config, rng);
    if (!out.text.empty() && IsTerminalPunct(out.text.back())) {
      out.text.insert(out.text.size() - 1, insert);
    } else {
      out.text += insert;
    }
    out.fired.push_back(Manipulation::kDateLocEnd);
  }
  // Keep provenance in a canonical order independent of application order.
  std::sort(out.fired.begin(), out.fired.end());
  return out;
}

TrainingPair MakeNeOnlyPair(const EnrichConfig& config, Rng& rng) {
  std::vector<const std::string*> pool;
  for (const auto& [type, list] : config.ne_lists) {
    for (const std::string& ne : list) pool.push_back(&ne);
  }
  if (pool.empty()) throw UsageError("enrich: NE-only pairs need NE lists");
  const std::size_t count = std::min<std::size_t>(1 + rng.UniformInt(3), pool.size());
  std::vector<std::size_t> picked = SampleDistinct(pool.size(), count, rng);
  // Shuffle so multi-NE sources are not always in list order.
  for (std::size_t i = picked.size(); i > 1; --i) {
    std::swap(picked[i - 1], picked[rng.UniformInt(i)]);
  }
  std::vector<std::string> parts;
  for (std::size_t idx : picked) parts.push_back(*pool[idx]);
  return {JoinWith(parts, ", "), "", {Manipulation::kNeOnly}};
}

TrainingPair MakeNoObjectPair(std::string_view caption,
                              const TypeSurfaces& surfaces,
                              const EnrichConfig& config, Rng& rng) {
  if (!FindTypeMentions(caption, surfaces).empty()) {
    throw UsageError("enrich: no-object caption mentions a configured type: " +
                     std::string(caption));
  }
  EnrichedText enriched = InsertDatesLocations(caption, config, rng);
  TrainingPair pair{std::move(enriched.text), std::string(caption),
                    {Manipulation::kNoObject}};
  pair.provenance.insert(pair.provenance.end(), enriched.fired.begin(),
                         enriched.fired.end());
  return pair;
}

// --- DatasetGenerator -------------------------------------------------------

DatasetGenerator::DatasetGenerator(EnrichConfig config, TypeSurfaces surfaces)
    : config_(std::move(config)), surfaces_(std::move(surfaces)) {
  config_.Validate();
}

bool DatasetGenerator::HasTypeMentions(std::string_view caption) const {
  return !FindTypeMentions(caption, surfaces_).empty();
}

TrainingPair DatasetGenerator::CaptionPair(std::uint64_t index,
                                           std::string_view caption) const {
  Rng rng = Rng::ForKey(config_.seed, kCaptionDomain, index);
  const std::vector<TypeMention> mentions = FindTypeMentions(caption, surfaces_);
  EnrichedText replaced = EnrichCaption(caption, mentions, config_, rng);
  EnrichedText decorated = InsertDatesLocations(replaced.text, config_, rng);
  TrainingPair pair{std::move(decorated.text), std::string(caption),
                    std::move(replaced.fired)};
  pair.provenance.insert(pair.provenance.end(), decorated.fired.begin(),
                         decorated.fired.end());
  return pair;
}

TrainingPair DatasetGenerator::NeOnlyPair(std::uint64_t k) const {
  Rng rng = Rng::ForKey(config_.seed, kNeOnlyDomain, k);
  return MakeNeOnlyPair(config_, rng);
}

TrainingPair DatasetGenerator::NoObjectPair(std::uint64_t k,
                                            std::string_view caption) const {
  Rng rng = Rng::ForKey(config_.seed, kNoObjectDomain, k);
  return MakeNoObjectPair(caption, surfaces_, config_, rng);
}

std::size_t DatasetGenerator::NeOnlyCount(std::size_t corpus_size) const {
  if (config_.ne_lists.empty()) return 0;
  return static_cast<std::size_t>(
      std::llround(config_.ne_only_ratio * static_cast<double>(corpus_size)));
}

std::size_t DatasetGenerator::NoObjectCount(std::size_t corpus_size,
                                            std::size_t pool_size) const {
  const auto wanted = static_cast<std::size_t>(
      std::llround(config_.no_object_ratio * static_cast<double>(corpus_size)));
  return std::min(wanted, pool_size);
}

DatasetGenerator::PoolSelector::PoolSelector(std::uint64_t seed,
                                             std::size_t count,
                                             std::size_t pool_size)
    : rng_(Rng::ForKey(seed, kNoObjectSelectDomain, 0)),
      needed_(std::min(count, pool_size)),
      remaining_(pool_size) {}

bool DatasetGenerator::PoolSelector::Next() {
  if (remaining_ == 0) return false;
  const bool take = rng_.UniformInt(remaining_) < needed_;
  --remaining_;
  if (take) --needed_;
  return take;
}

DatasetGenerator::PoolSelector DatasetGenerator::NoObjectSelector(
    std::size_t count, std::size_t pool_size) const {
  return PoolSelector(config_.seed, count, pool_size);
}

std::vector<TrainingPair> GenerateDataset(
    std::span<const std::string> corpus, const EnrichConfig& config,
    const TypeSurfaces& surfaces,
    std::span<const std::string> no_object_pool) {
  DatasetGenerator generator(config, surfaces);
  std::vector<TrainingPair> pairs;
  std::vector<const std::string*> pool;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    pairs.push_back(generator.CaptionPair(i, corpus[i]));
    if (no_object_pool.empty() && !generator.HasTypeMentions(corpus[i])) {
      pool.push_back(&corpus[i]);
    }
  }
  for (const std::string& c : no_object_pool) {
    if (!generator.HasTypeMentions(c)) pool.push_back(&c);
  }

  const std::size_t ne_only = generator.NeOnlyCount(corpus.size());
  for (std::size_t k = 0; k < ne_only; ++k) {
    pairs.push_back(generator.NeOnlyPair(k));
  }
  const std::size_t no_object = generator.NoObjectCount(corpus.size(), pool.size());
  auto selector = generator.NoObjectSelector(no_object, pool.size());
  std::size_t k = 0;
  for (const std::string* caption : pool) {
    if (selector.Next()) pairs.push_back(generator.NoObjectPair(k++, *caption));
  }
  return pairs;
}

}  // namespace hypernym
