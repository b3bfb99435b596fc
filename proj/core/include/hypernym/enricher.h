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

#ifndef HYPERNYM_ENRICHER_H_
#define HYPERNYM_ENRICHER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hypernym/ontology.h"
#include "hypernym/rng.h"
#include "hypernym/text.h"

namespace hypernym {

using NeLists = std::map<std::string, std::vector<std::string>, std::less<>>;

// Lowercase type surface ("train", "traffic light") -> type id.
using TypeSurfaces = std::map<std::string, std::string, std::less<>>;

struct EnrichConfig {
  double p_ne = 0.7;
  double p_date_loc = 0.3;
  double p_middle = 0.3;
  std::uint64_t seed = 0;
  int plural_ne_count = 2;
  NeLists ne_lists;
  std::vector<std::string> locations;
  // Empty: dates are generated (year 1950-2023, month name, optional day).
  std::vector<std::string> dates;
  std::vector<std::string> prepositions = DefaultPrepositions();
  // Counts of NE-only and no-object pairs, as fractions of the corpus size.
  double ne_only_ratio = 0.05;
  double no_object_ratio = 0.10;

  static std::vector<std::string> DefaultPrepositions();

  // Throws UsageError on a probability outside [0, 1], plural_ne_count < 2,
  // an empty NE list, or a negative ratio.
  void Validate() const;
};

enum class Manipulation {
  kNeReplace,
  kDateLocBegin,
  kDateLocEnd,
  kDateLocMiddle,
  kNeOnly,
  kNoObject,
};

const char* ManipulationName(Manipulation m);

struct TrainingPair {
  std::string source;  // enriched caption
  std::string target;  // original caption; empty for NE-only pairs
  std::vector<Manipulation> provenance;

  friend bool operator==(const TrainingPair&, const TrainingPair&) = default;
};

struct NeSnapshotEntry {
  std::string type_id;
  std::string surface;
};

// Groups a snapshot by type: each list sorted, deduplicated, and truncated to
// `max_per_type` (0 = unlimited). Every requested type must exist in the
// ontology; requested types with no entries are left out and reported
// through `warn`. An empty `requested` means every type in the snapshot.
NeLists BuildNeLists(std::span<const NeSnapshotEntry> snapshot,
                     const Ontology& ontology,
                     std::span<const std::string> requested,
                     std::size_t max_per_type,
                     const std::function<void(const std::string&)>& warn = {});

// Rendered type name -> type id for every type that has an NE list.
TypeSurfaces DefaultTypeSurfaces(const NeLists& lists);

struct TypeMention {
  ByteRange span;
  std::string type_id;
  bool plural = false;
};

// Whole-token, case-insensitive type mentions, longest first, left to right,
// non-overlapping. A mention is plural when its last token is the surface
// plus "s"/"es", or when it follows a plural quantifier ("two", "several",
// "group of", ...).
std::vector<TypeMention> FindTypeMentions(std::string_view caption,
                                          const TypeSurfaces& surfaces);

struct EnrichedText {
  std::string text;
  std::vector<Manipulation> fired;
};

// Manipulation 1: each mention whose type has a list is independently
// replaced with probability p_ne by one sampled NE, or, when plural, by
// min(plural_ne_count, list size) distinct NEs joined with " and ".
EnrichedText EnrichCaption(std::string_view caption,
                           std::span<const TypeMention> mentions,
                           const EnrichConfig& config, Rng& rng);

// Manipulation 2: independent begin/end insertions with probability
// p_date_loc, and a middle insertion with probability p_middle placed
// immediately before a randomly chosen punctuation mark or preposition.
EnrichedText InsertDatesLocations(std::string_view text,
                                  const EnrichConfig& config, Rng& rng);

// A date string or a location, whichever the config can supply.
std::string SampleDateOrLocation(const EnrichConfig& config, Rng& rng);

// Manipulation 3: 1-3 sampled NEs paired with an empty target.
TrainingPair MakeNeOnlyPair(const EnrichConfig& config, Rng& rng);

// Manipulation 4: dates/locations only. Throws UsageError when the caption
// mentions a configured type.
TrainingPair MakeNoObjectPair(std::string_view caption,
                              const TypeSurfaces& surfaces,
                              const EnrichConfig& config, Rng& rng);

// Deterministic per-record generation. Every pair draws from its own stream
// keyed by (seed, kind, index), so output does not depend on processing
// order or parallelism.
class DatasetGenerator {
 public:
  DatasetGenerator(EnrichConfig config, TypeSurfaces surfaces);

  const EnrichConfig& config() const { return config_; }
  const TypeSurfaces& surfaces() const { return surfaces_; }

  bool HasTypeMentions(std::string_view caption) const;

  // Manipulations 1 + 2 on corpus caption `index`.
  TrainingPair CaptionPair(std::uint64_t index, std::string_view caption) const;
  TrainingPair NeOnlyPair(std::uint64_t k) const;
  TrainingPair NoObjectPair(std::uint64_t k, std::string_view caption) const;

  std::size_t NeOnlyCount(std::size_t corpus_size) const;
  std::size_t NoObjectCount(std::size_t corpus_size, std::size_t pool_size) const;

  // Streaming selection of `count` of `pool_size` candidates, without
  // replacement and in pool order (selection sampling).
  class PoolSelector {
   public:
    PoolSelector(std::uint64_t seed, std::size_t count, std::size_t pool_size);
    bool Next();  // decide for the next pool member

   private:
    Rng rng_;
    std::size_t needed_;
    std::size_t remaining_;
  };
  PoolSelector NoObjectSelector(std::size_t count, std::size_t pool_size) const;

 private:
  EnrichConfig config_;
  TypeSurfaces surfaces_;
};

// In-memory generation: caption pairs in corpus order, then the NE-only
// block, then the no-object block. The no-object pool is the mention-free
// part of `no_object_pool` when that is non-empty, otherwise the corpus
// captions without type mentions.
std::vector<TrainingPair> GenerateDataset(
    std::span<const std::string> corpus, const EnrichConfig& config,
    const TypeSurfaces& surfaces,
    std::span<const std::string> no_object_pool = {});

}  // namespace hypernym

#endif  // HYPERNYM_ENRICHER_H_
