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

#include <gtest/gtest.h>

#include <set>

#include "hypernym/error.h"
#include "test_support.h"

namespace hypernym {
namespace {

const TypeSurfaces kTrainSurfaces = {{"train", "Train"}};

EnrichConfig TrainConfig(double p_ne) {
  EnrichConfig c;
  c.p_ne = p_ne;
  c.p_date_loc = 0;
  c.p_middle = 0;
  c.ne_lists = {{"Train", {"Class 319/4", "Class 450"}}};
  return c;
}

TEST(FindTypeMentionsTest, SingularPluralAndBoundaries) {
  auto m = FindTypeMentions("a train at the station", kTrainSurfaces);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].type_id, "Train");
  EXPECT_FALSE(m[0].plural);
  EXPECT_EQ(m[0].span, (ByteRange{2, 7}));

  m = FindTypeMentions("a group of trains", kTrainSurfaces);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_TRUE(m[0].plural);

  EXPECT_TRUE(FindTypeMentions("training day", kTrainSurfaces).empty());
}

TEST(FindTypeMentionsTest, QuantifierMakesPlural) {
  const TypeSurfaces s = {{"sheep", "Sheep"}};
  auto m = FindTypeMentions("two sheep", s);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_TRUE(m[0].plural);
  EXPECT_FALSE(FindTypeMentions("a sheep", s)[0].plural);
}

TEST(FindTypeMentionsTest, LongestSurfaceFirst) {
  const TypeSurfaces s = {{"mean of transport", "MeanOfTransport"}, {"transport", "X"}};
  const auto m = FindTypeMentions("a Mean of Transport here", s);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].type_id, "MeanOfTransport");
}

TEST(EnrichCaptionTest, ForcedReplacement) {
  EnrichConfig c = TrainConfig(1.0);
  c.ne_lists = {{"Train", {"Class 319/4"}}};
  Rng rng(1);
  const std::string caption = "a train at the station";
  const EnrichedText e =
      EnrichCaption(caption, FindTypeMentions(caption, kTrainSurfaces), c, rng);
  EXPECT_EQ(e.text, "a Class 319/4 at the station");
  EXPECT_EQ(e.fired, std::vector<Manipulation>{Manipulation::kNeReplace});
}

TEST(EnrichCaptionTest, NeverReplacesAtZero) {
  const EnrichConfig c = TrainConfig(0.0);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const std::string caption = "a train and two trains";
    const EnrichedText e =
        EnrichCaption(caption, FindTypeMentions(caption, kTrainSurfaces), c, rng);
    EXPECT_EQ(e.text, caption);
    EXPECT_TRUE(e.fired.empty());
  }
}

TEST(EnrichCaptionTest, PluralGetsDistinctNes) {
  const EnrichConfig c = TrainConfig(1.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const std::string caption = "a group of trains";
    const EnrichedText e =
        EnrichCaption(caption, FindTypeMentions(caption, kTrainSurfaces), c, rng);
    EXPECT_EQ(e.text, "a group of Class 319/4 and Class 450");
  }
}

TEST(EnrichCaptionTest, MentionsWithoutListAreSkipped) {
  EnrichConfig c = TrainConfig(1.0);
  Rng rng(3);
  const std::string caption = "a ship";
  const TypeSurfaces s = {{"ship", "Ship"}};
  EXPECT_EQ(EnrichCaption(caption, FindTypeMentions(caption, s), c, rng).text, caption);
}

EnrichConfig LocationConfig(double p_date_loc, double p_middle) {
  EnrichConfig c;
  c.p_ne = 0;
  c.p_date_loc = p_date_loc;
  c.p_middle = p_middle;
  c.locations = {"Los Angeles"};
  c.dates = {"Los Angeles"};
  return c;
}

TEST(InsertDatesLocationsTest, ZeroProbabilitiesLeaveTextAlone) {
  Rng rng(9);
  const EnrichedText e = InsertDatesLocations("a boat, on the water.", LocationConfig(0, 0), rng);
  EXPECT_EQ(e.text, "a boat, on the water.");
  EXPECT_TRUE(e.fired.empty());
}

TEST(InsertDatesLocationsTest, BothEnds) {
  Rng rng(9);
  const EnrichedText e = InsertDatesLocations("a boat", LocationConfig(1, 0), rng);
  EXPECT_EQ(e.text, "Los Angeles a boat, Los Angeles");
  EXPECT_EQ(e.fired, (std::vector<Manipulation>{Manipulation::kDateLocBegin,
                                                Manipulation::kDateLocEnd}));
}

TEST(InsertDatesLocationsTest, EndGoesBeforeTerminalPunctuation) {
  Rng rng(2);
  EnrichConfig c = LocationConfig(1, 0);
  const EnrichedText e = InsertDatesLocations("a boat.", c, rng);
  EXPECT_EQ(e.text, "Los Angeles a boat, Los Angeles.");
}

TEST(InsertDatesLocationsTest, MiddleBeforePreposition) {
  EnrichConfig c = LocationConfig(0, 1);
  c.prepositions = {"on"};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const EnrichedText e = InsertDatesLocations("a boat on the water", c, rng);
    EXPECT_EQ(e.text, "a boat Los Angeles on the water");
    EXPECT_EQ(e.fired, std::vector<Manipulation>{Manipulation::kDateLocMiddle});
  }
}

TEST(InsertDatesLocationsTest, MiddleSkippedWithoutSlot) {
  EnrichConfig c = LocationConfig(0, 1);
  c.prepositions = {"on"};
  Rng rng(4);
  EXPECT_EQ(InsertDatesLocations("a red boat", c, rng).text, "a red boat");
}

TEST(SampleDateOrLocationTest, GeneratedDatesLookLikeDates) {
  EnrichConfig c;
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const std::string d = SampleDateOrLocation(c, rng);
    const int year = std::stoi(d.substr(d.size() - 4));
    EXPECT_GE(year, 1950);
    EXPECT_LE(year, 2023);
  }
}

TEST(MakeNeOnlyPairTest, OneToThreeNesAndEmptyTarget) {
  EnrichConfig c;
  c.ne_lists = {{"Train", {"A1", "A2"}}, {"Ship", {"B1", "B2", "B3"}}};
  const std::set<std::string> pool = {"A1", "A2", "B1", "B2", "B3"};
  std::set<std::size_t> counts;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng(seed);
    const TrainingPair p = MakeNeOnlyPair(c, rng);
    EXPECT_EQ(p.target, "");
    EXPECT_EQ(p.provenance, std::vector<Manipulation>{Manipulation::kNeOnly});
    std::set<std::string> parts;
    std::size_t start = 0;
    for (std::size_t comma; (comma = p.source.find(", ", start)) != std::string::npos;
         start = comma + 2) {
      parts.insert(p.source.substr(start, comma - start));
    }
    parts.insert(p.source.substr(start));
    for (const std::string& s : parts) EXPECT_TRUE(pool.contains(s)) << s;
    counts.insert(parts.size());
  }
  EXPECT_EQ(counts, (std::set<std::size_t>{1, 2, 3}));
}

TEST(MakeNoObjectPairTest, RejectsCaptionsWithMentions) {
  EnrichConfig c = LocationConfig(1, 0);
  Rng rng(1);
  EXPECT_THROW(MakeNoObjectPair("a train", kTrainSurfaces, c, rng), UsageError);
  const TrainingPair p = MakeNoObjectPair("a dog", kTrainSurfaces, c, rng);
  EXPECT_EQ(p.target, "a dog");
  EXPECT_EQ(p.provenance.front(), Manipulation::kNoObject);
}

TEST(EnrichConfigTest, Validation) {
  EnrichConfig c;
  c.p_ne = 1.5;
  EXPECT_THROW(c.Validate(), UsageError);
  c = EnrichConfig();
  c.plural_ne_count = 1;
  EXPECT_THROW(c.Validate(), UsageError);
  c = EnrichConfig();
  c.ne_lists = {{"Train", {}}};
  EXPECT_THROW(c.Validate(), UsageError);
}

TEST(BuildNeListsTest, GroupsSortsAndWarns) {
  const Ontology o = Ontology::Load(testing::DataPath("ontology.tsv"));
  const std::vector<NeSnapshotEntry> snapshot = {
      {"Train", "Mallard"}, {"Train", "Class 450"}, {"Train", "Mallard"}, {"Bogus", "X"}};
  std::vector<std::string> warnings;
  const std::vector<std::string> requested = {"Train", "Ship"};
  const NeLists lists = BuildNeLists(snapshot, o, requested, 0,
                                     [&](const std::string& w) { warnings.push_back(w); });
  ASSERT_EQ(lists.size(), 1u);
  EXPECT_EQ(lists.at("Train"), (std::vector<std::string>{"Class 450", "Mallard"}));
  EXPECT_FALSE(warnings.empty());
  const std::vector<std::string> bad = {"Spaceship"};
  EXPECT_THROW(BuildNeLists(snapshot, o, bad, 0), UsageError);
  EXPECT_EQ(BuildNeLists(snapshot, o, {}, 1).at("Train").size(), 1u);
}

std::vector<std::string> SmallCorpus() {
  return {"a train at the station", "two trains near the bridge", "a dog on the grass",
          "a ship in the harbour", "passengers board a train, at dawn", "a cat sleeps",
          "a fleet of ships", "people on a platform"};
}

EnrichConfig DatasetConfig(std::uint64_t seed) {
  EnrichConfig c;
  c.seed = seed;
  c.ne_lists = {{"Train", {"Class 319/4", "Class 450", "Mallard"}},
                {"Ship", {"Cutty Sark", "Vasa"}}};
  c.locations = {"Lisbon", "Kyoto"};
  c.ne_only_ratio = 0.25;
  c.no_object_ratio = 0.25;
  return c;
}

TEST(GenerateDatasetTest, DeterministicAndSeedSensitive) {
  const auto corpus = SmallCorpus();
  const EnrichConfig c = DatasetConfig(7);
  const TypeSurfaces s = DefaultTypeSurfaces(c.ne_lists);
  const auto a = GenerateDataset(corpus, c, s);
  EXPECT_EQ(a, GenerateDataset(corpus, c, s));
  EXPECT_NE(a, GenerateDataset(corpus, DatasetConfig(8), s));
}

TEST(GenerateDatasetTest, LayoutAndTargets) {
  const auto corpus = SmallCorpus();
  const EnrichConfig c = DatasetConfig(3);
  const TypeSurfaces s = DefaultTypeSurfaces(c.ne_lists);
  const auto pairs = GenerateDataset(corpus, c, s);
  // 8 caption pairs, round(0.25 * 8) NE-only, min(round(0.25 * 8), 3 mention-free).
  ASSERT_EQ(pairs.size(), 8u + 2u + 2u);
  for (std::size_t i = 0; i < corpus.size(); ++i) EXPECT_EQ(pairs[i].target, corpus[i]);
  for (std::size_t i = 8; i < 10; ++i) {
    EXPECT_EQ(pairs[i].provenance.front(), Manipulation::kNeOnly);
    EXPECT_EQ(pairs[i].target, "");
  }
  const std::set<std::string> free = {"a dog on the grass", "a cat sleeps",
                                      "people on a platform"};
  for (std::size_t i = 10; i < 12; ++i) {
    EXPECT_EQ(pairs[i].provenance.front(), Manipulation::kNoObject);
    EXPECT_TRUE(free.contains(pairs[i].target)) << pairs[i].target;
  }
}

TEST(GenerateDatasetTest, CaptionPairsDependOnlyOnIndex) {
  const EnrichConfig c = DatasetConfig(5);
  const DatasetGenerator g(c, DefaultTypeSurfaces(c.ne_lists));
  const auto corpus = SmallCorpus();
  const auto all = GenerateDataset(corpus, c, g.surfaces());
  for (std::size_t i = corpus.size(); i-- > 0;) {
    EXPECT_EQ(g.CaptionPair(i, corpus[i]), all[i]);
  }
}

TEST(PoolSelectorTest, SelectsExactlyCount) {
  for (std::size_t pool = 0; pool < 30; ++pool) {
    for (std::size_t count = 0; count <= pool; count += 3) {
      DatasetGenerator::PoolSelector sel(pool * 31 + count, count, pool);
      std::size_t chosen = 0;
      for (std::size_t i = 0; i < pool; ++i) chosen += sel.Next();
      EXPECT_EQ(chosen, count);
    }
  }
}

}  // namespace
}  // namespace hypernym
