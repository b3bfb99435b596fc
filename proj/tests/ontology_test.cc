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

#include "hypernym/ontology.h"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "hypernym/error.h"
#include "test_support.h"

namespace hypernym {
namespace {

Ontology ParseText(const std::string& text) {
  std::istringstream in(text);
  return Ontology::Parse(in, "inline");
}

TEST(OntologyTest, LoadsSmallTree) {
  const Ontology o = ParseText("root\tThing\nMeanOfTransport\tThing\nTrain\tMeanOfTransport\n");
  EXPECT_EQ(o.size(), 3u);
  EXPECT_EQ(o.root(), "Thing");
  EXPECT_EQ(o.Depth("Thing"), 0);
  EXPECT_EQ(o.Depth("MeanOfTransport"), 1);
  EXPECT_EQ(o.Depth("Train"), 2);
  EXPECT_EQ(o.PathToRoot("Train"),
            (std::vector<std::string>{"Train", "MeanOfTransport", "Thing"}));
}

TEST(OntologyTest, LabelsAndComments) {
  const Ontology o = ParseText("# comment\n\nroot\tThing\nPlace\tThing\tplace name\n");
  EXPECT_EQ(o.Get("Place").label, "place name");
  EXPECT_EQ(o.Get("Place").parent, "Thing");
  EXPECT_FALSE(o.Get("Thing").parent.has_value());
}

TEST(OntologyTest, RejectsSelfLoop) {
  EXPECT_THROW(ParseText("root\tThing\nTrain\tTrain\n"), DataError);
}

TEST(OntologyTest, RejectsCycle) {
  EXPECT_THROW(ParseText("root\tThing\nA\tB\nB\tA\n"), DataError);
}

TEST(OntologyTest, RejectsOrphanAndMissingRoot) {
  EXPECT_THROW(ParseText("root\tThing\nA\tNowhere\n"), DataError);
  EXPECT_THROW(ParseText("A\tThing\n"), DataError);
  EXPECT_THROW(ParseText("root\tThing\nA\tThing\nA\tThing\n"), DataError);
}

TEST(OntologyTest, ErrorNamesOffendingId) {
  try {
    ParseText("root\tThing\nTrain\tTrain\n");
    FAIL() << "expected a DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("Train"), std::string::npos);
  }
}

TEST(OntologyTest, WorkedTypePaths) {
  const Ontology o = Ontology::Load(testing::DataPath("type_paths_ontology.tsv"));
  const std::vector<std::string> train = {"Train", "MeanOfTransport"};
  const std::vector<std::string> person = {"Person", "Athlete", "Cricketer", "Agent"};
  EXPECT_EQ(o.MostSpecific(train), "Train");
  EXPECT_EQ(o.MostSpecific(person), "Cricketer");
  EXPECT_EQ(o.LowestCommonAncestor(train), "MeanOfTransport");
  EXPECT_EQ(o.LowestCommonAncestor(person), "Thing");
  EXPECT_EQ(o.MostSpecific(std::vector<std::string>{"Thing"}), "Thing");
  EXPECT_EQ(o.LowestCommonAncestor(std::vector<std::string>{"Agent"}), "Agent");
}

TEST(OntologyTest, MostSpecificTieBreaksLexicographically) {
  const Ontology o = ParseText("root\tThing\nShip\tThing\nAircraft\tThing\n");
  EXPECT_EQ(o.MostSpecific(std::vector<std::string>{"Ship", "Aircraft"}), "Aircraft");
}

TEST(OntologyTest, UnknownOrEmptyQueriesAreUsageErrors) {
  const Ontology o = Ontology::Load(testing::DataPath("type_paths_ontology.tsv"));
  EXPECT_THROW(o.MostSpecific(std::vector<std::string>{}), UsageError);
  EXPECT_THROW(o.LowestCommonAncestor(std::vector<std::string>{"Nope"}), UsageError);
  EXPECT_THROW(o.Depth("Nope"), UsageError);
}

// Random trees: parent of node i is drawn from nodes [0, i).
Ontology RandomTree(std::mt19937_64& gen, int n) {
  std::vector<Ontology::Edge> edges;
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> parent(0, i - 1);
    edges.push_back({"T" + std::to_string(i), "T" + std::to_string(parent(gen)), ""});
  }
  return Ontology::FromEdges("T0", edges);
}

TEST(OntologyPropertyTest, MostSpecificAndLcaInvariants) {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(gen() % 40);
    const Ontology o = RandomTree(gen, n);
    std::vector<std::string> set;
    const int k = 1 + static_cast<int>(gen() % 5);
    for (int i = 0; i < k; ++i) set.push_back("T" + std::to_string(gen() % n));

    const std::string ms = o.MostSpecific(set);
    const std::string lca = o.LowestCommonAncestor(set);
    for (const std::string& t : set) {
      EXPECT_GE(o.Depth(ms), o.Depth(t));
      // Walk the parent chain explicitly.
      bool found = false;
      for (std::optional<std::string> cur = t; cur; cur = o.Get(*cur).parent) {
        if (*cur == lca) found = true;
      }
      EXPECT_TRUE(found) << lca << " is not an ancestor of " << t;
    }
    EXPECT_EQ(o.MostSpecific(set), ms);
    EXPECT_EQ(o.LowestCommonAncestor(set), lca);
    const std::vector<std::string> single = {set.front()};
    EXPECT_EQ(o.MostSpecific(single), o.LowestCommonAncestor(single));
  }
}

}  // namespace
}  // namespace hypernym
