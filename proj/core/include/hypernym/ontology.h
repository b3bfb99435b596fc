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

#ifndef HYPERNYM_ONTOLOGY_H_
#define HYPERNYM_ONTOLOGY_H_

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hypernym {

struct OntologyType {
  std::string id;
  std::string label;
  std::optional<std::string> parent;  // absent only for the root
};

// Rooted type tree, immutable after construction. Every node reaches the
// root through its parent chain; multi-parent inputs are rejected.
class Ontology {
 public:
  struct Edge {
    std::string child;
    std::string parent;
    std::string label;  // empty: derived from the id
  };

  static constexpr std::string_view kDefaultRoot = "Thing";

  // Validates and builds. Throws DataError naming the offending id on a
  // cycle, orphan node, duplicate id, or missing root.
  static Ontology FromEdges(std::string root, std::span<const Edge> edges);

  // Edge-list format, one record per line:
  //   root<TAB><id>
  //   <child_id><TAB><parent_id>[<TAB><label>]
  // Blank lines and lines starting with '#' are skipped.
  static Ontology Parse(std::istream& in, std::string_view source = "<input>");
  static Ontology Load(const std::filesystem::path& path);

  const std::string& root() const { return root_; }
  std::size_t size() const { return nodes_.size(); }
  bool Contains(std::string_view id) const;
  const OntologyType& Get(std::string_view id) const;

  // Edges from the root; the root has depth 0.
  int Depth(std::string_view id) const;

  // `id` first, root last.
  std::vector<std::string> PathToRoot(std::string_view id) const;
  bool IsAncestorOrSelf(std::string_view ancestor, std::string_view id) const;

  // Deepest member of `types`; equal depths resolve to the smallest id.
  std::string MostSpecific(std::span<const std::string> types) const;

  // Deepest node that is an ancestor-or-self of every member of `types`.
  std::string LowestCommonAncestor(std::span<const std::string> types) const;

  // All ids in lexicographic order.
  std::vector<std::string> Ids() const;

 private:
  struct Node {
    OntologyType type;
    int depth = 0;
  };

  const Node& Lookup(std::string_view id) const;

  std::string root_;
  std::map<std::string, Node, std::less<>> nodes_;
};

}  // namespace hypernym

#endif  // HYPERNYM_ONTOLOGY_H_
