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

#include <fstream>
#include <set>
#include <sstream>

#include "hypernym/error.h"
#include "hypernym/text.h"

namespace hypernym {
namespace {

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

void RequireNonEmpty(std::span<const std::string> types, const char* op) {
  if (types.empty()) {
    throw UsageError(std::string(op) + ": empty type set");
  }
}

}  // namespace

Ontology Ontology::FromEdges(std::string root, std::span<const Edge> edges) {
  if (root.empty()) throw DataError("ontology: missing root declaration");

  Ontology ontology;
  ontology.root_ = root;
  ontology.nodes_[root] = Node{{root, CamelCaseToWords(root), std::nullopt}, 0};

  for (const Edge& edge : edges) {
    if (edge.child.empty() || edge.parent.empty()) {
      throw DataError("ontology: empty id in edge \"" + edge.child + "\" -> \"" +
                      edge.parent + "\"");
    }
    if (edge.child == root) {
      throw DataError("ontology: root \"" + root + "\" declared with parent \"" +
                      edge.parent + "\"");
    }
    auto [it, inserted] = ontology.nodes_.try_emplace(edge.child);
    if (!inserted) {
      throw DataError("ontology: duplicate id \"" + edge.child + "\"");
    }
    it->second.type.id = edge.child;
    it->second.type.label =
        edge.label.empty() ? CamelCaseToWords(edge.child) : edge.label;
    it->second.type.parent = edge.parent;
  }

  for (const auto& [id, node] : ontology.nodes_) {
    if (node.type.parent && !ontology.nodes_.contains(*node.type.parent)) {
      throw DataError("ontology: orphan node \"" + *node.type.parent +
                      "\" (referenced as parent of \"" + id +
                      "\" but has no parent and is not the root)");
    }
  }

  // Depths by walking parent chains; a chain longer than the node count, or
  // one that revisits a node, is a cycle.
  for (auto& [id, node] : ontology.nodes_) {
    std::set<std::string_view> seen;
    const Node* cur = &node;
    int depth = 0;
    while (cur->type.parent) {
      if (!seen.insert(cur->type.id).second) {
        throw DataError("ontology: cycle detected at \"" + cur->type.id + "\"");
      }
      cur = &ontology.nodes_.find(*cur->type.parent)->second;
      ++depth;
      if (cur->type.id == id) {
        throw DataError("ontology: cycle detected at \"" + id + "\"");
      }
    }
    node.depth = depth;
  }
  return ontology;
}

Ontology Ontology::Parse(std::istream& in, std::string_view source) {
  std::string root;
  std::vector<Edge> edges;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields = SplitTabs(line);
    if (fields.size() < 2 || fields.size() > 3) {
      throw DataError(std::string(source) + ":" + std::to_string(line_no) +
                      ": expected 2 or 3 tab-separated fields");
    }
    if (fields[0] == "root") {
      if (!root.empty()) {
        throw DataError(std::string(source) + ":" + std::to_string(line_no) +
                        ": duplicate root declaration \"" + fields[1] + "\"");
      }
      root = fields[1];
      continue;
    }
    edges.push_back({fields[0], fields[1], fields.size() == 3 ? fields[2] : ""});
  }
  if (root.empty()) {
    throw DataError(std::string(source) + ": missing root declaration");
  }
  return FromEdges(std::move(root), edges);
}

Ontology Ontology::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open ontology file " + path.string());
  return Parse(in, path.string());
}

bool Ontology::Contains(std::string_view id) const {
  return nodes_.find(id) != nodes_.end();
}

const Ontology::Node& Ontology::Lookup(std::string_view id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) {
    throw UsageError("ontology: unknown type id \"" + std::string(id) + "\"");
  }
  return it->second;
}

const OntologyType& Ontology::Get(std::string_view id) const {
  return Lookup(id).type;
}

int Ontology::Depth(std::string_view id) const { return Lookup(id).depth; }

std::vector<std::string> Ontology::PathToRoot(std::string_view id) const {
  std::vector<std::string> path;
  const Node* cur = &Lookup(id);
  path.push_back(cur->type.id);
  while (cur->type.parent) {
    cur = &nodes_.find(*cur->type.parent)->second;
    path.push_back(cur->type.id);
  }
  return path;
}

bool Ontology::IsAncestorOrSelf(std::string_view ancestor,
                                std::string_view id) const {
  const Node& anc = Lookup(ancestor);
  const Node* cur = &Lookup(id);
  while (cur->depth > anc.depth) {
    cur = &nodes_.find(*cur->type.parent)->second;
  }
  return cur->type.id == anc.type.id;
}

std::string Ontology::MostSpecific(std::span<const std::string> types) const {
  RequireNonEmpty(types, "most_specific");
  const Node* best = nullptr;
  for (const std::string& id : types) {
    const Node& node = Lookup(id);
    if (best == nullptr || node.depth > best->depth ||
        (node.depth == best->depth && node.type.id < best->type.id)) {
      best = &node;
    }
  }
  return best->type.id;
}

std::string Ontology::LowestCommonAncestor(
    std::span<const std::string> types) const {
  RequireNonEmpty(types, "lowest_common_ancestor");
  for (const std::string& id : types) Lookup(id);
  // Common ancestors of a tree node set form a chain; walk the first
  // member's path from deepest to the root and stop at the first hit.
  for (const std::string& candidate : PathToRoot(types.front())) {
    bool shared = true;
    for (const std::string& id : types.subspan(1)) {
      if (!IsAncestorOrSelf(candidate, id)) {
        shared = false;
        break;
      }
    }
    if (shared) return candidate;
  }
  return root_;
}

std::vector<std::string> Ontology::Ids() const {
  std::vector<std::string> ids;
  ids.reserve(nodes_.size());
  for (const auto& [id, node] : nodes_) ids.push_back(id);
  return ids;
}

}  // namespace hypernym
