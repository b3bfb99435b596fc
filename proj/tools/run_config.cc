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

#include "run_config.h"

#include <fstream>
#include <sstream>

#include "hypernym/enricher.h"
#include "hypernym/error.h"
#include "hypernym/kb_client.h"

namespace hypernym::cli {
namespace {

using ojson = nlohmann::ordered_json;

ojson BuildDefaults() {
  const KbClientOptions kb;
  const EnrichConfig enrich;
  ojson d;
  d["seed"] = 0;
  d["jobs"] = 1;
  d["mode"] = "offline";
  d["cache_dir"] = "";
  d["ontology"] = "";
  d["vocabulary"] = "";
  d["format"] = "auto";
  d["kb"] = {{"base_url", kb.base_url},
             {"query_param", kb.query_param},
             {"type_param", kb.type_param},
             {"type_namespace", kb.type_namespace},
             {"max_results", kb.max_results},
             {"rate_limit", kb.rate_limit},
             {"timeout_seconds", kb.timeout_seconds},
             {"max_attempts", kb.max_attempts},
             {"backoff_base_seconds", kb.backoff_base_seconds}};
  d["hypernymize"] = {{"gazetteer", ""}};
  d["enrich"] = {{"p_ne", enrich.p_ne},
                 {"p_date_loc", enrich.p_date_loc},
                 {"p_middle", enrich.p_middle},
                 {"plural_ne_count", enrich.plural_ne_count},
                 {"ne_only_ratio", enrich.ne_only_ratio},
                 {"no_object_ratio", enrich.no_object_ratio},
                 {"ne_snapshot", ""},
                 {"types", ojson::array()},
                 {"max_per_type", 0},
                 {"locations", ""},
                 {"dates", ""},
                 {"prepositions", enrich.prepositions},
                 {"no_object_pool", ""}};
  d["mentions"] = {{"match_plurals", false}, {"labels", ""}, {"threshold", 0.9}};
  d["grounding"] = {{"batch_size", 9}, {"itm", 0.0}, {"mlm", 0.0}, {"attention", false}};
  d["ground_eval"] = {{"grid_rows", 7},
                      {"grid_cols", 7},
                      {"iou_threshold", 0.5},
                      {"dedupe_per_image", true},
                      {"candidate_scope", "all"},
                      {"restrict_to_mentioned", false},
                      {"class_subset", ""}};
  return d;
}

bool SameKind(const ojson& def, const ojson& v) {
  if (def.is_boolean()) return v.is_boolean();
  if (def.is_number_integer()) return v.is_number_integer();
  if (def.is_number()) return v.is_number();
  if (def.is_string()) return v.is_string();
  if (def.is_array()) {
    if (!v.is_array()) return false;
    for (const ojson& e : v) {
      if (!e.is_string()) return false;
    }
    return true;
  }
  return def.is_object() && v.is_object();
}

const char* KindName(const ojson& def) {
  if (def.is_boolean()) return "a boolean";
  if (def.is_number_integer()) return "an integer";
  if (def.is_number()) return "a number";
  if (def.is_string()) return "a string";
  if (def.is_array()) return "a list of strings";
  return "an object";
}

void MergeInto(ojson& target, const ojson& defaults, const ojson& overlay,
               const std::string& prefix, const std::string& origin) {
  for (auto it = overlay.begin(); it != overlay.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!defaults.contains(it.key())) {
      throw UsageError(origin + ": unknown config key \"" + key + "\"");
    }
    const ojson& def = defaults[it.key()];
    if (!SameKind(def, it.value())) {
      throw UsageError(origin + ": config key \"" + key + "\" must be " + KindName(def));
    }
    if (def.is_object()) {
      MergeInto(target[it.key()], def, it.value(), key, origin);
    } else if (def.is_number_float()) {
      target[it.key()] = it.value().get<double>();
    } else {
      target[it.key()] = it.value();
    }
  }
}

std::vector<std::string> SplitKey(std::string_view key) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t dot; (dot = key.find('.', start)) != std::string_view::npos;
       start = dot + 1) {
    parts.emplace_back(key.substr(start, dot - start));
  }
  parts.emplace_back(key.substr(start));
  return parts;
}

}  // namespace

RunConfig::RunConfig() : root_(Defaults()) {}

const ojson& RunConfig::Defaults() {
  static const ojson defaults = BuildDefaults();
  return defaults;
}

void RunConfig::MergeFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  ojson overlay = ojson::parse(buf.str(), nullptr, false);
  if (overlay.is_discarded() || !overlay.is_object()) {
    throw UsageError(path.string() + ": config must be a JSON object");
  }
  Merge(overlay, path.string());
}

void RunConfig::Merge(const ojson& overlay, const std::string& origin) {
  MergeInto(root_, Defaults(), overlay, "", origin);
}

void RunConfig::Set(std::string_view key, ojson value) {
  const std::vector<std::string> parts = SplitKey(key);
  ojson overlay = std::move(value);
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
    ojson wrap = ojson::object();
    wrap[*it] = std::move(overlay);
    overlay = std::move(wrap);
  }
  Merge(overlay, "command line");
}

const ojson& RunConfig::Get(std::string_view key) const {
  const ojson* node = &root_;
  for (const std::string& part : SplitKey(key)) {
    if (!node->is_object() || !node->contains(part)) {
      throw UsageError("unknown config key \"" + std::string(key) + "\"");
    }
    node = &(*node)[part];
  }
  return *node;
}

std::string RunConfig::String(std::string_view key) const {
  return Get(key).get<std::string>();
}

double RunConfig::Number(std::string_view key) const { return Get(key).get<double>(); }

std::int64_t RunConfig::Integer(std::string_view key) const {
  return Get(key).get<std::int64_t>();
}

bool RunConfig::Bool(std::string_view key) const { return Get(key).get<bool>(); }

std::vector<std::string> RunConfig::Strings(std::string_view key) const {
  return Get(key).get<std::vector<std::string>>();
}

std::string RunConfig::Echo() const { return root_.dump(); }

}  // namespace hypernym::cli
