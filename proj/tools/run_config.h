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

#ifndef HYPERNYM_TOOLS_RUN_CONFIG_H_
#define HYPERNYM_TOOLS_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace hypernym::cli {

// Resolved run configuration: built-in defaults, overlaid by a config file,
// then the cache-dir environment variable, then command-line flags. Keys are
// dotted paths ("enrich.p_ne"). Every key must exist in the defaults and
// keep its type; anything else is a usage error.
class RunConfig {
 public:
  static constexpr const char* kCacheDirEnv = "HYPERNYM_CACHE_DIR";

  RunConfig();

  static const nlohmann::ordered_json& Defaults();

  void MergeFile(const std::filesystem::path& path);
  void Merge(const nlohmann::ordered_json& overlay, const std::string& origin);
  void Set(std::string_view key, nlohmann::ordered_json value);

  const nlohmann::ordered_json& Get(std::string_view key) const;
  std::string String(std::string_view key) const;
  double Number(std::string_view key) const;
  std::int64_t Integer(std::string_view key) const;
  bool Bool(std::string_view key) const;
  std::vector<std::string> Strings(std::string_view key) const;

  const nlohmann::ordered_json& root() const { return root_; }
  // Single-line JSON of the resolved values.
  std::string Echo() const;

 private:
  nlohmann::ordered_json root_;
};

}  // namespace hypernym::cli

#endif  // HYPERNYM_TOOLS_RUN_CONFIG_H_
