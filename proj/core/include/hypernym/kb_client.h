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

#ifndef HYPERNYM_KB_CLIENT_H_
#define HYPERNYM_KB_CLIENT_H_

#include <chrono>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hypernym {

struct EntityCandidate {
  std::string uri;
  double score = 0.0;  // service-assigned relevance, >= 0
  std::string label;
  std::vector<std::string> types;  // ontology-local type ids, may be empty

  friend bool operator==(const EntityCandidate&, const EntityCandidate&) = default;
};

// Trims and collapses internal whitespace runs. Case is preserved.
std::string NormalizeQuery(std::string_view query);

// Lowercase hex SHA-256 of `text`.
std::string HexDigest(std::string_view text);

// Parses a lookup-service reply of the form
//   {"docs": [{"resource": [uri], "score": ["12.5"], "label": [text],
//              "type": [type uris...], "typeName": [names...]}, ...]}
// Single values may also appear unwrapped. Highlighting tags in labels are
// stripped; only types under `type_namespace` are kept, as local names.
// Candidates come back in descending score order, ties in service order.
// Throws ParseError on malformed payloads.
std::vector<EntityCandidate> ParseLookupResponse(
    std::string_view body,
    std::string_view type_namespace = "http://dbpedia.org/ontology/");

// The first candidate of a score-ordered list.
std::optional<EntityCandidate> SelectEntity(
    std::span<const EntityCandidate> candidates);

// Persistent response cache: one JSON file per normalized key under `dir`,
// named <sha256(key)>.json, storing the key, a fetch timestamp, and the raw
// service body. Concurrent readers, serialized writers; writes are atomic
// renames so a crashed run never leaves a torn entry.
class LookupCache {
 public:
  struct Entry {
    std::string key;
    std::string fetched_at;  // ISO-8601 UTC
    std::string response;
  };

  explicit LookupCache(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path PathFor(std::string_view key) const;
  std::optional<Entry> Get(std::string_view key) const;
  void Put(std::string_view key, std::string_view response);

 private:
  std::filesystem::path dir_;
  std::unique_ptr<std::shared_mutex> mu_;
};

// Token bucket shared by all callers of one client. A non-positive rate
// disables limiting.
class RateLimiter {
 public:
  explicit RateLimiter(double requests_per_second, double burst = 1.0);
  void Acquire();

 private:
  using Clock = std::chrono::steady_clock;
  double rate_;
  double burst_;
  double tokens_;
  Clock::time_point last_;
  std::mutex mu_;
};

enum class LookupMode { kOnline, kOffline };

struct KbClientOptions {
  std::string base_url = "https://lookup.dbpedia.org/api/search";
  std::string query_param = "query";
  std::string type_param = "typeName";
  std::string type_namespace = "http://dbpedia.org/ontology/";
  int max_results = 20;
  double rate_limit = 4.0;  // requests per second
  double timeout_seconds = 10.0;
  int max_attempts = 3;
  double backoff_base_seconds = 0.5;
};

// Anything that answers NE lookups with score-ordered candidates.
class KnowledgeBase {
 public:
  virtual ~KnowledgeBase() = default;
  virtual std::vector<EntityCandidate> Lookup(std::string_view query) = 0;
};

class KbClient : public KnowledgeBase {
 public:
  // Without a cache, offline mode cannot answer anything.
  KbClient(KbClientOptions options, std::optional<LookupCache> cache,
           LookupMode mode);

  // Cached lookup. Offline: cache only, CacheMissError on a miss. Online:
  // cache hit or fetch-and-write-through.
  std::vector<EntityCandidate> Lookup(std::string_view query) override;

  // Entities typed with `type_id`, through the same cache under the key
  // "type:<type_id>".
  std::vector<EntityCandidate> LookupByType(std::string_view type_id);

  // Uncached service call with rate limiting and retries on transport
  // errors. Returns the raw body.
  std::string Fetch(const std::vector<std::pair<std::string, std::string>>& params);

  LookupMode mode() const { return mode_; }
  const KbClientOptions& options() const { return options_; }
  // Requests actually sent (including retries).
  int requests_sent() const;

 private:
  std::vector<EntityCandidate> CachedFetch(
      const std::string& key,
      const std::vector<std::pair<std::string, std::string>>& params);
  std::string FetchOnce(
      const std::vector<std::pair<std::string, std::string>>& params);

  KbClientOptions options_;
  std::optional<LookupCache> cache_;
  LookupMode mode_;
  RateLimiter limiter_;
  std::string scheme_host_port_;
  std::string path_;
  mutable std::mutex stats_mu_;
  int requests_sent_ = 0;
};

}  // namespace hypernym

#endif  // HYPERNYM_KB_CLIENT_H_
