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

#include "hypernym/kb_client.h"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "hypernym/error.h"
#include "hypernym/text.h"

namespace hypernym {
namespace {

using json = nlohmann::json;

std::string Excerpt(std::string_view body) {
  constexpr std::size_t kMax = 200;
  if (body.size() <= kMax) return std::string(body);
  return std::string(body.substr(0, kMax)) + "...";
}

// Values in lookup replies are usually single-element string arrays.
const json* FirstValue(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return nullptr;
  if (it->is_array()) return it->empty() ? nullptr : &it->front();
  return &*it;
}

std::vector<std::string> StringValues(const json& doc, const char* key,
                                      std::string_view body) {
  std::vector<std::string> out;
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return out;
  auto add = [&](const json& v) {
    if (!v.is_string()) {
      throw ParseError(std::string("non-string value in \"") + key + "\"",
                       Excerpt(body));
    }
    out.push_back(v.get<std::string>());
  };
  if (it->is_array()) {
    for (const json& v : *it) add(v);
  } else {
    add(*it);
  }
  return out;
}

std::string StripTags(std::string_view text) {
  std::string out;
  bool in_tag = false;
  for (char c : text) {
    if (c == '<') {
      in_tag = true;
    } else if (c == '>' && in_tag) {
      in_tag = false;
    } else if (!in_tag) {
      out.push_back(c);
    }
  }
  return out;
}

std::string UtcNow() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string NormalizeQuery(std::string_view query) {
  return CollapseWhitespace(query);
}

std::string HexDigest(std::string_view text) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xf]);
  }
  return hex;
}

std::vector<EntityCandidate> ParseLookupResponse(std::string_view body,
                                                 std::string_view type_namespace) {
  json reply = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (reply.is_discarded()) {
    throw ParseError("lookup reply is not valid JSON", Excerpt(body));
  }
  auto docs = reply.find("docs");
  if (!reply.is_object() || docs == reply.end() || !docs->is_array()) {
    throw ParseError("lookup reply has no \"docs\" array", Excerpt(body));
  }

  std::vector<EntityCandidate> candidates;
  for (const json& doc : *docs) {
    if (!doc.is_object()) {
      throw ParseError("lookup doc is not an object", Excerpt(body));
    }
    EntityCandidate c;
    const json* uri = FirstValue(doc, "resource");
    if (uri == nullptr || !uri->is_string()) {
      throw ParseError("lookup doc without \"resource\"", Excerpt(body));
    }
    c.uri = uri->get<std::string>();

    if (const json* score = FirstValue(doc, "score")) {
      if (score->is_number()) {
        c.score = score->get<double>();
      } else if (score->is_string()) {
        const std::string s = score->get<std::string>();
        std::size_t used = 0;
        try {
          c.score = std::stod(s, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used == 0 || used != s.size()) {
          throw ParseError("unparseable score \"" + s + "\"", Excerpt(body));
        }
      } else {
        throw ParseError("score is neither number nor string", Excerpt(body));
      }
    }
    if (!(c.score >= 0.0) || !std::isfinite(c.score)) {
      throw ParseError("negative or non-finite score", Excerpt(body));
    }

    if (const json* label = FirstValue(doc, "label"); label && label->is_string()) {
      c.label = StripTags(label->get<std::string>());
    }

    if (doc.contains("type")) {
      for (const std::string& uri_type : StringValues(doc, "type", body)) {
        if (uri_type.size() > type_namespace.size() &&
            uri_type.compare(0, type_namespace.size(), type_namespace) == 0) {
          c.types.push_back(uri_type.substr(type_namespace.size()));
        }
      }
    } else {
      for (const std::string& name : StringValues(doc, "typeName", body)) {
        std::string id;
        for (char ch : name) {
          if (!IsSpaceByte(static_cast<unsigned char>(ch))) id.push_back(ch);
        }
        if (!id.empty()) c.types.push_back(id);
      }
    }
    candidates.push_back(std::move(c));
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const EntityCandidate& a, const EntityCandidate& b) {
                     return a.score > b.score;
                   });
  return candidates;
}

std::optional<EntityCandidate> SelectEntity(
    std::span<const EntityCandidate> candidates) {
  if (candidates.empty()) return std::nullopt;
  return candidates.front();
}

// --- LookupCache ------------------------------------------------------------

LookupCache::LookupCache(std::filesystem::path dir)
    : dir_(std::move(dir)), mu_(std::make_unique<std::shared_mutex>()) {}

std::filesystem::path LookupCache::PathFor(std::string_view key) const {
  return dir_ / (HexDigest(key) + ".json");
}

std::optional<LookupCache::Entry> LookupCache::Get(std::string_view key) const {
  const std::filesystem::path path = PathFor(key);
  std::string raw;
  {
    std::shared_lock lock(*mu_);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    raw = ss.str();
  }
  json stored = json::parse(raw, nullptr, /*allow_exceptions=*/false);
  if (stored.is_discarded() || !stored.is_object() ||
      !stored.contains("key") || !stored.contains("response") ||
      !stored["key"].is_string() || !stored["response"].is_string()) {
    throw DataError("corrupt cache entry " + path.string());
  }
  Entry entry{stored["key"].get<std::string>(),
              stored.value("fetched_at", std::string()),
              stored["response"].get<std::string>()};
  if (entry.key != key) {
    throw DataError("cache entry " + path.string() + " holds key \"" +
                    entry.key + "\", expected \"" + std::string(key) + "\"");
  }
  return entry;
}

void LookupCache::Put(std::string_view key, std::string_view response) {
  const std::filesystem::path path = PathFor(key);
  json stored = {{"key", std::string(key)},
                 {"fetched_at", UtcNow()},
                 {"response", std::string(response)}};
  std::unique_lock lock(*mu_);
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create cache dir " + dir_.string() + ": " + ec.message());
  std::ostringstream tmp_name;
  tmp_name << path.string() << ".tmp." << std::this_thread::get_id();
  const std::filesystem::path tmp = tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << stored.dump() << '\n';
    if (!out) throw IoError("cannot write cache entry " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot commit cache entry " + path.string() + ": " + ec.message());
}

// --- RateLimiter ------------------------------------------------------------

RateLimiter::RateLimiter(double requests_per_second, double burst)
    : rate_(requests_per_second),
      burst_(std::max(1.0, burst)),
      tokens_(std::max(1.0, burst)),
      last_(Clock::now()) {}

void RateLimiter::Acquire() {
  if (rate_ <= 0.0) return;
  std::unique_lock lock(mu_);
  while (true) {
    const Clock::time_point now = Clock::now();
    const double elapsed = std::chrono::duration<double>(now - last_).count();
    tokens_ = std::min(burst_, tokens_ + elapsed * rate_);
    last_ = now;
    if (tokens_ >= 1.0) {
      tokens_ -= 1.0;
      return;
    }
    const double wait = (1.0 - tokens_) / rate_;
    // Sleeping under the lock serializes waiters in arrival order.
    std::this_thread::sleep_for(std::chrono::duration<double>(wait));
  }
}

// --- KbClient ---------------------------------------------------------------

KbClient::KbClient(KbClientOptions options, std::optional<LookupCache> cache,
                   LookupMode mode)
    : options_(std::move(options)),
      cache_(std::move(cache)),
      mode_(mode),
      limiter_(options_.rate_limit) {
  const std::string& url = options_.base_url;
  const std::size_t scheme_end = url.find("://");
  const std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  const std::size_t path_start = url.find('/', host_start);
  scheme_host_port_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (options_.max_attempts < 1) throw UsageError("kb: max_attempts must be >= 1");
}

int KbClient::requests_sent() const {
  std::lock_guard lock(stats_mu_);
  return requests_sent_;
}

std::string KbClient::FetchOnce(
    const std::vector<std::pair<std::string, std::string>>& params) {
  if (mode_ == LookupMode::kOffline) {
    throw UsageError("kb: network access attempted in offline mode");
  }
  limiter_.Acquire();
  {
    std::lock_guard lock(stats_mu_);
    ++requests_sent_;
  }
  httplib::Client client(scheme_host_port_);
  const auto timeout = std::chrono::duration<double>(options_.timeout_seconds);
  const auto sec = static_cast<time_t>(timeout.count());
  const auto usec = static_cast<time_t>((timeout.count() - sec) * 1e6);
  client.set_connection_timeout(sec, usec);
  client.set_read_timeout(sec, usec);
  client.set_follow_location(true);

  httplib::Params query;
  for (const auto& [k, v] : params) query.emplace(k, v);
  httplib::Headers headers = {{"Accept", "application/json"}};
  httplib::Result res = client.Get(path_, query, headers);
  if (!res) {
    throw TransportError("kb: request to " + options_.base_url + " failed: " +
                         httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw TransportError("kb: " + options_.base_url + " returned HTTP " +
                         std::to_string(res->status));
  }
  return res->body;
}

std::string KbClient::Fetch(
    const std::vector<std::pair<std::string, std::string>>& params) {
  for (int attempt = 1;; ++attempt) {
    try {
      return FetchOnce(params);
    } catch (const TransportError&) {
      if (attempt >= options_.max_attempts) throw;
      const double delay =
          options_.backoff_base_seconds * std::pow(2.0, attempt - 1);
      std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    }
  }
}

std::vector<EntityCandidate> KbClient::CachedFetch(
    const std::string& key,
    const std::vector<std::pair<std::string, std::string>>& params) {
  if (cache_) {
    if (auto hit = cache_->Get(key)) {
      return ParseLookupResponse(hit->response, options_.type_namespace);
    }
    if (mode_ == LookupMode::kOffline) {
      throw CacheMissError(key, cache_->PathFor(key).string());
    }
  } else if (mode_ == LookupMode::kOffline) {
    throw CacheMissError(key, "<no cache directory configured>");
  }
  std::string body = Fetch(params);
  // Validate before persisting so a malformed reply never enters the cache.
  std::vector<EntityCandidate> candidates =
      ParseLookupResponse(body, options_.type_namespace);
  if (cache_) cache_->Put(key, body);
  return candidates;
}

std::vector<EntityCandidate> KbClient::Lookup(std::string_view query) {
  const std::string key = NormalizeQuery(query);
  if (key.empty()) throw UsageError("kb: empty lookup query");
  return CachedFetch(key, {{options_.query_param, key},
                           {"format", "JSON"},
                           {"maxResults", std::to_string(options_.max_results)}});
}

std::vector<EntityCandidate> KbClient::LookupByType(std::string_view type_id) {
  if (type_id.empty()) throw UsageError("kb: empty type id");
  const std::string type(type_id);
  return CachedFetch("type:" + type,
                     {{options_.type_param, type},
                      {"format", "JSON"},
                      {"maxResults", std::to_string(options_.max_results)}});
}

}  // namespace hypernym
