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

#ifndef HYPERNYM_ERROR_H_
#define HYPERNYM_ERROR_H_

#include <stdexcept>
#include <string>
#include <utility>

namespace hypernym {

// Broad failure category. The command-line tool maps each category to a
// distinct exit code.
enum class ErrorKind {
  kUsage,    // bad arguments, config keys, or violated preconditions
  kData,     // malformed or inconsistent input data
  kNetwork,  // transport failures and offline cache misses
  kIo,       // filesystem failures
};

inline const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage: return "usage error";
    case ErrorKind::kData: return "data error";
    case ErrorKind::kNetwork: return "network error";
    case ErrorKind::kIo: return "io error";
  }
  return "error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& message)
      : Error(ErrorKind::kUsage, message) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& message)
      : Error(ErrorKind::kData, message) {}
};

// Malformed service payload. Never retried.
class ParseError : public DataError {
 public:
  ParseError(const std::string& message, std::string excerpt)
      : DataError(message + " (payload: " + excerpt + ")"),
        excerpt_(std::move(excerpt)) {}

  const std::string& excerpt() const { return excerpt_; }

 private:
  std::string excerpt_;
};

// Connection failure, timeout, or non-success HTTP status. Retryable.
class TransportError : public Error {
 public:
  explicit TransportError(const std::string& message)
      : Error(ErrorKind::kNetwork, message) {}
};

// Offline lookup for a query that has no cache/fixture entry.
class CacheMissError : public Error {
 public:
  CacheMissError(const std::string& query, const std::string& path)
      : Error(ErrorKind::kNetwork,
              "offline cache miss for query \"" + query + "\" (expected " +
                  path + ")"),
        query_(query) {}

  const std::string& query() const { return query_; }

 private:
  std::string query_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message)
      : Error(ErrorKind::kIo, message) {}
};

}  // namespace hypernym

#endif  // HYPERNYM_ERROR_H_
