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

#ifndef HYPERNYM_CORPUS_METRICS_H_
#define HYPERNYM_CORPUS_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>

namespace hypernym {

struct CorpusStats {
  std::size_t captions = 0;
  std::uint64_t total_tokens = 0;
  std::size_t vocabulary_size = 0;  // distinct unigrams
  double average_length = 0.0;      // unigrams per caption
};

// Maximum-likelihood unigram distribution.
class UnigramDistribution {
 public:
  using Counts = std::map<std::string, std::uint64_t, std::less<>>;

  UnigramDistribution() = default;
  // Throws DataError when `counts` holds no tokens.
  explicit UnigramDistribution(Counts counts);

  double Probability(std::string_view token) const;
  std::uint64_t total() const { return total_; }
  std::size_t size() const { return counts_.size(); }
  const Counts& counts() const { return counts_; }

 private:
  Counts counts_;
  std::uint64_t total_ = 0;
};

// Streaming unigram accumulator. Partial counters built over disjoint chunks
// merge into the same result in any order.
class CorpusCounter {
 public:
  void Add(std::string_view caption);
  void Merge(const CorpusCounter& other);

  std::size_t captions() const { return captions_; }
  // Throws DataError for an empty corpus.
  CorpusStats Stats() const;
  UnigramDistribution Distribution() const;

 private:
  UnigramDistribution::Counts counts_;
  std::size_t captions_ = 0;
  std::uint64_t tokens_ = 0;
};

CorpusStats ComputeCorpusStats(std::span<const std::string> corpus);
UnigramDistribution BuildUnigramDistribution(std::span<const std::string> corpus);

// JSD(P, Q) = KL(P||M)/2 + KL(Q||M)/2 with M = (P + Q)/2, in bits, so the
// result lies in [0, 1]. Exactly symmetric in its arguments.
double JensenShannon(const UnigramDistribution& p, const UnigramDistribution& q);

inline constexpr int kJsdLogBase = 2;

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Clipped n-gram overlap. When neither side has an n-gram of order n, the
// score is 1 for identical token sequences and 0 otherwise.
RougeScore RougeN(std::string_view candidate, std::string_view reference, int n);

// Longest-common-subsequence precision/recall/F1 over tokens.
RougeScore RougeL(std::string_view candidate, std::string_view reference);

}  // namespace hypernym

#endif  // HYPERNYM_CORPUS_METRICS_H_
