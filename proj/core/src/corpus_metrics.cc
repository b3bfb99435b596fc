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

#include "hypernym/corpus_metrics.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hypernym/error.h"
#include "hypernym/text.h"

namespace hypernym {
namespace {

RougeScore FromOverlap(double overlap, double cand_total, double ref_total) {
  RougeScore s;
  if (cand_total > 0) s.precision = overlap / cand_total;
  if (ref_total > 0) s.recall = overlap / ref_total;
  if (s.precision + s.recall > 0) {
    s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  }
  return s;
}

std::map<std::vector<std::string>, int> NGrams(const std::vector<std::string>& tokens,
                                               int n) {
  std::map<std::vector<std::string>, int> grams;
  if (tokens.size() < static_cast<std::size_t>(n)) return grams;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++grams[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
  }
  return grams;
}

}  // namespace

UnigramDistribution::UnigramDistribution(Counts counts) : counts_(std::move(counts)) {
  for (const auto& [token, c] : counts_) total_ += c;
  if (total_ == 0) throw DataError("unigram distribution over an empty corpus");
}

double UnigramDistribution::Probability(std::string_view token) const {
  auto it = counts_.find(token);
  if (it == counts_.end()) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(total_);
}

void CorpusCounter::Add(std::string_view caption) {
  ++captions_;
  for (std::string& token : Tokenize(caption)) {
    ++tokens_;
    ++counts_[std::move(token)];
  }
}

void CorpusCounter::Merge(const CorpusCounter& other) {
  captions_ += other.captions_;
  tokens_ += other.tokens_;
  for (const auto& [token, c] : other.counts_) counts_[token] += c;
}

CorpusStats CorpusCounter::Stats() const {
  if (captions_ == 0) throw DataError("corpus statistics over an empty corpus");
  CorpusStats stats;
  stats.captions = captions_;
  stats.total_tokens = tokens_;
  stats.vocabulary_size = counts_.size();
  stats.average_length = static_cast<double>(tokens_) / static_cast<double>(captions_);
  return stats;
}

UnigramDistribution CorpusCounter::Distribution() const {
  return UnigramDistribution(counts_);
}

CorpusStats ComputeCorpusStats(std::span<const std::string> corpus) {
  CorpusCounter counter;
  for (const std::string& c : corpus) counter.Add(c);
  return counter.Stats();
}

UnigramDistribution BuildUnigramDistribution(std::span<const std::string> corpus) {
  CorpusCounter counter;
  for (const std::string& c : corpus) counter.Add(c);
  return counter.Distribution();
}

double JensenShannon(const UnigramDistribution& p, const UnigramDistribution& q) {
  const double p_total = static_cast<double>(p.total());
  const double q_total = static_cast<double>(q.total());
  // Terms are accumulated in sorted token order over the union of supports;
  // each term is symmetric in (p, q), so the sum is bit-for-bit symmetric.
  auto term = [](double a, double b) {
    const double m = 0.5 * (a + b);
    double t = 0.0;
    if (a > 0) t += a * std::log2(a / m);
    if (b > 0) t += b * std::log2(b / m);
    return 0.5 * t;
  };
  double sum = 0.0;
  auto pi = p.counts().begin(), pe = p.counts().end();
  auto qi = q.counts().begin(), qe = q.counts().end();
  while (pi != pe || qi != qe) {
    double a = 0.0, b = 0.0;
    if (qi == qe || (pi != pe && pi->first < qi->first)) {
      a = pi->second / p_total;
      ++pi;
    } else if (pi == pe || qi->first < pi->first) {
      b = qi->second / q_total;
      ++qi;
    } else {
      a = pi->second / p_total;
      b = qi->second / q_total;
      ++pi;
      ++qi;
    }
    sum += term(a, b);
  }
  return std::clamp(sum, 0.0, 1.0);
}

RougeScore RougeN(std::string_view candidate, std::string_view reference, int n) {
  if (n < 1) throw UsageError("rouge: n must be >= 1");
  const std::vector<std::string> cand = Tokenize(candidate);
  const std::vector<std::string> ref = Tokenize(reference);
  const auto cand_grams = NGrams(cand, n);
  const auto ref_grams = NGrams(ref, n);
  if (cand_grams.empty() && ref_grams.empty()) {
    const double v = cand == ref ? 1.0 : 0.0;
    return {v, v, v};
  }
  double overlap = 0, cand_total = 0, ref_total = 0;
  for (const auto& [gram, c] : cand_grams) {
    cand_total += c;
    auto it = ref_grams.find(gram);
    if (it != ref_grams.end()) overlap += std::min(c, it->second);
  }
  for (const auto& [gram, c] : ref_grams) ref_total += c;
  return FromOverlap(overlap, cand_total, ref_total);
}

RougeScore RougeL(std::string_view candidate, std::string_view reference) {
  const std::vector<std::string> cand = Tokenize(candidate);
  const std::vector<std::string> ref = Tokenize(reference);
  if (cand.empty() && ref.empty()) return {1.0, 1.0, 1.0};
  // Two-row LCS table.
  std::vector<std::size_t> prev(ref.size() + 1, 0), cur(ref.size() + 1, 0);
  for (std::size_t i = 1; i <= cand.size(); ++i) {
    for (std::size_t j = 1; j <= ref.size(); ++j) {
      cur[j] = cand[i - 1] == ref[j - 1] ? prev[j - 1] + 1
                                         : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  const double lcs = static_cast<double>(prev[ref.size()]);
  return FromOverlap(lcs, static_cast<double>(cand.size()),
                     static_cast<double>(ref.size()));
}

}  // namespace hypernym
