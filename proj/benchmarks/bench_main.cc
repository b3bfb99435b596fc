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

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "hypernym/corpus_metrics.h"
#include "hypernym/enricher.h"
#include "hypernym/grounding.h"
#include "hypernym/grounding_eval.h"

namespace hypernym {
namespace {

GroundingBatch MakeBatch(int pairs, int regions, int tokens, int dim) {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> normal(0.0, 0.2);
  auto random = [&](int rows) {
    Matrix m(rows, dim);
    for (int i = 0; i < m.size(); ++i) m.data()[i] = normal(gen);
    return m;
  };
  GroundingBatch batch;
  for (int k = 0; k < pairs; ++k) batch.push_back({random(regions), random(tokens)});
  return batch;
}

// 7x7 grid regions, 16-token captions, 768-dim embeddings.
void BM_GroundingScore(benchmark::State& state) {
  const GroundingBatch b = MakeBatch(1, 49, 16, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(GroundingScore(b[0]));
}
BENCHMARK(BM_GroundingScore)->Arg(64)->Arg(768);

void BM_TotalLoss(benchmark::State& state) {
  const GroundingBatch b = MakeBatch(static_cast<int>(state.range(0)), 49, 16, 256);
  for (auto _ : state) benchmark::DoNotOptimize(TotalLoss(b));
}
BENCHMARK(BM_TotalLoss)->Arg(4)->Arg(16);

void BM_TotalLossGradient(benchmark::State& state) {
  const GroundingBatch b = MakeBatch(static_cast<int>(state.range(0)), 49, 16, 256);
  for (auto _ : state) benchmark::DoNotOptimize(TotalLossGradient(b));
}
BENCHMARK(BM_TotalLossGradient)->Arg(4)->Arg(16);

std::vector<std::string> SyntheticCorpus(int n, int vocab, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<std::string> corpus;
  for (int i = 0; i < n; ++i) {
    std::string line;
    for (int w = 0; w < 12; ++w) line += "w" + std::to_string(gen() % vocab) + " ";
    corpus.push_back(line);
  }
  return corpus;
}

void BM_JensenShannon(benchmark::State& state) {
  const auto p = BuildUnigramDistribution(SyntheticCorpus(10000, 5000, 1));
  const auto q = BuildUnigramDistribution(SyntheticCorpus(10000, 5000, 2));
  for (auto _ : state) benchmark::DoNotOptimize(JensenShannon(p, q));
}
BENCHMARK(BM_JensenShannon);

void BM_UnigramDistribution(benchmark::State& state) {
  const auto corpus = SyntheticCorpus(10000, 5000, 3);
  for (auto _ : state) benchmark::DoNotOptimize(BuildUnigramDistribution(corpus));
}
BENCHMARK(BM_UnigramDistribution);

void BM_RougeL(benchmark::State& state) {
  const auto a = SyntheticCorpus(1, 50, 4)[0], b = SyntheticCorpus(1, 50, 5)[0];
  for (auto _ : state) benchmark::DoNotOptimize(RougeL(a, b));
}
BENCHMARK(BM_RougeL);

void BM_CaptionPair(benchmark::State& state) {
  EnrichConfig c;
  c.ne_lists = {{"Train", {"Orient Express", "Flying Scotsman", "Mallard"}},
                {"Ship", {"Mayflower", "Cutty Sark"}}};
  c.locations = {"Lisbon", "Osaka", "Lagos"};
  const DatasetGenerator gen(c, DefaultTypeSurfaces(c.ne_lists));
  std::uint64_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gen.CaptionPair(i++, "two trains wait near the ship in the harbour"));
  }
}
BENCHMARK(BM_CaptionPair);

void BM_Evaluate(benchmark::State& state) {
  std::mt19937_64 gen(6);
  std::vector<ImageGroundTruth> truth;
  std::vector<Detection> dets;
  for (int img = 0; img < 1000; ++img) {
    ImageGroundTruth gt{"i" + std::to_string(img), 100, 100, {}};
    for (int k = 0; k < 5; ++k) {
      const double x = gen() % 50, y = gen() % 50;
      gt.boxes.push_back({x, y, x + 40, y + 40, "c" + std::to_string(gen() % 10)});
    }
    for (int k = 0; k < 5; ++k) {
      const BoundingBox& b = gt.boxes[gen() % 5];
      dets.push_back({gt.image_id, gt.boxes[k].class_name, b, (gen() % 1000) / 1000.0, 0});
    }
    truth.push_back(std::move(gt));
  }
  for (auto _ : state) benchmark::DoNotOptimize(Evaluate(dets, truth));
}
BENCHMARK(BM_Evaluate);

}  // namespace
}  // namespace hypernym

BENCHMARK_MAIN();
