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

#include "hypernym/grounding_eval.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "hypernym/error.h"

namespace hypernym {
namespace {

const Grid kGrid4{4, 4, 4.0, 4.0};

BoundingBox Box(double x0, double y0, double x1, double y1, std::string cls = "c") {
  return {x0, y0, x1, y1, std::move(cls)};
}

TEST(IoUTest, Basics) {
  EXPECT_DOUBLE_EQ(IoU(Box(0, 0, 2, 2), Box(0, 0, 2, 2)), 1.0);
  EXPECT_DOUBLE_EQ(IoU(Box(0, 0, 2, 2), Box(1, 0, 3, 2)), 2.0 / 6.0);
  EXPECT_DOUBLE_EQ(IoU(Box(0, 0, 1, 1), Box(2, 2, 3, 3)), 0.0);
}

TEST(BoxAverageTest, ConstantMap) {
  const std::vector<double> map(16, 1.0 / 16);
  for (const BoundingBox& b : {Box(0, 0, 4, 4), Box(1, 1, 2, 2), Box(0.1, 0.1, 0.3, 0.3)}) {
    EXPECT_DOUBLE_EQ(BoxAverage(map, b, kGrid4), 1.0 / 16);
  }
}

TEST(BoxAverageTest, HandPlacedBoxOverCellsFiveAndSix) {
  std::vector<double> map(16);
  for (int i = 0; i < 16; ++i) map[i] = i / 100.0;
  // Centers (1.5, 1.5) and (2.5, 1.5) are the only ones inside.
  EXPECT_NEAR(BoxAverage(map, Box(1.2, 1.1, 2.8, 1.9), kGrid4), (0.05 + 0.06) / 2, 1e-15);
}

TEST(BoxAverageTest, SubCellBoxFallsBackToCenterCell) {
  std::vector<double> map(16, 0.0);
  map[10] = 0.7;  // row 2, col 2
  EXPECT_DOUBLE_EQ(BoxAverage(map, Box(2.1, 2.2, 2.4, 2.3), kGrid4), 0.7);
}

TEST(BoxAverageTest, ScaledGrid) {
  const Grid g{2, 2, 640, 480};
  const std::vector<double> map = {0.1, 0.2, 0.3, 0.4};
  EXPECT_DOUBLE_EQ(BoxAverage(map, Box(320, 240, 640, 480), g), 0.4);
  EXPECT_DOUBLE_EQ(BoxAverage(map, Box(0, 0, 640, 480), g), 0.25);
}

TEST(SelectBoxTest, IndicatorMapPicksItsBox) {
  std::vector<double> map(16, 0.0);
  for (int c : {0, 1, 4, 5}) map[c] = 0.25;
  const std::vector<BoundingBox> boxes = {Box(2, 2, 4, 4), Box(0, 0, 2, 2), Box(0, 0, 4, 4)};
  const BoxChoice c = SelectBox(boxes, map, kGrid4);
  EXPECT_EQ(c.index, 1u);
  EXPECT_DOUBLE_EQ(c.score, 0.25);
}

TEST(SelectBoxTest, TiesGoToFirstAndEmptyThrows) {
  const std::vector<double> map(16, 0.5);
  const std::vector<BoundingBox> boxes = {Box(0, 0, 1, 1), Box(1, 1, 2, 2)};
  EXPECT_EQ(SelectBox(boxes, map, kGrid4).index, 0u);
  EXPECT_THROW(SelectBox({}, map, kGrid4), UsageError);
}

TEST(MentionMapTest, MultiwordIsColumnMean) {
  Matrix a(2, 3);
  a << 0.2, 0.6, 1.0, 0.8, 0.4, 0.0;
  const std::vector<std::size_t> cols = {1, 2};
  const std::vector<double> m = MentionMap(a, cols);
  EXPECT_NEAR(m[0], 0.8, 1e-15);
  EXPECT_NEAR(m[1], 0.2, 1e-15);
  const std::vector<std::size_t> bad = {3};
  EXPECT_THROW(MentionMap(a, bad), UsageError);
  EXPECT_THROW(MentionMap(a, {}), UsageError);
}

// AP as the mean, over true positives, of the best precision at or below
// their rank.
double ApOracle(const std::vector<bool>& hits, std::size_t num_truth) {
  double total = 0;
  for (std::size_t k = 0; k < hits.size(); ++k) {
    if (!hits[k]) continue;
    double best = 0;
    std::size_t tp = 0;
    for (std::size_t j = 0; j < hits.size(); ++j) {
      tp += hits[j];
      if (j >= k) best = std::max(best, static_cast<double>(tp) / (j + 1));
    }
    total += best;
  }
  return num_truth == 0 ? 0 : total / num_truth;
}

TEST(AveragePrecisionTest, AgainstOracle) {
  std::mt19937_64 gen(12);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = gen() % 10;
    std::vector<bool> hits(n);
    std::size_t tp = 0;
    for (std::size_t i = 0; i < n; ++i) tp += hits[i] = gen() % 2;
    const std::size_t truth = tp + gen() % 3;
    std::unique_ptr<bool[]> flat(new bool[n + 1]);
    std::copy(hits.begin(), hits.end(), flat.get());
    EXPECT_NEAR(AveragePrecision({flat.get(), n}, truth), ApOracle(hits, truth), 1e-12);
  }
  const bool perfect[] = {true, true};
  EXPECT_DOUBLE_EQ(AveragePrecision(perfect, 2), 1.0);
  EXPECT_DOUBLE_EQ(AveragePrecision({}, 3), 0.0);
}

std::vector<ImageGroundTruth> TwoBoxFixture() {
  return {{"img1", 10, 10, {Box(0, 0, 5, 5, "dog"), Box(5, 5, 10, 10, "cat")}},
          {"img2", 10, 10, {Box(0, 0, 4, 10, "dog"), Box(6, 0, 10, 10, "cat")}}};
}

Detection Det(const std::string& image, const std::string& cls, const BoundingBox& b,
              double score) {
  return {image, cls, b, score, 0};
}

TEST(EvaluateTest, PerfectDetector) {
  std::vector<Detection> dets;
  for (const auto& gt : TwoBoxFixture()) {
    for (const auto& b : gt.boxes) dets.push_back(Det(gt.image_id, b.class_name, b, 0.9));
  }
  const EvalReport r = Evaluate(dets, TwoBoxFixture());
  ASSERT_EQ(r.classes.size(), 2u);
  EXPECT_DOUBLE_EQ(r.map, 1.0);
}

TEST(EvaluateTest, MissingClassScoresZero) {
  const auto truth = TwoBoxFixture();
  const std::vector<Detection> dets = {Det("img1", "dog", truth[0].boxes[0], 0.5)};
  const EvalReport r = Evaluate(dets, truth);
  EXPECT_DOUBLE_EQ(r.classes[0].ap, 0.0);  // cat
  EXPECT_DOUBLE_EQ(r.classes[1].ap, 0.5);  // dog: one of two found
}

TEST(EvaluateTest, RandomSelectionsMatchBruteForce) {
  const auto truth = TwoBoxFixture();
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Detection> dets;
    for (const auto& gt : truth) {
      for (const std::string cls : {"dog", "cat"}) {
        if (gen() % 4 == 0) continue;
        const BoundingBox& chosen = gt.boxes[gen() % 2];
        dets.push_back(Det(gt.image_id, cls, chosen, (gen() % 1000) / 1000.0 + 1e-3 * dets.size()));
      }
    }
    const EvalReport r = Evaluate(dets, truth);
    // A detection hits when it selected the box of its own class.
    for (const ClassAP& c : r.classes) {
      std::vector<const Detection*> mine;
      for (const auto& d : dets) {
        if (d.class_name == c.name) mine.push_back(&d);
      }
      std::sort(mine.begin(), mine.end(),
                [](const Detection* a, const Detection* b) { return a->score > b->score; });
      std::vector<bool> hits;
      for (const Detection* d : mine) hits.push_back(d->box.class_name == c.name);
      EXPECT_NEAR(c.ap, ApOracle(hits, 2), 1e-12);
    }
  }
}

TEST(EvaluateTest, OrderInvariantAndSubsetStable) {
  auto truth = TwoBoxFixture();
  std::vector<Detection> dets = {
      Det("img1", "dog", truth[0].boxes[0], 0.8), Det("img1", "cat", truth[0].boxes[0], 0.7),
      Det("img2", "dog", truth[1].boxes[1], 0.6), Det("img2", "cat", truth[1].boxes[1], 0.6)};
  const EvalReport base = Evaluate(dets, truth);
  std::mt19937_64 gen(14);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(dets.begin(), dets.end(), gen);
    std::shuffle(truth.begin(), truth.end(), gen);
    EXPECT_DOUBLE_EQ(Evaluate(dets, truth).map, base.map);
  }
  EvalOptions only_dog;
  only_dog.class_subset = std::set<std::string>{"dog"};
  const EvalReport sub = Evaluate(dets, truth, only_dog);
  ASSERT_EQ(sub.classes.size(), 1u);
  EXPECT_DOUBLE_EQ(sub.classes[0].ap, base.classes[1].ap);
  EXPECT_DOUBLE_EQ(sub.map, sub.classes[0].ap);
}

TEST(EvaluateTest, DedupeKeepsBestPerImageAndClass) {
  const auto truth = TwoBoxFixture();
  const std::vector<Detection> dets = {Det("img1", "dog", truth[0].boxes[1], 0.9),
                                       Det("img1", "dog", truth[0].boxes[0], 0.4)};
  EXPECT_DOUBLE_EQ(Evaluate(dets, truth).classes[1].ap, 0.0);
  EvalOptions keep;
  keep.dedupe_per_image = false;
  EXPECT_DOUBLE_EQ(Evaluate(dets, truth, keep).classes[1].ap, 0.25);
}

TEST(EvaluateTest, RestrictToMentionedDropsUnmentionedTruth) {
  const auto truth = TwoBoxFixture();
  const std::vector<Detection> dets = {Det("img1", "dog", truth[0].boxes[0], 0.9)};
  EvalOptions opts;
  opts.mentioned = LabelSets{{"img1", {"dog"}}};
  const EvalReport r = Evaluate(dets, truth, opts);
  ASSERT_EQ(r.classes.size(), 1u);
  EXPECT_DOUBLE_EQ(r.map, 1.0);
}

TEST(SelectForCaptionTest, MultiwordMentionAndScope) {
  const ImageGroundTruth gt{"img", 4, 4, {Box(0, 0, 2, 4, "traffic light"), Box(2, 0, 4, 4, "car")}};
  const ClassVocabulary vocab({"traffic light", "car"});
  CaptionGrounding g{"img", "c1", {"a", "traffic", "light", "near", "a", "car"}, Matrix(4, 6)};
  // 2x2 grid; tokens of "traffic light" attend left, "car" attends right.
  g.attention.setConstant(0.25);
  g.attention.col(1) << 0.5, 0.0, 0.5, 0.0;
  g.attention.col(2) << 0.4, 0.1, 0.4, 0.1;
  g.attention.col(5) << 0.0, 0.5, 0.0, 0.5;
  const CaptionSelections s = SelectForCaption(g, gt, vocab, 2, 2);
  EXPECT_EQ(s.mentioned, (std::set<std::string>{"traffic light", "car"}));
  ASSERT_EQ(s.detections.size(), 2u);
  for (const Detection& d : s.detections) {
    EXPECT_EQ(d.box.class_name, d.class_name);
    if (d.class_name == "traffic light") {
      EXPECT_NEAR(d.score, 0.45, 1e-15);
    }
  }

  // Class scope with no box of the mentioned class yields no detection.
  const ImageGroundTruth only_car{"img", 4, 4, {Box(2, 0, 4, 4, "car")}};
  SelectionOptions scoped;
  scoped.scope = CandidateScope::kClassBoxes;
  const CaptionSelections t = SelectForCaption(g, only_car, vocab, 2, 2, scoped);
  ASSERT_EQ(t.detections.size(), 1u);
  EXPECT_EQ(t.detections[0].class_name, "car");
}

TEST(SelectForCaptionTest, ShapeMismatchIsDataError) {
  const ImageGroundTruth gt{"img", 4, 4, {Box(0, 0, 2, 4, "car")}};
  CaptionGrounding g{"img", "c1", {"car"}, Matrix::Constant(3, 1, 1.0 / 3)};
  EXPECT_THROW(SelectForCaption(g, gt, ClassVocabulary({"car"}), 2, 2), DataError);
}

TEST(GroundTruthTest, ValidateRejectsBadBoxes) {
  ImageGroundTruth gt{"img", 10, 10, {Box(5, 5, 4, 8)}};
  EXPECT_THROW(gt.Validate(), DataError);
  gt.boxes = {Box(0, 0, 11, 5)};
  EXPECT_THROW(gt.Validate(), DataError);
}

}  // namespace
}  // namespace hypernym
