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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <utility>
#include <tuple>

#include "hypernym/error.h"

namespace hypernym {
namespace {

auto RankKey(const Detection& d) {
  return std::make_tuple(-d.score, std::cref(d.image_id), d.box.x_min, d.box.y_min,
                         d.box.x_max, d.box.y_max, d.box_index);
}

}  // namespace

void Grid::Validate() const {
  if (rows < 1 || cols < 1) throw UsageError("grid: rows and cols must be >= 1");
  if (!(width > 0) || !(height > 0)) {
    throw DataError("grid: image size must be positive");
  }
}

double IoU(const BoundingBox& a, const BoundingBox& b) {
  const double w = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double h = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (w <= 0 || h <= 0) return 0.0;
  const double inter = w * h;
  return inter / (a.Area() + b.Area() - inter);
}

void ImageGroundTruth::Validate() const {
  if (!(width > 0) || !(height > 0)) {
    throw DataError("image \"" + image_id + "\": size must be positive");
  }
  for (const BoundingBox& b : boxes) {
    if (!(b.x_min < b.x_max) || !(b.y_min < b.y_max) || b.x_min < 0 ||
        b.y_min < 0 || b.x_max > width || b.y_max > height) {
      throw DataError("image \"" + image_id + "\": invalid box for class \"" +
                      b.class_name + "\"");
    }
  }
}

std::vector<double> MentionMap(const Matrix& attention,
                               std::span<const std::size_t> token_indices) {
  if (token_indices.empty()) throw UsageError("mention map: no token indices");
  std::vector<double> map(static_cast<std::size_t>(attention.rows()), 0.0);
  for (std::size_t j : token_indices) {
    if (j >= static_cast<std::size_t>(attention.cols())) {
      throw UsageError("mention map: token index " + std::to_string(j) +
                       " out of range for " + std::to_string(attention.cols()) +
                       " tokens");
    }
    for (Eigen::Index i = 0; i < attention.rows(); ++i) {
      map[i] += attention(i, static_cast<Eigen::Index>(j));
    }
  }
  for (double& v : map) v /= static_cast<double>(token_indices.size());
  return map;
}

double BoxAverage(std::span<const double> map, const BoundingBox& box,
                  const Grid& grid) {
  grid.Validate();
  if (map.size() != grid.cells()) {
    throw DataError("box average: map has " + std::to_string(map.size()) +
                    " cells, grid has " + std::to_string(grid.cells()));
  }
  const double cw = grid.cell_width(), ch = grid.cell_height();
  double sum = 0.0;
  std::size_t count = 0;
  for (int r = 0; r < grid.rows; ++r) {
    const double cy = (r + 0.5) * ch;
    if (cy < box.y_min || cy > box.y_max) continue;
    for (int c = 0; c < grid.cols; ++c) {
      const double cx = (c + 0.5) * cw;
      if (cx < box.x_min || cx > box.x_max) continue;
      sum += map[static_cast<std::size_t>(r) * grid.cols + c];
      ++count;
    }
  }
  if (count > 0) return sum / static_cast<double>(count);

  const double bx = 0.5 * (box.x_min + box.x_max);
  const double by = 0.5 * (box.y_min + box.y_max);
  const int c = std::clamp(static_cast<int>(std::floor(bx / cw)), 0, grid.cols - 1);
  const int r = std::clamp(static_cast<int>(std::floor(by / ch)), 0, grid.rows - 1);
  return map[static_cast<std::size_t>(r) * grid.cols + c];
}

BoxChoice SelectBox(std::span<const BoundingBox> boxes,
                    std::span<const double> map, const Grid& grid) {
  if (boxes.empty()) throw UsageError("select box: no candidate boxes");
  BoxChoice best{0, BoxAverage(map, boxes[0], grid)};
  for (std::size_t i = 1; i < boxes.size(); ++i) {
    const double score = BoxAverage(map, boxes[i], grid);
    if (score > best.score) best = {i, score};
  }
  return best;
}

CaptionSelections SelectForCaption(const CaptionGrounding& grounding,
                                   const ImageGroundTruth& truth,
                                   const ClassVocabulary& vocabulary,
                                   int grid_rows, int grid_cols,
                                   const SelectionOptions& options) {
  const Grid grid{grid_rows, grid_cols, truth.width, truth.height};
  grid.Validate();
  if (static_cast<std::size_t>(grounding.attention.rows()) != grid.cells() ||
      static_cast<std::size_t>(grounding.attention.cols()) != grounding.tokens.size()) {
    throw DataError("caption \"" + grounding.caption_id + "\": attention is " +
                    std::to_string(grounding.attention.rows()) + "x" +
                    std::to_string(grounding.attention.cols()) + ", expected " +
                    std::to_string(grid.cells()) + "x" +
                    std::to_string(grounding.tokens.size()));
  }

  CaptionSelections out;
  for (const ClassMention& m :
       FindClassMentions(grounding.tokens, vocabulary, options.match)) {
    out.mentioned.insert(m.class_name);
    std::vector<std::size_t> columns;
    for (std::size_t j = m.token_begin; j < m.token_end; ++j) columns.push_back(j);
    const std::vector<double> map = MentionMap(grounding.attention, columns);

    std::vector<BoundingBox> candidates;
    std::vector<std::size_t> original_index;
    for (std::size_t b = 0; b < truth.boxes.size(); ++b) {
      if (options.scope == CandidateScope::kClassBoxes &&
          truth.boxes[b].class_name != m.class_name) {
        continue;
      }
      candidates.push_back(truth.boxes[b]);
      original_index.push_back(b);
    }
    if (candidates.empty()) continue;
    const BoxChoice choice = SelectBox(candidates, map, grid);
    Detection d;
    d.image_id = truth.image_id;
    d.class_name = m.class_name;
    d.box = candidates[choice.index];
    d.score = choice.score;
    d.box_index = original_index[choice.index];
    out.detections.push_back(std::move(d));
  }
  return out;
}

double AveragePrecision(std::span<const bool> ranked_hits, std::size_t num_truth) {
  if (num_truth == 0) return 0.0;
  const std::size_t n = ranked_hits.size();
  std::vector<double> precision(n), recall(n);
  std::size_t tp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    tp += ranked_hits[i];
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
    recall[i] = static_cast<double>(tp) / static_cast<double>(num_truth);
  }
  // Monotone precision envelope, then area under the step curve.
  for (std::size_t i = n; i-- > 1;) {
    precision[i - 1] = std::max(precision[i - 1], precision[i]);
  }
  double ap = 0.0, prev_recall = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (recall[i] > prev_recall) {
      ap += (recall[i] - prev_recall) * precision[i];
      prev_recall = recall[i];
    }
  }
  return ap;
}

EvalReport Evaluate(std::span<const Detection> detections,
                    std::span<const ImageGroundTruth> truth,
                    const EvalOptions& options) {
  // (image, class) -> ground-truth boxes.
  std::map<std::pair<std::string, std::string>, std::vector<const BoundingBox*>> gt;
  std::map<std::string, std::size_t> truth_count;
  for (const ImageGroundTruth& image : truth) {
    const std::set<std::string>* allowed = nullptr;
    if (options.mentioned) {
      auto it = options.mentioned->find(image.image_id);
      if (it == options.mentioned->end()) continue;
      allowed = &it->second;
    }
    for (const BoundingBox& b : image.boxes) {
      if (allowed && !allowed->contains(b.class_name)) continue;
      gt[{image.image_id, b.class_name}].push_back(&b);
      ++truth_count[b.class_name];
    }
  }

  std::map<std::string, std::vector<const Detection*>> by_class;
  if (options.dedupe_per_image) {
    std::map<std::pair<std::string, std::string>, const Detection*> best;
    for (const Detection& d : detections) {
      auto [it, inserted] = best.try_emplace({d.image_id, d.class_name}, &d);
      if (!inserted && RankKey(d) < RankKey(*it->second)) it->second = &d;
    }
    for (const auto& [key, d] : best) by_class[d->class_name].push_back(d);
  } else {
    for (const Detection& d : detections) by_class[d.class_name].push_back(&d);
  }

  EvalReport report;
  double sum = 0.0;
  for (const auto& [name, n_truth] : truth_count) {
    if (options.class_subset && !options.class_subset->contains(name)) continue;
    std::vector<const Detection*> ranked = by_class[name];
    std::sort(ranked.begin(), ranked.end(), [](const Detection* a, const Detection* b) {
      return RankKey(*a) < RankKey(*b);
    });
    std::map<const BoundingBox*, bool> matched;
    std::vector<char> hits;
    hits.reserve(ranked.size());
    for (const Detection* d : ranked) {
      auto it = gt.find({d->image_id, name});
      const BoundingBox* best_box = nullptr;
      double best_iou = 0.0;
      if (it != gt.end()) {
        for (const BoundingBox* b : it->second) {
          const double iou = IoU(d->box, *b);
          if (iou > best_iou) best_iou = iou, best_box = b;
        }
      }
      const bool hit = best_box && best_iou >= options.iou_threshold &&
                       !matched[best_box];
      if (hit) matched[best_box] = true;
      hits.push_back(hit);
    }
    std::unique_ptr<bool[]> flat(new bool[hits.size()]);
    for (std::size_t i = 0; i < hits.size(); ++i) flat[i] = hits[i];
    ClassAP entry{name, n_truth, ranked.size(),
                  AveragePrecision({flat.get(), hits.size()}, n_truth)};
    sum += entry.ap;
    report.classes.push_back(std::move(entry));
  }
  if (!report.classes.empty()) {
    report.map = sum / static_cast<double>(report.classes.size());
  }
  return report;
}

std::string FormatEvalReport(const EvalReport& report) {
  std::size_t width = 5;
  for (const ClassAP& c : report.classes) width = std::max(width, c.name.size());
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-*s %8s %10s %8s\n", static_cast<int>(width),
                "class", "truth", "detections", "AP");
  out += line;
  for (const ClassAP& c : report.classes) {
    std::snprintf(line, sizeof(line), "%-*s %8zu %10zu %8.4f\n",
                  static_cast<int>(width), c.name.c_str(), c.num_truth,
                  c.num_detections, c.ap);
    out += line;
  }
  std::snprintf(line, sizeof(line), "%-*s %8s %10s %8.4f\n", static_cast<int>(width),
                "mAP", "", "", report.map);
  out += line;
  return out;
}

}  // namespace hypernym
