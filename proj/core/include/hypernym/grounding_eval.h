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

#ifndef HYPERNYM_GROUNDING_EVAL_H_
#define HYPERNYM_GROUNDING_EVAL_H_

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "hypernym/grounding.h"
#include "hypernym/mentions.h"

namespace hypernym {

// Uniform rows x cols partition of a width x height image. Cell i is at row
// i / cols, column i % cols, matching the region order of attention maps.
struct Grid {
  int rows = 1;
  int cols = 1;
  double width = 1.0;
  double height = 1.0;

  std::size_t cells() const { return static_cast<std::size_t>(rows) * cols; }
  double cell_width() const { return width / cols; }
  double cell_height() const { return height / rows; }
  void Validate() const;
};

struct BoundingBox {
  double x_min = 0, y_min = 0, x_max = 0, y_max = 0;
  std::string class_name;

  double Area() const { return (x_max - x_min) * (y_max - y_min); }
};

double IoU(const BoundingBox& a, const BoundingBox& b);

struct ImageGroundTruth {
  std::string image_id;
  double width = 0;
  double height = 0;
  std::vector<BoundingBox> boxes;

  // Throws DataError on degenerate or out-of-bounds boxes.
  void Validate() const;
};

struct Detection {
  std::string image_id;
  std::string class_name;  // the mentioned class
  BoundingBox box;         // geometry of the chosen ground-truth box
  double score = 0;        // mean attention inside the box
  std::size_t box_index = 0;
};

// Attention column of a single-token mention, or the element-wise mean of
// the columns of a multiword mention. Throws UsageError on an out-of-range
// token index or an empty index list.
std::vector<double> MentionMap(const Matrix& attention,
                               std::span<const std::size_t> token_indices);

// Mean of `map` over cells whose centers lie inside `box` (closed bounds).
// A box containing no center falls back to the cell containing its center.
double BoxAverage(std::span<const double> map, const BoundingBox& box,
                  const Grid& grid);

struct BoxChoice {
  std::size_t index = 0;
  double score = 0;
};

// Box with the highest BoxAverage; ties go to the smallest index.
BoxChoice SelectBox(std::span<const BoundingBox> boxes,
                    std::span<const double> map, const Grid& grid);

enum class CandidateScope {
  kAllBoxes,    // every ground-truth box of the image
  kClassBoxes,  // only boxes of the mentioned class
};

struct SelectionOptions {
  CandidateScope scope = CandidateScope::kAllBoxes;
  ExactMatchOptions match;
};

// One caption's grounding output, aligned with its tokens.
struct CaptionGrounding {
  std::string image_id;
  std::string caption_id;
  std::vector<std::string> tokens;  // column j of attention <-> tokens[j]
  Matrix attention;                 // cells x tokens
};

struct CaptionSelections {
  std::set<std::string> mentioned;  // classes extracted from the caption
  std::vector<Detection> detections;
};

// Extracts class mentions from the caption tokens and turns each into a
// detection via MentionMap + SelectBox. The grid is scaled to the image.
CaptionSelections SelectForCaption(const CaptionGrounding& grounding,
                                   const ImageGroundTruth& truth,
                                   const ClassVocabulary& vocabulary,
                                   int grid_rows, int grid_cols,
                                   const SelectionOptions& options = {});

// All-point interpolated average precision of score-ranked hits.
double AveragePrecision(std::span<const bool> ranked_hits, std::size_t num_truth);

struct EvalOptions {
  double iou_threshold = 0.5;
  // Keep only the best-scoring detection per (image, class).
  bool dedupe_per_image = true;
  // Per-image classes mentioned by captions; when set, ground truth of other
  // classes in that image is ignored.
  std::optional<LabelSets> mentioned;
  // Restrict the report and the mean to these classes.
  std::optional<std::set<std::string>> class_subset;
};

struct ClassAP {
  std::string name;
  std::size_t num_truth = 0;
  std::size_t num_detections = 0;
  double ap = 0;
};

struct EvalReport {
  std::vector<ClassAP> classes;  // classes with >= 1 ground-truth instance
  double map = 0;                // unweighted mean over `classes`
};

// Standard detection AP per class: detections ranked by score, greedily
// matched to ground truth at IoU >= threshold, one match per box.
EvalReport Evaluate(std::span<const Detection> detections,
                    std::span<const ImageGroundTruth> truth,
                    const EvalOptions& options = {});

std::string FormatEvalReport(const EvalReport& report);

}  // namespace hypernym

#endif  // HYPERNYM_GROUNDING_EVAL_H_
