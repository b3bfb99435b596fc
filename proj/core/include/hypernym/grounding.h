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

#ifndef HYPERNYM_GROUNDING_H_
#define HYPERNYM_GROUNDING_H_

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace hypernym {

using Matrix = Eigen::MatrixXd;

// Region embeddings (n_I x d) and token embeddings (n_C x d) for one
// image-caption pair.
struct EmbeddingBatch {
  Matrix regions;
  Matrix tokens;

  std::size_t num_regions() const { return static_cast<std::size_t>(regions.rows()); }
  std::size_t num_tokens() const { return static_cast<std::size_t>(tokens.rows()); }

  // Throws DataError unless both matrices are non-empty, finite, and share
  // the embedding dimension.
  void Validate() const;
};

// Ordered (image, caption) pairs; pair k's image and caption match, all
// other combinations are negatives.
using GroundingBatch = std::vector<EmbeddingBatch>;

// (i, j) -> <e_i^I, e_j^C>.
Matrix DotTable(const EmbeddingBatch& batch);

// Column-wise softmax of the dot table over regions (n_I x n_C). Each column
// is shifted by its maximum before exponentiation.
Matrix AttentionMap(const EmbeddingBatch& batch);
Matrix ColumnSoftmax(const Matrix& logits);

// <I, C>_G: attention-weighted region-token dot products, averaged over
// tokens.
double GroundingScore(const EmbeddingBatch& batch);
double GroundingScore(const Matrix& regions, const Matrix& tokens);

// (k, l) -> <I_k, C_l>_G over all cross pairs of the batch.
Matrix ScoreMatrix(const GroundingBatch& batch);

// Caption-side contrastive loss of image k: -log softmax over all captions
// of the batch (positive included). Requires at least two pairs.
double LossImage(const GroundingBatch& batch, std::size_t k);
// Image-side counterpart for caption k.
double LossCaption(const GroundingBatch& batch, std::size_t k);

// Mean over pairs of LossImage + LossCaption, plus the externally supplied
// image-text matching and masked-language-model terms.
double TotalLoss(const GroundingBatch& batch, double itm = 0.0, double mlm = 0.0);

// Gradients with respect to every region and token embedding of a batch.
struct BatchGradient {
  std::vector<Matrix> regions;
  std::vector<Matrix> tokens;
};

// d<I, C>_G / dE_I and d<I, C>_G / dE_C for one pair.
struct PairGradient {
  Matrix regions;
  Matrix tokens;
};
PairGradient GroundingScoreGradient(const Matrix& regions, const Matrix& tokens);

// Analytic gradient of TotalLoss (the external terms are constants).
BatchGradient TotalLossGradient(const GroundingBatch& batch);

// Entry-wise central finite differences of `f` around `batch`.
BatchGradient NumericGradient(
    const std::function<double(const GroundingBatch&)>& f,
    const GroundingBatch& batch, double epsilon = 1e-5);

}  // namespace hypernym

#endif  // HYPERNYM_GROUNDING_H_
