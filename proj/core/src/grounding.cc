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

#include "hypernym/grounding.h"

#include <cmath>
#include <string>

#include "hypernym/error.h"

namespace hypernym {
namespace {

void RequireContrastive(const GroundingBatch& batch, std::size_t k) {
  if (batch.size() < 2) {
    throw UsageError("grounding: contrastive losses need at least 2 pairs, got " +
                     std::to_string(batch.size()));
  }
  if (k >= batch.size()) {
    throw UsageError("grounding: pair index " + std::to_string(k) +
                     " out of range for batch of " + std::to_string(batch.size()));
  }
}

double LogSumExp(const Eigen::VectorXd& v) {
  const double m = v.maxCoeff();
  return m + std::log((v.array() - m).exp().sum());
}

Eigen::VectorXd Softmax(const Eigen::VectorXd& v) {
  Eigen::VectorXd e = (v.array() - v.maxCoeff()).exp();
  return e / e.sum();
}

}  // namespace

void EmbeddingBatch::Validate() const {
  if (regions.rows() < 1 || tokens.rows() < 1) {
    throw DataError("grounding: need at least one region and one token");
  }
  if (regions.cols() != tokens.cols() || regions.cols() < 1) {
    throw DataError("grounding: embedding dimensions differ (" +
                    std::to_string(regions.cols()) + " vs " +
                    std::to_string(tokens.cols()) + ")");
  }
  if (!regions.allFinite() || !tokens.allFinite()) {
    throw DataError("grounding: non-finite embedding entry");
  }
}

Matrix DotTable(const EmbeddingBatch& batch) {
  batch.Validate();
  return batch.regions * batch.tokens.transpose();
}

Matrix ColumnSoftmax(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Eigen::Index j = 0; j < logits.cols(); ++j) {
    auto col = logits.col(j);
    Eigen::ArrayXd e = (col.array() - col.maxCoeff()).exp();
    out.col(j) = (e / e.sum()).matrix();
  }
  return out;
}

Matrix AttentionMap(const EmbeddingBatch& batch) {
  return ColumnSoftmax(DotTable(batch));
}

double GroundingScore(const Matrix& regions, const Matrix& tokens) {
  const Matrix dots = regions * tokens.transpose();
  const Matrix attention = ColumnSoftmax(dots);
  return attention.cwiseProduct(dots).sum() / static_cast<double>(tokens.rows());
}

double GroundingScore(const EmbeddingBatch& batch) {
  batch.Validate();
  return GroundingScore(batch.regions, batch.tokens);
}

Matrix ScoreMatrix(const GroundingBatch& batch) {
  for (const EmbeddingBatch& pair : batch) pair.Validate();
  const auto n = static_cast<Eigen::Index>(batch.size());
  Matrix scores(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = 0; l < n; ++l) {
      if (batch[k].regions.cols() != batch[l].tokens.cols()) {
        throw DataError("grounding: batch mixes embedding dimensions");
      }
      scores(k, l) = GroundingScore(batch[k].regions, batch[l].tokens);
    }
  }
  return scores;
}

double LossImage(const GroundingBatch& batch, std::size_t k) {
  RequireContrastive(batch, k);
  const Matrix scores = ScoreMatrix(batch);
  const auto kk = static_cast<Eigen::Index>(k);
  return LogSumExp(scores.row(kk).transpose()) - scores(kk, kk);
}

double LossCaption(const GroundingBatch& batch, std::size_t k) {
  RequireContrastive(batch, k);
  const Matrix scores = ScoreMatrix(batch);
  const auto kk = static_cast<Eigen::Index>(k);
  return LogSumExp(scores.col(kk)) - scores(kk, kk);
}

double TotalLoss(const GroundingBatch& batch, double itm, double mlm) {
  RequireContrastive(batch, 0);
  const Matrix scores = ScoreMatrix(batch);
  double sum = 0.0;
  for (Eigen::Index k = 0; k < scores.rows(); ++k) {
    sum += LogSumExp(scores.row(k).transpose()) - scores(k, k);
    sum += LogSumExp(scores.col(k)) - scores(k, k);
  }
  return sum / static_cast<double>(scores.rows()) + itm + mlm;
}

PairGradient GroundingScoreGradient(const Matrix& regions, const Matrix& tokens) {
  // For column j with dots s and attention a = softmax(s), the column term
  // f_j = sum_i a_i s_i has df_j/ds_k = a_k (1 + s_k - f_j).
  const Matrix dots = regions * tokens.transpose();
  const Matrix attention = ColumnSoftmax(dots);
  const Eigen::RowVectorXd f = attention.cwiseProduct(dots).colwise().sum();
  Matrix g = attention.array() *
             (1.0 + dots.array() - f.replicate(dots.rows(), 1).array());
  g /= static_cast<double>(tokens.rows());
  return {g * tokens, g.transpose() * regions};
}

BatchGradient TotalLossGradient(const GroundingBatch& batch) {
  RequireContrastive(batch, 0);
  const Matrix scores = ScoreMatrix(batch);
  const Eigen::Index n = scores.rows();
  // dL/dM(k, l) = (rowsoftmax(k, l) + colsoftmax(k, l) - 2 [k == l]) / n.
  Matrix upstream(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    upstream.row(k) = Softmax(scores.row(k).transpose()).transpose();
  }
  for (Eigen::Index l = 0; l < n; ++l) {
    upstream.col(l) += Softmax(scores.col(l));
  }
  upstream.diagonal().array() -= 2.0;
  upstream /= static_cast<double>(n);

  BatchGradient grad;
  for (const EmbeddingBatch& pair : batch) {
    grad.regions.push_back(Matrix::Zero(pair.regions.rows(), pair.regions.cols()));
    grad.tokens.push_back(Matrix::Zero(pair.tokens.rows(), pair.tokens.cols()));
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = 0; l < n; ++l) {
      const PairGradient pg = GroundingScoreGradient(batch[k].regions, batch[l].tokens);
      grad.regions[k] += upstream(k, l) * pg.regions;
      grad.tokens[l] += upstream(k, l) * pg.tokens;
    }
  }
  return grad;
}

BatchGradient NumericGradient(
    const std::function<double(const GroundingBatch&)>& f,
    const GroundingBatch& batch, double epsilon) {
  GroundingBatch work = batch;
  BatchGradient grad;
  auto probe = [&](Matrix& m) {
    Matrix g(m.rows(), m.cols());
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const double saved = m(r, c);
        m(r, c) = saved + epsilon;
        const double up = f(work);
        m(r, c) = saved - epsilon;
        const double down = f(work);
        m(r, c) = saved;
        g(r, c) = (up - down) / (2.0 * epsilon);
      }
    }
    return g;
  };
  for (EmbeddingBatch& pair : work) {
    grad.regions.push_back(probe(pair.regions));
    grad.tokens.push_back(probe(pair.tokens));
  }
  return grad;
}

}  // namespace hypernym
