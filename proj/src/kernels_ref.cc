// Copyright (c) 2026 The asvkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference kernels. Straight loops, no blocking.

#include <algorithm>
#include <cmath>
#include <string>

#include "asvkit/fusion.h"
#include "asvkit/kernels.h"

namespace asvkit {
namespace kernels {

std::vector<PairwiseScore> ScoreTrialsRef(const EmbeddingStore& store,
                                          const std::vector<Trial>& trials) {
  std::vector<PairwiseScore> out;
  out.reserve(trials.size());
  for (const auto& t : trials) {
    out.push_back(ScorePairwise(store.At(t.enroll_id), store.At(t.test_id)));
  }
  return out;
}

std::vector<ScoreStats> TopNCohortStatsRef(const Matrix& queries,
                                           const Matrix& cohort,
                                           size_t top_n) {
  if (queries.cols != cohort.cols) throw Error("cohort: dim mismatch");
  std::vector<ScoreStats> out;
  Vector scores(cohort.rows);
  for (size_t q = 0; q < queries.rows; ++q) {
    for (size_t c = 0; c < cohort.rows; ++c) {
      scores[c] = Cosine(queries.Row(q), cohort.Row(c));
    }
    out.push_back(TopNStats(scores, top_n));
  }
  return out;
}

Matrix CosineMatrixRef(const Matrix& a, const Matrix& b) {
  if (a.cols != b.cols) throw Error("cosine matrix: dim mismatch");
  Matrix out(a.rows, b.rows);
  for (size_t i = 0; i < a.rows; ++i) {
    for (size_t j = 0; j < b.rows; ++j) {
      out(i, j) = Cosine(a.Row(i), b.Row(j));
    }
  }
  return out;
}

double LogisticObjectiveRef(const Matrix& x, std::span<const double> y,
                            std::span<const double> w, double intercept,
                            std::span<double> grad_w, double* grad_b) {
  const bool want_grad = !grad_w.empty();
  if (want_grad) std::fill(grad_w.begin(), grad_w.end(), 0.0);
  double gb = 0.0;
  double loss = 0.0;
  for (size_t i = 0; i < x.rows; ++i) {
    const double z = intercept + Dot(x.Row(i), w);
    loss += y[i] > 0.5 ? Softplus(-z) : Softplus(z);
    if (want_grad) {
      const double r = Sigmoid(z) - y[i];
      auto row = x.Row(i);
      for (size_t j = 0; j < x.cols; ++j) grad_w[j] += r * row[j];
      gb += r;
    }
  }
  const double n = static_cast<double>(x.rows);
  if (want_grad) {
    for (double& g : grad_w) g /= n;
    if (grad_b != nullptr) *grad_b = gb / n;
  }
  return loss / n;
}

}  // namespace kernels
}  // namespace asvkit
