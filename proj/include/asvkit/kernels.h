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

// Data-parallel hot loops. Each kernel has an OpenMP version (kernels_omp.cc)
// and a plain serial reference (kernels_ref.cc, suffix Ref). The reference
// versions are kept for tests and for the benchmark; the library calls the
// OpenMP versions.
//
// ScoreTrials, TopNCohortStats and CosineMatrix compute every output element
// with the same serial code, so the parallel result is bit-identical to the
// reference for any thread count. LogisticObjective reduces over trials in
// fixed-size blocks summed in block order: deterministic for any thread
// count, equal to the reference up to rounding.

#ifndef ASVKIT_KERNELS_H_
#define ASVKIT_KERNELS_H_

#include <span>
#include <vector>

#include "asvkit/common.h"
#include "asvkit/dataio.h"
#include "asvkit/scoring.h"

namespace asvkit {

struct ScoreStats {
  double mean = 0.0;
  double std = 0.0;  // population
};

// Mean and population std of the top_n largest values of `scores`.
ScoreStats TopNStats(std::span<const double> scores, size_t top_n);

namespace kernels {

std::vector<PairwiseScore> ScoreTrials(const EmbeddingStore& store,
                                       const std::vector<Trial>& trials);
std::vector<PairwiseScore> ScoreTrialsRef(const EmbeddingStore& store,
                                          const std::vector<Trial>& trials);

// For each query row: TopNStats of its cosines against every cohort row.
std::vector<ScoreStats> TopNCohortStats(const Matrix& queries,
                                        const Matrix& cohort, size_t top_n);
std::vector<ScoreStats> TopNCohortStatsRef(const Matrix& queries,
                                           const Matrix& cohort, size_t top_n);

// out(i, j) = Cosine(a.Row(i), b.Row(j)).
Matrix CosineMatrix(const Matrix& a, const Matrix& b);
Matrix CosineMatrixRef(const Matrix& a, const Matrix& b);

// Mean logistic loss of logits z_i = intercept + x_i . w against labels
// y_i in {0, 1}. When grad_w is non-null it receives d/dw (size cols) and
// *grad_b d/d(intercept).
double LogisticObjective(const Matrix& x, std::span<const double> y,
                         std::span<const double> w, double intercept,
                         std::span<double> grad_w, double* grad_b);
double LogisticObjectiveRef(const Matrix& x, std::span<const double> y,
                            std::span<const double> w, double intercept,
                            std::span<double> grad_w, double* grad_b);

// Rows per reduction block in LogisticObjective.
inline constexpr size_t kLogisticBlock = 512;

}  // namespace kernels
}  // namespace asvkit

#endif  // ASVKIT_KERNELS_H_
