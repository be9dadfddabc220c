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

#include <algorithm>
#include <cstdint>
#include <exception>
#include <limits>

#include "asvkit/fusion.h"
#include "asvkit/kernels.h"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace asvkit {
namespace kernels {

namespace {

// Exceptions cannot leave an OpenMP region. Workers record the failure with
// the lowest item index, and the caller rethrows it after the loop, so the
// reported error does not depend on scheduling.
class FirstError {
 public:
  void Record(int64_t index) {
#pragma omp critical(asvkit_first_error)
    {
      if (index < index_) {
        index_ = index;
        error_ = std::current_exception();
      }
    }
  }
  void RethrowIfAny() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  int64_t index_ = std::numeric_limits<int64_t>::max();
  std::exception_ptr error_;
};

}  // namespace

std::vector<PairwiseScore> ScoreTrials(const EmbeddingStore& store,
                                       const std::vector<Trial>& trials) {
  const int64_t n = static_cast<int64_t>(trials.size());
  std::vector<PairwiseScore> out(trials.size());
  FirstError err;
#pragma omp parallel for schedule(dynamic, 64)
  for (int64_t i = 0; i < n; ++i) {
    try {
      const auto& t = trials[static_cast<size_t>(i)];
      out[static_cast<size_t>(i)] =
          ScorePairwise(store.At(t.enroll_id), store.At(t.test_id));
    } catch (...) {
      err.Record(i);
    }
  }
  err.RethrowIfAny();
  return out;
}

std::vector<ScoreStats> TopNCohortStats(const Matrix& queries,
                                        const Matrix& cohort, size_t top_n) {
  if (queries.cols != cohort.cols) throw Error("cohort: dim mismatch");
  const int64_t n = static_cast<int64_t>(queries.rows);
  std::vector<ScoreStats> out(queries.rows);
  FirstError err;
#pragma omp parallel
  {
    Vector scores(cohort.rows);
#pragma omp for schedule(dynamic, 16)
    for (int64_t q = 0; q < n; ++q) {
      try {
        const auto query = queries.Row(static_cast<size_t>(q));
        for (size_t c = 0; c < cohort.rows; ++c) {
          scores[c] = Cosine(query, cohort.Row(c));
        }
        out[static_cast<size_t>(q)] = TopNStats(scores, top_n);
      } catch (...) {
        err.Record(q);
      }
    }
  }
  err.RethrowIfAny();
  return out;
}

Matrix CosineMatrix(const Matrix& a, const Matrix& b) {
  if (a.cols != b.cols) throw Error("cosine matrix: dim mismatch");
  Matrix out(a.rows, b.rows);
  const int64_t n = static_cast<int64_t>(a.rows);
  FirstError err;
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < n; ++i) {
    try {
      const size_t r = static_cast<size_t>(i);
      for (size_t j = 0; j < b.rows; ++j) {
        out(r, j) = Cosine(a.Row(r), b.Row(j));
      }
    } catch (...) {
      err.Record(i);
    }
  }
  err.RethrowIfAny();
  return out;
}

double LogisticObjective(const Matrix& x, std::span<const double> y,
                         std::span<const double> w, double intercept,
                         std::span<double> grad_w, double* grad_b) {
  const bool want_grad = !grad_w.empty();
  const size_t d = x.cols;
  const size_t n_blocks = (x.rows + kLogisticBlock - 1) / kLogisticBlock;
  // Per block: d gradient entries, intercept gradient, loss.
  Matrix partial(n_blocks, d + 2);
#pragma omp parallel for schedule(static)
  for (int64_t bi = 0; bi < static_cast<int64_t>(n_blocks); ++bi) {
    auto acc = partial.Row(static_cast<size_t>(bi));
    const size_t begin = static_cast<size_t>(bi) * kLogisticBlock;
    const size_t end = std::min(x.rows, begin + kLogisticBlock);
    for (size_t i = begin; i < end; ++i) {
      const auto row = x.Row(i);
      const double z = intercept + Dot(row, w);
      acc[d + 1] += y[i] > 0.5 ? Softplus(-z) : Softplus(z);
      if (want_grad) {
        const double r = Sigmoid(z) - y[i];
        for (size_t j = 0; j < d; ++j) acc[j] += r * row[j];
        acc[d] += r;
      }
    }
  }
  Vector total(d + 2, 0.0);
  for (size_t bi = 0; bi < n_blocks; ++bi) {
    const auto acc = partial.Row(bi);
    for (size_t j = 0; j < d + 2; ++j) total[j] += acc[j];
  }
  const double n = static_cast<double>(x.rows);
  if (want_grad) {
    for (size_t j = 0; j < d; ++j) grad_w[j] = total[j] / n;
    if (grad_b != nullptr) *grad_b = total[d] / n;
  }
  return total[d + 1] / n;
}

}  // namespace kernels
}  // namespace asvkit
