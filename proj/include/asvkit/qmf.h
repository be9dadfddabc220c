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

// Quality measure features for a trial.
//
// Per-utterance inputs come from two places: attribute columns (ingested
// outputs of external quality/content estimators) and statistics of the
// utterance's chunk embeddings. Per-side values are paired order-free so the
// trial vector is symmetric in enroll/test:
//
//   real column c (identity | log1p)  -> c_min, c_max   over the two sides
//   categorical column c (match)      -> c_match = 1 iff both present, equal
//   embedding statistic s             -> emb_<s>_min, emb_<s>_max
//
// A missing real value on either side makes both c_min and c_max missing
// (NaN); missing values are imputed with fit-set medians before min-max
// normalization.

#ifndef ASVKIT_QMF_H_
#define ASVKIT_QMF_H_

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "asvkit/common.h"
#include "asvkit/dataio.h"

namespace asvkit {

struct EmbeddingQmf {
  double l1_norm = 0.0;           // of the utterance mean embedding
  double l2_norm = 0.0;
  double std_across_dims = 0.0;   // population std of the mean's components
  double mean_of_dim_stds = 0.0;  // per-dim std across chunks, averaged
  double std_of_dim_stds = 0.0;   // ... and their population std
};

EmbeddingQmf ComputeEmbeddingQmf(const ChunkEmbeddings& e);

struct QmfVector {
  std::vector<std::string> names;
  Vector values;  // NaN = missing
};

// One trial side. `attributes` follows schema column order and may be empty
// when the schema is empty.
struct QmfSide {
  std::span<const AttributeValue> attributes;
  std::optional<EmbeddingQmf> embedding;
};

std::vector<std::string> QmfFeatureNames(const AttributeSchema& schema,
                                         bool with_embedding);

QmfVector BuildTrialQmf(const QmfSide& enroll, const QmfSide& test,
                        const AttributeSchema& schema);

// Builds the QMF feature table for a trial list. `attributes` may be null
// (embedding features only); `store` may be null (attribute features only).
FeatureTable BuildQmfTable(const std::vector<Trial>& trials,
                           const AttributeTable* attributes,
                           const EmbeddingStore* store);

using MinMaxRange = std::pair<double, double>;  // (lo, hi)

// Per-column (min, max). Throws on an empty fit set or a missing value.
std::vector<MinMaxRange> MinMaxFit(const Matrix& rows);

// (x - lo) / (hi - lo) clamped to [0, 1]; constant features map to 0.5.
double MinMaxApply(double x, const MinMaxRange& range);
Vector MinMaxApply(std::span<const double> x,
                   const std::vector<MinMaxRange>& ranges);
void MinMaxApplyInPlace(Matrix* rows, const std::vector<MinMaxRange>& ranges);

// Per-column median of the non-missing values (mean of the two middle values
// for even counts). Throws if a column has no values.
Vector FeatureMedians(const Matrix& rows);
void ImputeMissing(Matrix* rows, std::span<const double> medians);

}  // namespace asvkit

#endif  // ASVKIT_QMF_H_
