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

#include "asvkit/qmf.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "asvkit/scoring.h"

namespace asvkit {

namespace {

const char* const kEmbeddingStatNames[] = {"l1", "l2", "dim_std",
                                           "crop_std_mean", "crop_std_std"};

double PopulationStd(std::span<const double> v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size()));
}

double Mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::optional<double> RealSide(const AttributeColumn& col,
                               const AttributeValue& v) {
  const double* d = std::get_if<double>(&v);
  if (d == nullptr) return std::nullopt;
  if (col.transform == AttributeTransform::kLog1p) {
    if (!(*d > -1.0)) {
      throw Error("qmf: column " + col.name + " needs values > -1 for log1p");
    }
    return std::log1p(*d);
  }
  return *d;
}

void PushPair(QmfVector* out, double a, double b) {
  out->values.push_back(std::min(a, b));
  out->values.push_back(std::max(a, b));
}

}  // namespace

EmbeddingQmf ComputeEmbeddingQmf(const ChunkEmbeddings& e) {
  const Vector mean = MeanEmbedding(e);
  EmbeddingQmf q;
  for (double m : mean) {
    q.l1_norm += std::abs(m);
    q.l2_norm += m * m;
  }
  q.l2_norm = std::sqrt(q.l2_norm);
  q.std_across_dims = PopulationStd(mean);

  const size_t n = e.NumChunks();
  Vector dim_stds(mean.size());
  // Shifted by the first chunk so identical chunks give exactly zero.
  for (size_t i = 0; i < mean.size(); ++i) {
    const double x0 = e.Chunk(0)[i];
    double shifted_mean = 0.0;
    for (size_t c = 0; c < n; ++c) shifted_mean += e.Chunk(c)[i] - x0;
    shifted_mean /= static_cast<double>(n);
    double ss = 0.0;
    for (size_t c = 0; c < n; ++c) {
      const double d = (e.Chunk(c)[i] - x0) - shifted_mean;
      ss += d * d;
    }
    dim_stds[i] = std::sqrt(ss / static_cast<double>(n));
  }
  q.mean_of_dim_stds = Mean(dim_stds);
  q.std_of_dim_stds = PopulationStd(dim_stds);
  return q;
}

std::vector<std::string> QmfFeatureNames(const AttributeSchema& schema,
                                         bool with_embedding) {
  std::vector<std::string> names;
  for (const auto& col : schema) {
    if (col.transform == AttributeTransform::kMatch) {
      names.push_back(col.name + "_match");
    } else {
      names.push_back(col.name + "_min");
      names.push_back(col.name + "_max");
    }
  }
  if (with_embedding) {
    for (const char* s : kEmbeddingStatNames) {
      names.push_back(std::string("emb_") + s + "_min");
      names.push_back(std::string("emb_") + s + "_max");
    }
  }
  return names;
}

QmfVector BuildTrialQmf(const QmfSide& enroll, const QmfSide& test,
                        const AttributeSchema& schema) {
  if (enroll.attributes.size() != schema.size() ||
      test.attributes.size() != schema.size()) {
    throw Error("qmf: attribute row does not match schema");
  }
  if (enroll.embedding.has_value() != test.embedding.has_value()) {
    throw Error("qmf: embedding statistics present on one side only");
  }
  QmfVector out;
  out.names = QmfFeatureNames(schema, enroll.embedding.has_value());
  const double missing = std::nan("");
  for (size_t k = 0; k < schema.size(); ++k) {
    const auto& col = schema[k];
    if (col.transform == AttributeTransform::kMatch) {
      const auto* a = std::get_if<std::string>(&enroll.attributes[k]);
      const auto* b = std::get_if<std::string>(&test.attributes[k]);
      out.values.push_back(a != nullptr && b != nullptr && *a == *b ? 1.0
                                                                    : 0.0);
      continue;
    }
    const auto a = RealSide(col, enroll.attributes[k]);
    const auto b = RealSide(col, test.attributes[k]);
    if (a && b) {
      PushPair(&out, *a, *b);
    } else {
      out.values.push_back(missing);
      out.values.push_back(missing);
    }
  }
  if (enroll.embedding) {
    const EmbeddingQmf& a = *enroll.embedding;
    const EmbeddingQmf& b = *test.embedding;
    PushPair(&out, a.l1_norm, b.l1_norm);
    PushPair(&out, a.l2_norm, b.l2_norm);
    PushPair(&out, a.std_across_dims, b.std_across_dims);
    PushPair(&out, a.mean_of_dim_stds, b.mean_of_dim_stds);
    PushPair(&out, a.std_of_dim_stds, b.std_of_dim_stds);
  }
  return out;
}

FeatureTable BuildQmfTable(const std::vector<Trial>& trials,
                           const AttributeTable* attributes,
                           const EmbeddingStore* store) {
  static const AttributeSchema kNoSchema;
  const AttributeSchema& schema = attributes ? attributes->columns : kNoSchema;
  FeatureTable table;
  table.names = QmfFeatureNames(schema, store != nullptr);

  std::unordered_map<std::string, EmbeddingQmf> emb_cache;
  auto side = [&](const std::string& utt) {
    QmfSide s;
    if (attributes != nullptr) {
      const auto* row = attributes->Find(utt);
      if (row == nullptr) throw Error("qmf: no attributes for utterance " + utt);
      s.attributes = *row;
    }
    if (store != nullptr) {
      auto it = emb_cache.find(utt);
      if (it == emb_cache.end()) {
        it = emb_cache.emplace(utt, ComputeEmbeddingQmf(store->At(utt))).first;
      }
      s.embedding = it->second;
    }
    return s;
  };
  for (const auto& t : trials) {
    QmfVector q = BuildTrialQmf(side(t.enroll_id), side(t.test_id), schema);
    table.ids.emplace_back(t.enroll_id, t.test_id);
    table.rows.push_back(std::move(q.values));
  }
  return table;
}

std::vector<MinMaxRange> MinMaxFit(const Matrix& rows) {
  if (rows.rows == 0) throw Error("min-max: empty fit set");
  std::vector<MinMaxRange> ranges(rows.cols);
  for (size_t j = 0; j < rows.cols; ++j) {
    double lo = rows(0, j), hi = rows(0, j);
    for (size_t i = 0; i < rows.rows; ++i) {
      const double v = rows(i, j);
      if (!std::isfinite(v)) {
        throw Error("min-max: missing or non-finite value in column " +
                    std::to_string(j));
      }
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    ranges[j] = {lo, hi};
  }
  return ranges;
}

double MinMaxApply(double x, const MinMaxRange& range) {
  const auto [lo, hi] = range;
  if (!(hi > lo)) return 0.5;
  return std::clamp((x - lo) / (hi - lo), 0.0, 1.0);
}

Vector MinMaxApply(std::span<const double> x,
                   const std::vector<MinMaxRange>& ranges) {
  if (x.size() != ranges.size()) throw Error("min-max: width mismatch");
  Vector out(x.size());
  for (size_t j = 0; j < x.size(); ++j) out[j] = MinMaxApply(x[j], ranges[j]);
  return out;
}

void MinMaxApplyInPlace(Matrix* rows, const std::vector<MinMaxRange>& ranges) {
  if (rows->cols != ranges.size()) throw Error("min-max: width mismatch");
  for (size_t i = 0; i < rows->rows; ++i) {
    for (size_t j = 0; j < rows->cols; ++j) {
      (*rows)(i, j) = MinMaxApply((*rows)(i, j), ranges[j]);
    }
  }
}

Vector FeatureMedians(const Matrix& rows) {
  Vector medians(rows.cols);
  std::vector<double> col;
  for (size_t j = 0; j < rows.cols; ++j) {
    col.clear();
    for (size_t i = 0; i < rows.rows; ++i) {
      if (!std::isnan(rows(i, j))) col.push_back(rows(i, j));
    }
    if (col.empty()) {
      throw Error("median: column " + std::to_string(j) + " has no values");
    }
    std::sort(col.begin(), col.end());
    const size_t m = col.size() / 2;
    medians[j] = col.size() % 2 == 1 ? col[m] : 0.5 * (col[m - 1] + col[m]);
  }
  return medians;
}

void ImputeMissing(Matrix* rows, std::span<const double> medians) {
  if (rows->cols != medians.size()) throw Error("impute: width mismatch");
  for (size_t i = 0; i < rows->rows; ++i) {
    for (size_t j = 0; j < rows->cols; ++j) {
      if (std::isnan((*rows)(i, j))) (*rows)(i, j) = medians[j];
    }
  }
}

}  // namespace asvkit
