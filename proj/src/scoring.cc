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

#include "asvkit/scoring.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace asvkit {

double CosineWithNorms(std::span<const double> u, double u_norm,
                       std::span<const double> v, double v_norm) {
  const double c = Dot(u, v) / (u_norm * v_norm);
  return std::clamp(c, -1.0, 1.0);
}

double Cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw Error("cosine: dim mismatch " + std::to_string(u.size()) + " vs " +
                std::to_string(v.size()));
  }
  const double nu = L2Norm(u);
  const double nv = L2Norm(v);
  if (!(nu > 0.0) || !(nv > 0.0)) throw Error("cosine: zero-norm vector");
  return CosineWithNorms(u, nu, v, nv);
}

Vector MeanEmbedding(const ChunkEmbeddings& e) {
  const size_t n = e.NumChunks();
  if (n == 0) throw Error("mean embedding: utterance " + e.utt_id + " is empty");
  Vector mean(static_cast<size_t>(e.dim), 0.0);
  for (size_t c = 0; c < n; ++c) {
    auto row = e.Chunk(c);
    for (size_t i = 0; i < mean.size(); ++i) mean[i] += row[i];
  }
  for (double& m : mean) m /= static_cast<double>(n);
  return mean;
}

namespace {

Vector ChunkNorms(const ChunkEmbeddings& e) {
  Vector norms(e.NumChunks());
  for (size_t c = 0; c < norms.size(); ++c) {
    norms[c] = L2Norm(e.Chunk(c));
    if (!(norms[c] > 0.0)) {
      throw Error("cosine: zero-norm vector in utterance " + e.utt_id +
                  " chunk " + std::to_string(c));
    }
  }
  return norms;
}

}  // namespace

PairwiseScore ScorePairwise(const ChunkEmbeddings& enroll,
                            const ChunkEmbeddings& test) {
  if (enroll.dim != test.dim) {
    throw Error("cosine: dim mismatch between " + enroll.utt_id + " and " +
                test.utt_id);
  }
  if (enroll.NumChunks() == 0 || test.NumChunks() == 0) {
    throw Error("pairwise score: utterance without chunks");
  }
  const Vector en = ChunkNorms(enroll);
  const Vector tn = ChunkNorms(test);
  std::vector<double> terms;
  terms.reserve(en.size() * tn.size());
  for (size_t i = 0; i < en.size(); ++i) {
    for (size_t j = 0; j < tn.size(); ++j) {
      terms.push_back(
          CosineWithNorms(enroll.Chunk(i), en[i], test.Chunk(j), tn[j]));
    }
  }
  std::sort(terms.begin(), terms.end());
  CompensatedSum sum;
  for (double t : terms) sum.Add(t);
  PairwiseScore out;
  out.n_pairs = static_cast<int64_t>(terms.size());
  out.value = std::clamp(sum.Value() / static_cast<double>(terms.size()), -1.0,
                         1.0);
  return out;
}

}  // namespace asvkit
