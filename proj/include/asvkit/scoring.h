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

#ifndef ASVKIT_SCORING_H_
#define ASVKIT_SCORING_H_

#include <cstdint>
#include <span>

#include "asvkit/common.h"
#include "asvkit/dataio.h"

namespace asvkit {

struct PairwiseScore {
  double value = 0.0;    // mean chunk cosine, in [-1, 1]
  int64_t n_pairs = 0;   // n_enroll_chunks * n_test_chunks
};

// u.v / (|u||v|), clamped to [-1, 1]. Throws on dim mismatch or a
// zero-norm argument. Bit-symmetric in its arguments.
double Cosine(std::span<const double> u, std::span<const double> v);

// Same as Cosine with caller-supplied norms (both > 0).
double CosineWithNorms(std::span<const double> u, double u_norm,
                       std::span<const double> v, double v_norm);

// Component-wise mean over chunks. Not length-normalized.
Vector MeanEmbedding(const ChunkEmbeddings& e);

// Mean cosine over the full enroll x test chunk cross product. The terms are
// sorted before a compensated sum, so Score(a, b) == Score(b, a) bit-exactly.
PairwiseScore ScorePairwise(const ChunkEmbeddings& enroll,
                            const ChunkEmbeddings& test);

}  // namespace asvkit

#endif  // ASVKIT_SCORING_H_
