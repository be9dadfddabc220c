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


#include <cmath>

#include "doctest.h"

#include "asvkit/kernels.h"
#include "asvkit/rng.h"
#include "asvkit/synth.h"

using namespace asvkit;

namespace {

Matrix RandomMatrix(size_t r, size_t c, Rng* rng) {
  Matrix m(r, c);
  for (double& v : m.data) v = rng->Normal();
  return m;
}

}  // namespace

TEST_CASE("parallel kernels equal the serial references") {
  SynthConfig cfg;
  cfg.n_speakers = 10;
  cfg.dim = 24;
  const auto data = GenDataset(cfg);
  const EmbeddingStore store(data.embeddings);
  const auto trials = GenTrials(data.speakers, 100, 300, 4);
  const auto a = kernels::ScoreTrials(store, trials);
  const auto b = kernels::ScoreTrialsRef(store, trials);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].value == b[i].value);
    CHECK(a[i].n_pairs == b[i].n_pairs);
  }

  Rng rng(6);
  const Matrix q = RandomMatrix(37, 16, &rng);
  const Matrix c = RandomMatrix(120, 16, &rng);
  CHECK(kernels::CosineMatrix(q, c).data == kernels::CosineMatrixRef(q, c).data);
  const auto s1 = kernels::TopNCohortStats(q, c, 25);
  const auto s2 = kernels::TopNCohortStatsRef(q, c, 25);
  for (size_t i = 0; i < s1.size(); ++i) {
    CHECK(s1[i].mean == s2[i].mean);
    CHECK(s1[i].std == s2[i].std);
  }

  const Matrix x = RandomMatrix(3 * kernels::kLogisticBlock + 17, 5, &rng);
  Vector y(x.rows), w{0.3, -0.2, 0.1, 0.0, 1.5};
  for (double& v : y) v = static_cast<double>(rng.Below(2));
  Vector g1(5), g2(5);
  double b1 = 0, b2 = 0;
  const double f1 = kernels::LogisticObjective(x, y, w, 0.4, g1, &b1);
  const double f2 = kernels::LogisticObjectiveRef(x, y, w, 0.4, g2, &b2);
  CHECK(f1 == doctest::Approx(f2).epsilon(1e-13));
  CHECK(b1 == doctest::Approx(b2).epsilon(1e-12));
  for (size_t j = 0; j < 5; ++j) {
    CHECK(g1[j] == doctest::Approx(g2[j]).epsilon(1e-12));
  }
  // Same result on repeat: block reduction order is fixed.
  Vector g3(5);
  double b3 = 0;
  CHECK(kernels::LogisticObjective(x, y, w, 0.4, g3, &b3) == f1);
  CHECK(g3 == g1);
}

TEST_CASE("kernels propagate errors from workers") {
  const EmbeddingStore store({{"a", 2, {1, 0}}});
  CHECK_THROWS_WITH(kernels::ScoreTrials(store, {{"a", "a", {}}, {"a", "b", {}}}),
                    doctest::Contains("b"));
  const Matrix q(2, 3, 1.0), c(3, 3, 1.0);
  CHECK_THROWS(kernels::TopNCohortStats(q, c, 4));
}
