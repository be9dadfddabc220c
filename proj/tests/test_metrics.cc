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
#include <limits>

#include "doctest.h"

#include "asvkit/metrics.h"
#include "asvkit/rng.h"
#include "oracles.h"

using namespace asvkit;

namespace {

struct ScoreSet {
  std::vector<double> scores;
  std::vector<bool> labels;
};

// Scores on a coarse grid so ties are common.
ScoreSet RandomSet(Rng* rng, size_t max_n) {
  ScoreSet s;
  const size_t n = 2 + rng->Below(max_n - 1);
  const bool coarse = rng->Below(2) == 0;
  for (size_t i = 0; i < n; ++i) {
    const bool label = i == 0 ? true : (i == 1 ? false : rng->Below(2) == 1);
    double v = rng->Normal() + (label ? 1.0 : 0.0);
    if (coarse) v = std::round(v * 4) / 4;
    s.scores.push_back(v);
    s.labels.push_back(label);
  }
  return s;
}

}  // namespace

TEST_CASE("two-trial curve") {
  const auto c = ComputeDetCurve(std::vector<double>{0.1, 0.9}, {false, true});
  REQUIRE(c.points.size() == 4);
  CHECK(c.points[0].p_miss == 0.0);
  CHECK(c.points[0].p_fa == 1.0);
  CHECK(c.points[1].threshold == 0.1);
  CHECK(c.points[1].p_fa == 1.0);
  CHECK(c.points[2].threshold == 0.9);
  CHECK(c.points[2].p_miss == 0.0);
  CHECK(c.points[2].p_fa == 0.0);
  CHECK(c.points[3].p_miss == 1.0);
}

TEST_CASE("errors") {
  CHECK_THROWS(ComputeDetCurve(std::vector<double>{0.1, 0.2}, {true, true}));
  CHECK_THROWS(ComputeDetCurve(std::vector<double>{0.1}, {true, false}));
  CHECK_THROWS(ComputeDetCurve(
      std::vector<double>{0.1, std::numeric_limits<double>::infinity()},
      {true, false}));
  DcfParams bad;
  bad.p_target = 1.0;
  CHECK_THROWS(ValidateDcfParams(bad));
}

TEST_CASE("eer examples") {
  const std::vector<double> sep{0.1, 0.2, 0.8, 0.9};
  const std::vector<bool> sep_l{false, false, true, true};
  CHECK(Eer(ComputeDetCurve(sep, sep_l)) == 0.0);
  CHECK(MinDcf(ComputeDetCurve(sep, sep_l), {}).cost == 0.0);

  const std::vector<double> flat(6, 0.3);
  CHECK(Eer(ComputeDetCurve(flat, {true, false, true, false, false, true})) ==
        0.5);

  const std::vector<double> s{0.8, 0.6, 0.4, 0.7, 0.5, 0.3};
  const std::vector<bool> l{true, true, true, false, false, false};
  CHECK(Eer(ComputeDetCurve(s, l)) == doctest::Approx(1.0 / 3).epsilon(1e-15));
}

TEST_CASE("reject-all normalizes to 1") {
  // With a useless system the best cost is the trivial reject-all point.
  const std::vector<double> s{0.1, 0.9};
  const auto c = ComputeDetCurve(s, {true, false});
  const auto r = MinDcf(c, {});
  CHECK(r.cost == 1.0);
  CHECK(r.threshold == std::numeric_limits<double>::infinity());
}

TEST_CASE("curve matches recount at every threshold") {
  Rng rng(31);
  for (int round = 0; round < 20; ++round) {
    const auto set = RandomSet(&rng, 500);
    const auto curve = ComputeDetCurve(set.scores, set.labels);
    for (const auto& pt : curve.points) {
      const auto [pm, pf] = oracle::MissFa(set.scores, set.labels, pt.threshold);
      CHECK(pt.p_miss == pm);
      CHECK(pt.p_fa == pf);
    }
  }
}

TEST_CASE("eer and mindcf match the oracle and ignore monotone transforms") {
  Rng rng(32);
  for (int round = 0; round < 30; ++round) {
    const auto set = RandomSet(&rng, 300);
    const auto curve = ComputeDetCurve(set.scores, set.labels);
    const double eer = Eer(curve);
    CHECK(std::abs(eer - oracle::Eer(set.scores, set.labels)) < 1e-12);
    for (double p : {0.05, 0.01}) {
      DcfParams params;
      params.p_target = p;
      CHECK(MinDcf(curve, params).cost ==
            oracle::MinDcf(set.scores, set.labels, p, 1, 1));
    }
    std::vector<double> affine, squashed;
    for (double v : set.scores) {
      affine.push_back(2 * v + 3);
      squashed.push_back(std::tanh(v));
    }
    CHECK(std::abs(Eer(ComputeDetCurve(affine, set.labels)) - eer) < 1e-12);
    CHECK(std::abs(Eer(ComputeDetCurve(squashed, set.labels)) - eer) < 1e-12);
  }
}
