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

#ifndef ASVKIT_METRICS_H_
#define ASVKIT_METRICS_H_

#include <span>
#include <vector>

#include "asvkit/common.h"

namespace asvkit {

struct DcfParams {
  double p_target = 0.05;
  double c_miss = 1.0;
  double c_fa = 1.0;
};

struct DetPoint {
  double threshold = 0.0;
  double p_miss = 0.0;
  double p_fa = 0.0;
};

// Operating points for the rule "accept iff score >= threshold": one point
// per distinct score, plus -inf (accept all) and +inf (reject all)
// sentinels. Thresholds are strictly increasing.
struct DetCurve {
  std::vector<DetPoint> points;
};

DetCurve ComputeDetCurve(std::span<const double> scores,
                         const std::vector<bool>& labels);

// Equal error rate in [0, 1]. Finds the first point where p_miss >= p_fa and
// interpolates linearly from the previous point to the crossing. The
// crossing fraction depends only on the error rates, so the result is
// unchanged by any strictly increasing score transform.
double Eer(const DetCurve& curve);

struct MinDcfResult {
  double cost = 0.0;       // normalized by min(c_miss p, c_fa (1 - p))
  double threshold = 0.0;  // smallest threshold attaining the minimum
};

MinDcfResult MinDcf(const DetCurve& curve, const DcfParams& params);

void ValidateDcfParams(const DcfParams& params);

}  // namespace asvkit

#endif  // ASVKIT_METRICS_H_
