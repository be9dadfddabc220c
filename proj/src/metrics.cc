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

#include "asvkit/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace asvkit {

DetCurve ComputeDetCurve(std::span<const double> scores,
                         const std::vector<bool>& labels) {
  if (scores.size() != labels.size()) {
    throw Error("det curve: " + std::to_string(scores.size()) +
                " scores but " + std::to_string(labels.size()) + " labels");
  }
  size_t n_pos = 0;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) throw Error("det curve: non-finite score");
    if (labels[i]) ++n_pos;
  }
  const size_t n_neg = labels.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw Error("det curve: need both target and non-target trials");
  }

  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });

  const double inf = std::numeric_limits<double>::infinity();
  const double pos = static_cast<double>(n_pos);
  const double neg = static_cast<double>(n_neg);
  DetCurve curve;
  curve.points.push_back({-inf, 0.0, 1.0});
  // Walk distinct scores upward; counts are of trials strictly below.
  size_t pos_below = 0, neg_below = 0;
  size_t i = 0;
  while (i < order.size()) {
    const double s = scores[order[i]];
    curve.points.push_back({s, static_cast<double>(pos_below) / pos,
                            static_cast<double>(n_neg - neg_below) / neg});
    while (i < order.size() && scores[order[i]] == s) {
      if (labels[order[i]]) {
        ++pos_below;
      } else {
        ++neg_below;
      }
      ++i;
    }
  }
  curve.points.push_back({inf, 1.0, 0.0});
  return curve;
}

double Eer(const DetCurve& curve) {
  const auto& pts = curve.points;
  if (pts.empty()) throw Error("eer: empty curve");
  for (size_t k = 0; k < pts.size(); ++k) {
    const double diff = pts[k].p_miss - pts[k].p_fa;
    if (diff == 0.0) return pts[k].p_miss;
    if (diff > 0.0) {
      if (k == 0) return pts[0].p_miss;
      const DetPoint& a = pts[k - 1];
      const DetPoint& b = pts[k];
      const double prev = a.p_miss - a.p_fa;  // < 0
      const double t = -prev / (diff - prev);
      return a.p_miss + t * (b.p_miss - a.p_miss);
    }
  }
  return pts.back().p_miss;
}

void ValidateDcfParams(const DcfParams& p) {
  if (!(p.p_target > 0.0 && p.p_target < 1.0)) {
    throw Error("dcf: p_target must be in (0, 1)");
  }
  if (!(p.c_miss > 0.0) || !(p.c_fa > 0.0)) {
    throw Error("dcf: costs must be positive");
  }
}

MinDcfResult MinDcf(const DetCurve& curve, const DcfParams& params) {
  ValidateDcfParams(params);
  if (curve.points.empty()) throw Error("min dcf: empty curve");
  const double w_miss = params.c_miss * params.p_target;
  const double w_fa = params.c_fa * (1.0 - params.p_target);
  double best = std::numeric_limits<double>::infinity();
  double best_threshold = 0.0;
  for (const auto& pt : curve.points) {
    const double raw = w_miss * pt.p_miss + w_fa * pt.p_fa;
    if (raw < best) {
      best = raw;
      best_threshold = pt.threshold;
    }
  }
  return {best / std::min(w_miss, w_fa), best_threshold};
}

}  // namespace asvkit
