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

// Linear score-level fusion
//
//   L = w . S + v . Q + b,   P = 1 / (1 + exp(-L))
//
// where S are min-max normalized (AS-normed) system scores, Q are QMF
// values, and b is an unpenalized intercept. Weights are fitted by
// minimizing
//
//   (1/n) sum_i log(1 + exp(-s_i L_i)) + lambda * (|w|_1 + |v|_1)
//
// with proximal gradient descent (ISTA): a gradient step on the smooth
// part followed by soft-thresholding of the feature weights.

#ifndef ASVKIT_FUSION_H_
#define ASVKIT_FUSION_H_

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "asvkit/common.h"

namespace asvkit {

// 1 / (1 + e^-x), branch on sign so neither side overflows.
inline double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + e^x)
inline double Softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

// sign(a) * max(|a| - t, 0)
inline double SoftThreshold(double a, double t) {
  if (a > t) return a - t;
  if (a < -t) return a + t;
  return 0.0;
}

struct FusionProblem {
  Matrix x;                 // n_trials x n_features, entries in [0, 1]
  std::vector<bool> labels; // true = target
  double lambda = 0.01;
  std::vector<std::string> feature_names;
};

struct FitOptions {
  int max_iters = 100000;
  double tol = 1e-9;          // on absolute objective decrease
  bool record_trace = false;  // keep the objective after every iteration
};

struct FittedFusion {
  Vector weights;
  double intercept = 0.0;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  Vector trace;  // objective per accepted iteration, starting at w = 0
};

// Checks the problem invariants; throws Error on violation.
void ValidateProblem(const FusionProblem& problem);

double FusionObjective(const FusionProblem& problem,
                       std::span<const double> weights, double intercept);

FittedFusion FitFusion(const FusionProblem& problem,
                       const FitOptions& options = {});

double FuseLogit(std::span<const double> features,
                 std::span<const double> weights, double intercept);

// Scores and QMFs in model feature order: weights = [w..., v...].
double FuseLogit(std::span<const double> scores, std::span<const double> qmfs,
                 const FittedFusion& model);
double FuseProbability(std::span<const double> scores,
                       std::span<const double> qmfs, const FittedFusion& model);

}  // namespace asvkit

#endif  // ASVKIT_FUSION_H_
