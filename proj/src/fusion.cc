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

#include "asvkit/fusion.h"

#include <algorithm>
#include <string>

#include "asvkit/kernels.h"

namespace asvkit {

namespace {

Vector Labels01(const std::vector<bool>& labels) {
  Vector y(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) y[i] = labels[i] ? 1.0 : 0.0;
  return y;
}

double L1(std::span<const double> w) {
  double s = 0.0;
  for (double v : w) s += std::abs(v);
  return s;
}

// Largest eigenvalue of [X 1]^T [X 1] / n by power iteration, divided by 4
// (the logistic curvature bound). Falls back to the Frobenius bound.
double LipschitzEstimate(const Matrix& x) {
  const size_t d = x.cols + 1;
  const double n = static_cast<double>(x.rows);
  Matrix gram(d, d);
  for (size_t i = 0; i < x.rows; ++i) {
    auto row = x.Row(i);
    for (size_t a = 0; a < d; ++a) {
      const double xa = a < x.cols ? row[a] : 1.0;
      for (size_t b = a; b < d; ++b) {
        const double xb = b < x.cols ? row[b] : 1.0;
        gram(a, b) += xa * xb;
      }
    }
  }
  double frob = 0.0;
  for (size_t a = 0; a < d; ++a) {
    for (size_t b = a; b < d; ++b) {
      gram(a, b) /= n;
      gram(b, a) = gram(a, b);
    }
    frob += gram(a, a);
  }
  Vector v(d, 1.0 / std::sqrt(static_cast<double>(d)));
  Vector next(d);
  double eig = 0.0;
  for (int it = 0; it < 100; ++it) {
    for (size_t a = 0; a < d; ++a) next[a] = Dot(gram.Row(a), v);
    const double norm = L2Norm(next);
    if (!(norm > 0.0)) break;
    eig = norm;
    for (size_t a = 0; a < d; ++a) v[a] = next[a] / norm;
  }
  if (!(eig > 0.0) || !std::isfinite(eig)) eig = frob;
  return std::max(eig, 1e-12) / 4.0;
}

}  // namespace

void ValidateProblem(const FusionProblem& p) {
  if (p.x.rows != p.labels.size()) {
    throw Error("fusion: " + std::to_string(p.x.rows) + " rows but " +
                std::to_string(p.labels.size()) + " labels");
  }
  if (p.x.rows < 2) throw Error("fusion: need at least 2 trials");
  if (!p.feature_names.empty() && p.feature_names.size() != p.x.cols) {
    throw Error("fusion: feature name count does not match columns");
  }
  if (!(p.lambda >= 0.0) || !std::isfinite(p.lambda)) {
    throw Error("fusion: lambda must be a finite value >= 0");
  }
  const auto n_pos = std::count(p.labels.begin(), p.labels.end(), true);
  if (n_pos == 0 || n_pos == static_cast<long>(p.labels.size())) {
    throw Error("fusion: labels contain a single class");
  }
  for (double v : p.x.data) {
    if (!std::isfinite(v)) throw Error("fusion: non-finite feature value");
  }
}

double FusionObjective(const FusionProblem& p, std::span<const double> weights,
                       double intercept) {
  const Vector y = Labels01(p.labels);
  return kernels::LogisticObjective(p.x, y, weights, intercept, {}, nullptr) +
         p.lambda * L1(weights);
}

FittedFusion FitFusion(const FusionProblem& p, const FitOptions& opt) {
  ValidateProblem(p);
  if (opt.max_iters < 0) throw Error("fusion: max_iters must be >= 0");
  const size_t d = p.x.cols;
  const Vector y = Labels01(p.labels);

  FittedFusion fit;
  fit.weights.assign(d, 0.0);
  fit.intercept = 0.0;

  Vector grad(d), cand(d), cand_grad(d);
  double grad_b = 0.0, cand_grad_b = 0.0;
  double smooth = kernels::LogisticObjective(p.x, y, fit.weights, 0.0, grad,
                                             &grad_b);
  fit.objective = smooth;
  if (opt.record_trace) fit.trace.push_back(fit.objective);

  double lip = LipschitzEstimate(p.x);
  for (int it = 0; it < opt.max_iters; ++it) {
    double cand_smooth = 0.0;
    double cand_b = 0.0;
    // Backtracking: accept once the quadratic model at 1/lip majorizes the
    // smooth loss at the candidate.
    while (true) {
      const double step = 1.0 / lip;
      for (size_t j = 0; j < d; ++j) {
        cand[j] = SoftThreshold(fit.weights[j] - step * grad[j],
                                step * p.lambda);
      }
      cand_b = fit.intercept - step * grad_b;
      cand_smooth = kernels::LogisticObjective(p.x, y, cand, cand_b, cand_grad,
                                               &cand_grad_b);
      double lin = grad_b * (cand_b - fit.intercept);
      double sq = (cand_b - fit.intercept) * (cand_b - fit.intercept);
      for (size_t j = 0; j < d; ++j) {
        const double delta = cand[j] - fit.weights[j];
        lin += grad[j] * delta;
        sq += delta * delta;
      }
      const double bound = smooth + lin + 0.5 * lip * sq;
      if (cand_smooth <= bound + 1e-15 * std::abs(bound) || lip > 1e300) break;
      lip *= 2.0;
    }
    const double cand_obj = cand_smooth + p.lambda * L1(cand);
    const double improvement = fit.objective - cand_obj;
    if (!(improvement >= 0.0)) {
      // Rounding-level increase: the previous iterate is already optimal to
      // machine precision.
      fit.converged = true;
      break;
    }
    fit.weights.swap(cand);
    grad.swap(cand_grad);
    fit.intercept = cand_b;
    grad_b = cand_grad_b;
    smooth = cand_smooth;
    fit.objective = cand_obj;
    fit.iterations = it + 1;
    if (opt.record_trace) fit.trace.push_back(fit.objective);
    if (improvement < opt.tol) {
      fit.converged = true;
      break;
    }
  }
  return fit;
}

double FuseLogit(std::span<const double> features,
                 std::span<const double> weights, double intercept) {
  if (features.size() != weights.size()) {
    throw Error("fusion: " + std::to_string(features.size()) +
                " features for a model with " +
                std::to_string(weights.size()) + " weights");
  }
  return intercept + Dot(features, weights);
}

double FuseLogit(std::span<const double> scores, std::span<const double> qmfs,
                 const FittedFusion& model) {
  if (scores.size() + qmfs.size() != model.weights.size()) {
    throw Error("fusion: " + std::to_string(scores.size() + qmfs.size()) +
                " features for a model with " +
                std::to_string(model.weights.size()) + " weights");
  }
  std::span<const double> w(model.weights);
  return model.intercept + Dot(scores, w.first(scores.size())) +
         Dot(qmfs, w.subspan(scores.size()));
}

double FuseProbability(std::span<const double> scores,
                       std::span<const double> qmfs,
                       const FittedFusion& model) {
  return Sigmoid(FuseLogit(scores, qmfs, model));
}

}  // namespace asvkit
