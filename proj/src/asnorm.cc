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

#include "asvkit/asnorm.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>

#include "asvkit/rng.h"
#include "asvkit/scoring.h"

namespace asvkit {

ScoreStats TopNStats(std::span<const double> scores, size_t top_n) {
  if (top_n == 0 || top_n > scores.size()) {
    throw Error("top-n of " + std::to_string(top_n) + " exceeds cohort size " +
                std::to_string(scores.size()));
  }
  std::vector<double> v(scores.begin(), scores.end());
  std::partial_sort(v.begin(), v.begin() + static_cast<long>(top_n), v.end(),
                    std::greater<>());
  double sum = 0.0;
  for (size_t i = 0; i < top_n; ++i) sum += v[i];
  ScoreStats s;
  s.mean = sum / static_cast<double>(top_n);
  double ss = 0.0;
  for (size_t i = 0; i < top_n; ++i) ss += (v[i] - s.mean) * (v[i] - s.mean);
  s.std = std::sqrt(ss / static_cast<double>(top_n));
  return s;
}

std::map<std::string, std::vector<std::string>> SelectCohortUtterances(
    const SpeakerMap& speaker_map, size_t per_speaker, uint64_t seed) {
  if (speaker_map.empty()) throw Error("cohort: empty speaker map");
  if (per_speaker == 0) throw Error("cohort: utterances per speaker must be >= 1");
  // SpeakerMap iterates in utterance order, so each list arrives sorted.
  std::map<std::string, std::vector<std::string>> by_speaker;
  for (const auto& [utt, spk] : speaker_map) by_speaker[spk].push_back(utt);

  Rng rng(seed);
  for (auto& [spk, utts] : by_speaker) {
    rng.Shuffle(&utts);
    utts.resize(std::min(per_speaker, utts.size()));
    std::sort(utts.begin(), utts.end());
  }
  return by_speaker;
}

Cohort BuildCohort(const EmbeddingStore& store, const SpeakerMap& speaker_map,
                   const AsNormConfig& cfg, uint64_t seed) {
  const auto selection =
      SelectCohortUtterances(speaker_map, cfg.utterances_per_speaker, seed);
  Cohort cohort;
  cohort.embeddings = Matrix(selection.size(), static_cast<size_t>(store.dim()));
  size_t row = 0;
  for (const auto& [spk, utts] : selection) {
    auto out = cohort.embeddings.Row(row++);
    for (const auto& utt : utts) {
      const Vector m = MeanEmbedding(store.At(utt));
      for (size_t i = 0; i < out.size(); ++i) out[i] += m[i];
    }
    for (double& v : out) v /= static_cast<double>(utts.size());
    cohort.speaker_ids.push_back(spk);
  }
  return cohort;
}

std::vector<ChunkEmbeddings> CohortToRecords(const Cohort& cohort) {
  std::vector<ChunkEmbeddings> out;
  for (size_t i = 0; i < cohort.size(); ++i) {
    ChunkEmbeddings e;
    e.utt_id = cohort.speaker_ids[i];
    e.dim = static_cast<int>(cohort.embeddings.cols);
    auto row = cohort.embeddings.Row(i);
    e.values.assign(row.begin(), row.end());
    out.push_back(std::move(e));
  }
  return out;
}

Cohort CohortFromRecords(const std::vector<ChunkEmbeddings>& records) {
  if (records.empty()) throw Error("cohort: no speakers");
  Cohort cohort;
  const size_t dim = static_cast<size_t>(records.front().dim);
  cohort.embeddings = Matrix(records.size(), dim);
  for (size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (static_cast<size_t>(r.dim) != dim) throw Error("cohort: dim mismatch");
    const Vector m = MeanEmbedding(r);
    std::copy(m.begin(), m.end(), cohort.embeddings.Row(i).begin());
    cohort.speaker_ids.push_back(r.utt_id);
  }
  return cohort;
}

double AsNormFromStats(double raw, const ScoreStats& enroll,
                       const ScoreStats& test) {
  if (!std::isfinite(raw)) throw Error("as-norm: non-finite raw score");
  if (!(enroll.std >= kMinCohortStd) || !(test.std >= kMinCohortStd)) {
    throw Error("as-norm: degenerate cohort (score std below 1e-12)");
  }
  return 0.5 * ((raw - enroll.mean) / enroll.std +
                (raw - test.mean) / test.std);
}

double AsNormFromCohortScores(double raw, std::span<const double> enroll_scores,
                              std::span<const double> test_scores,
                              size_t top_n) {
  return AsNormFromStats(raw, TopNStats(enroll_scores, top_n),
                         TopNStats(test_scores, top_n));
}

double AsNormScore(double raw, std::span<const double> enroll_emb,
                   std::span<const double> test_emb, const Cohort& cohort,
                   const AsNormConfig& cfg) {
  Vector e(cohort.size()), t(cohort.size());
  for (size_t c = 0; c < cohort.size(); ++c) {
    e[c] = Cosine(enroll_emb, cohort.embeddings.Row(c));
    t[c] = Cosine(test_emb, cohort.embeddings.Row(c));
  }
  return AsNormFromCohortScores(raw, e, t, cfg.top_n);
}

Vector AsNormTrials(std::span<const double> raw,
                    const std::vector<Trial>& trials,
                    const EmbeddingStore& store, const Cohort& cohort,
                    const AsNormConfig& cfg) {
  if (raw.size() != trials.size()) {
    throw Error("as-norm: " + std::to_string(raw.size()) + " scores for " +
                std::to_string(trials.size()) + " trials");
  }
  if (cfg.top_n == 0 || cfg.top_n > cohort.size()) {
    throw Error("as-norm: top-n " + std::to_string(cfg.top_n) +
                " exceeds cohort size " + std::to_string(cohort.size()));
  }
  std::unordered_map<std::string, size_t> slot;
  std::vector<std::string> utts;
  for (const auto& t : trials) {
    for (const auto* id : {&t.enroll_id, &t.test_id}) {
      if (slot.emplace(*id, utts.size()).second) utts.push_back(*id);
    }
  }
  Matrix means(utts.size(), cohort.embeddings.cols);
  for (size_t i = 0; i < utts.size(); ++i) {
    const Vector m = MeanEmbedding(store.At(utts[i]));
    if (m.size() != means.cols) throw Error("as-norm: dim mismatch with cohort");
    std::copy(m.begin(), m.end(), means.Row(i).begin());
  }
  const auto stats = kernels::TopNCohortStats(means, cohort.embeddings,
                                              cfg.top_n);
  Vector out(trials.size());
  for (size_t i = 0; i < trials.size(); ++i) {
    out[i] = AsNormFromStats(raw[i], stats[slot.at(trials[i].enroll_id)],
                             stats[slot.at(trials[i].test_id)]);
  }
  return out;
}

}  // namespace asvkit
