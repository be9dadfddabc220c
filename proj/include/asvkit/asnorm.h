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

// Adaptive symmetric score normalization against a cohort of imposter
// speakers:
//
//   s' = 0.5 * ((s - mu_e) / sigma_e + (s - mu_t) / sigma_t)
//
// where (mu_e, sigma_e) are the mean and population std of the top_n largest
// cosines between the enrollment utterance mean and the cohort rows, and
// likewise for the test side.

#ifndef ASVKIT_ASNORM_H_
#define ASVKIT_ASNORM_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "asvkit/common.h"
#include "asvkit/dataio.h"
#include "asvkit/kernels.h"

namespace asvkit {

struct AsNormConfig {
  size_t top_n = 100;
  size_t utterances_per_speaker = 20;
};

// One mean embedding per cohort speaker.
struct Cohort {
  std::vector<std::string> speaker_ids;
  Matrix embeddings;  // n_speakers x dim

  size_t size() const { return speaker_ids.size(); }
};

// Smallest std accepted before the normalization is declared degenerate.
inline constexpr double kMinCohortStd = 1e-12;

// Per speaker (lexicographic speaker order), the utterance ids that enter the
// cohort. One Rng(seed) stream is shared across speakers: each speaker's
// sorted utterance list is Fisher-Yates shuffled in full and the first
// min(per_speaker, n) ids are kept, returned in sorted order.
std::map<std::string, std::vector<std::string>> SelectCohortUtterances(
    const SpeakerMap& speaker_map, size_t per_speaker, uint64_t seed);

// Cohort row = mean over the selected utterances of their mean embeddings.
Cohort BuildCohort(const EmbeddingStore& store, const SpeakerMap& speaker_map,
                   const AsNormConfig& cfg, uint64_t seed);

// Cohort file = embedding store with one single-chunk record per speaker.
std::vector<ChunkEmbeddings> CohortToRecords(const Cohort& cohort);
Cohort CohortFromRecords(const std::vector<ChunkEmbeddings>& records);

double AsNormFromStats(double raw, const ScoreStats& enroll,
                       const ScoreStats& test);

// Normalization given the raw cohort cosines of each side.
double AsNormFromCohortScores(double raw, std::span<const double> enroll_scores,
                              std::span<const double> test_scores,
                              size_t top_n);

double AsNormScore(double raw, std::span<const double> enroll_emb,
                   std::span<const double> test_emb, const Cohort& cohort,
                   const AsNormConfig& cfg);

// Batch form: cohort statistics are computed once per distinct utterance
// (utterance mean embeddings from `store`), then applied per trial.
Vector AsNormTrials(std::span<const double> raw,
                    const std::vector<Trial>& trials,
                    const EmbeddingStore& store, const Cohort& cohort,
                    const AsNormConfig& cfg);

}  // namespace asvkit

#endif  // ASVKIT_ASNORM_H_
