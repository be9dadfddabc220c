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

// Domain dataset filtering: pick the source-corpus speakers closest to a
// target corpus, then drop picks so close to a target speaker that they are
// likely the same person.

#ifndef ASVKIT_CURATION_H_
#define ASVKIT_CURATION_H_

#include <string>
#include <vector>

#include "asvkit/common.h"
#include "asvkit/dataio.h"

namespace asvkit {

struct DdfConfig {
  size_t top_k = 50;
  double dedup_threshold = 0.8;
};

struct SpeakerProfile {
  std::string speaker_id;
  Vector median_embedding;  // unit length
};

// Component-wise median of the utterance mean embeddings (lower middle value
// for even counts), then L2-normalized.
SpeakerProfile MedianProfile(std::string speaker_id,
                             const std::vector<Vector>& utterance_means);

// One profile per speaker in `speaker_map`, in speaker id order.
std::vector<SpeakerProfile> BuildProfiles(const EmbeddingStore& store,
                                          const SpeakerMap& speaker_map);

struct DdfSelection {
  std::string speaker_id;
  double max_similarity = 0.0;
  std::string nearest_target;
};

// 1. per target speaker, the top_k source speakers by cosine (ties by id)
// 2. union over targets
// 3. drop any pick whose best target similarity exceeds dedup_threshold
// Result is sorted by speaker id and independent of input order.
std::vector<DdfSelection> DdfSelect(const std::vector<SpeakerProfile>& source,
                                    const std::vector<SpeakerProfile>& target,
                                    const DdfConfig& cfg);

// Steps 1-2 only, sorted ids. Exposed for tests.
std::vector<std::string> DdfCandidates(
    const std::vector<SpeakerProfile>& source,
    const std::vector<SpeakerProfile>& target, size_t top_k);

// CSV `speaker_id,max_similarity,nearest_target`.
std::string FormatDdfCsv(const std::vector<DdfSelection>& selection);

}  // namespace asvkit

#endif  // ASVKIT_CURATION_H_
