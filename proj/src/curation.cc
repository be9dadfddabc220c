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

#include "asvkit/curation.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>

#include "asvkit/kernels.h"
#include "asvkit/scoring.h"

namespace asvkit {

namespace {

// Sorted copy by speaker id; rejects duplicates and ragged dims.
std::vector<const SpeakerProfile*> SortedProfiles(
    const std::vector<SpeakerProfile>& profiles, const char* what) {
  std::vector<const SpeakerProfile*> out;
  for (const auto& p : profiles) out.push_back(&p);
  std::sort(out.begin(), out.end(), [](const auto* a, const auto* b) {
    return a->speaker_id < b->speaker_id;
  });
  for (size_t i = 1; i < out.size(); ++i) {
    if (out[i]->speaker_id == out[i - 1]->speaker_id) {
      throw Error(std::string("ddf: duplicate ") + what + " speaker " +
                  out[i]->speaker_id);
    }
  }
  return out;
}

Matrix Stack(const std::vector<const SpeakerProfile*>& profiles, size_t dim) {
  Matrix m(profiles.size(), dim);
  for (size_t i = 0; i < profiles.size(); ++i) {
    const auto& v = profiles[i]->median_embedding;
    if (v.size() != dim) throw Error("ddf: dim mismatch");
    std::copy(v.begin(), v.end(), m.Row(i).begin());
  }
  return m;
}

struct Prepared {
  std::vector<const SpeakerProfile*> source;
  std::vector<const SpeakerProfile*> target;
  Matrix sim;  // target x source
};

Prepared Prepare(const std::vector<SpeakerProfile>& source,
                 const std::vector<SpeakerProfile>& target) {
  if (source.empty() || target.empty()) {
    throw Error("ddf: source and target must be nonempty");
  }
  Prepared p;
  p.source = SortedProfiles(source, "source");
  p.target = SortedProfiles(target, "target");
  const size_t dim = p.source.front()->median_embedding.size();
  p.sim = kernels::CosineMatrix(Stack(p.target, dim), Stack(p.source, dim));
  return p;
}

std::vector<bool> CandidateMask(const Prepared& p, size_t top_k) {
  if (top_k == 0) throw Error("ddf: top_k must be >= 1");
  const size_t n_src = p.source.size();
  const size_t k = std::min(top_k, n_src);
  const int64_t n_tgt = static_cast<int64_t>(p.target.size());
  std::vector<std::vector<size_t>> picks(p.target.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (int64_t t = 0; t < n_tgt; ++t) {
    const auto row = p.sim.Row(static_cast<size_t>(t));
    std::vector<size_t> idx(n_src);
    std::iota(idx.begin(), idx.end(), 0);
    // Sources are in id order, so index order breaks similarity ties by id.
    std::partial_sort(idx.begin(), idx.begin() + static_cast<long>(k),
                      idx.end(), [&](size_t a, size_t b) {
                        return row[a] > row[b] || (row[a] == row[b] && a < b);
                      });
    idx.resize(k);
    picks[static_cast<size_t>(t)] = std::move(idx);
  }
  std::vector<bool> mask(n_src, false);
  for (const auto& list : picks) {
    for (size_t s : list) mask[s] = true;
  }
  return mask;
}

}  // namespace

SpeakerProfile MedianProfile(std::string speaker_id,
                             const std::vector<Vector>& utterance_means) {
  if (utterance_means.empty()) {
    throw Error("median profile: speaker " + speaker_id + " has no utterances");
  }
  const size_t dim = utterance_means.front().size();
  SpeakerProfile p;
  p.speaker_id = std::move(speaker_id);
  p.median_embedding.resize(dim);
  std::vector<double> col(utterance_means.size());
  for (size_t i = 0; i < dim; ++i) {
    for (size_t u = 0; u < utterance_means.size(); ++u) {
      if (utterance_means[u].size() != dim) {
        throw Error("median profile: dim mismatch for " + p.speaker_id);
      }
      col[u] = utterance_means[u][i];
    }
    const size_t mid = (col.size() - 1) / 2;
    std::nth_element(col.begin(), col.begin() + static_cast<long>(mid),
                     col.end());
    p.median_embedding[i] = col[mid];
  }
  const double norm = L2Norm(p.median_embedding);
  if (!(norm > 0.0)) {
    throw Error("median profile: zero-norm median for " + p.speaker_id);
  }
  for (double& v : p.median_embedding) v /= norm;
  return p;
}

std::vector<SpeakerProfile> BuildProfiles(const EmbeddingStore& store,
                                          const SpeakerMap& speaker_map) {
  std::map<std::string, std::vector<Vector>> by_speaker;
  for (const auto& [utt, spk] : speaker_map) {
    by_speaker[spk].push_back(MeanEmbedding(store.At(utt)));
  }
  std::vector<SpeakerProfile> out;
  for (const auto& [spk, means] : by_speaker) {
    out.push_back(MedianProfile(spk, means));
  }
  return out;
}

std::vector<std::string> DdfCandidates(
    const std::vector<SpeakerProfile>& source,
    const std::vector<SpeakerProfile>& target, size_t top_k) {
  const Prepared p = Prepare(source, target);
  const auto mask = CandidateMask(p, top_k);
  std::vector<std::string> out;
  for (size_t s = 0; s < mask.size(); ++s) {
    if (mask[s]) out.push_back(p.source[s]->speaker_id);
  }
  return out;
}

std::vector<DdfSelection> DdfSelect(const std::vector<SpeakerProfile>& source,
                                    const std::vector<SpeakerProfile>& target,
                                    const DdfConfig& cfg) {
  if (!(cfg.dedup_threshold > 0.0 && cfg.dedup_threshold <= 1.0)) {
    throw Error("ddf: dedup threshold must be in (0, 1]");
  }
  const Prepared p = Prepare(source, target);
  const auto mask = CandidateMask(p, cfg.top_k);
  std::vector<DdfSelection> out;
  for (size_t s = 0; s < mask.size(); ++s) {
    if (!mask[s]) continue;
    size_t best = 0;
    for (size_t t = 1; t < p.target.size(); ++t) {
      if (p.sim(t, s) > p.sim(best, s)) best = t;
    }
    const double max_sim = p.sim(best, s);
    if (max_sim > cfg.dedup_threshold) continue;
    out.push_back({p.source[s]->speaker_id, max_sim,
                   p.target[best]->speaker_id});
  }
  return out;
}

std::string FormatDdfCsv(const std::vector<DdfSelection>& selection) {
  std::string out = "speaker_id,max_similarity,nearest_target\n";
  for (const auto& s : selection) {
    out += s.speaker_id + "," + FormatDouble(s.max_similarity) + "," +
           s.nearest_target + "\n";
  }
  return out;
}

}  // namespace asvkit
