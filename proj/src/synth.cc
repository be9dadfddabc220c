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

#include "asvkit/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <utility>

#include "asvkit/rng.h"

namespace asvkit {

namespace {

// Stream ids under the config seed.
constexpr uint64_t kSpeakerStream = 0;
constexpr uint64_t kChunkStream = 1;
constexpr uint64_t kAttrSpeakerStream = 2;
constexpr uint64_t kAttrUttStream = 3;
constexpr uint64_t kAttrNoiseStream = 4;

void NormalizeInPlace(std::span<double> v) {
  const double n = L2Norm(v);
  if (n > 0.0) {
    for (double& x : v) x /= n;
  }
}

// Speakers in id order, each with its utterances in id order.
std::vector<std::pair<std::string, std::vector<std::string>>> GroupBySpeaker(
    const SpeakerMap& speakers) {
  std::map<std::string, std::vector<std::string>> grouped;
  for (const auto& [utt, spk] : speakers) grouped[spk].push_back(utt);
  return {grouped.begin(), grouped.end()};
}

// Independent generator for (stream, a, b).
Rng SubRng(uint64_t seed, uint64_t stream, uint64_t a, uint64_t b) {
  return Rng(Rng::StreamSeed(Rng::StreamSeed(Rng::StreamSeed(seed, stream), a),
                             b));
}

}  // namespace

void ValidateSynthConfig(const SynthConfig& cfg) {
  if (cfg.n_speakers < 1 || cfg.utts_per_speaker < 1 ||
      cfg.chunks_per_utt < 1) {
    throw Error("synth: counts must be positive");
  }
  if (cfg.dim < 2) throw Error("synth: dim must be >= 2");
  if (!(cfg.within_spread > 0.0) || !(cfg.between_spread > 0.0)) {
    throw Error("synth: spreads must be positive");
  }
  if (!(cfg.attribute_noise >= 0.0) || !(cfg.quality_spread >= 0.0)) {
    throw Error("synth: noise levels must be >= 0");
  }
}

std::string SynthSpeakerId(int speaker) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "spk%04d", speaker);
  return buf;
}

std::string SynthUttId(int speaker, int utt) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "spk%04d-utt%04d", speaker, utt);
  return buf;
}

SynthDataset GenDataset(const SynthConfig& cfg) {
  ValidateSynthConfig(cfg);
  const size_t dim = static_cast<size_t>(cfg.dim);

  Rng spk_rng(Rng::StreamSeed(cfg.seed, kSpeakerStream));
  Vector anchor(dim);
  for (double& x : anchor) x = spk_rng.Normal();
  NormalizeInPlace(anchor);
  Matrix means(static_cast<size_t>(cfg.n_speakers), dim);
  for (size_t s = 0; s < means.rows; ++s) {
    auto m = means.Row(s);
    for (size_t i = 0; i < dim; ++i) {
      m[i] = anchor[i] + cfg.between_spread * spk_rng.Normal();
    }
    NormalizeInPlace(m);
  }

  Rng chunk_rng(Rng::StreamSeed(cfg.seed, kChunkStream));
  SynthDataset out;
  for (int s = 0; s < cfg.n_speakers; ++s) {
    const auto mean = means.Row(static_cast<size_t>(s));
    for (int u = 0; u < cfg.utts_per_speaker; ++u) {
      ChunkEmbeddings e;
      e.utt_id = SynthUttId(s, u);
      e.dim = cfg.dim;
      e.values.resize(static_cast<size_t>(cfg.chunks_per_utt) * dim);
      const double scale =
          cfg.within_spread * std::exp(cfg.quality_spread * chunk_rng.Normal());
      for (int c = 0; c < cfg.chunks_per_utt; ++c) {
        std::span<double> row(e.values.data() + static_cast<size_t>(c) * dim,
                              dim);
        for (size_t i = 0; i < dim; ++i) {
          row[i] = mean[i] + scale * chunk_rng.Normal();
        }
        NormalizeInPlace(row);
      }
      out.speakers.emplace(e.utt_id, SynthSpeakerId(s));
      out.embeddings.push_back(std::move(e));
    }
  }
  return out;
}

std::vector<Trial> GenTrials(const SpeakerMap& speakers, size_t n_pos,
                             size_t n_neg, uint64_t seed) {
  std::vector<std::string> utts;
  std::vector<std::string> spk_of;
  for (const auto& [utt, spk] : speakers) {
    utts.push_back(utt);
    spk_of.push_back(spk);
  }
  const size_t n_utt = utts.size();

  std::vector<std::pair<size_t, size_t>> positives;
  for (size_t i = 0; i < n_utt; ++i) {
    for (size_t j = i + 1; j < n_utt; ++j) {
      if (spk_of[i] == spk_of[j]) positives.emplace_back(i, j);
    }
  }
  const size_t all_pairs = n_utt < 2 ? 0 : n_utt * (n_utt - 1) / 2;
  const size_t n_cross = all_pairs - positives.size();
  if (n_pos > positives.size()) {
    throw Error("synth: " + std::to_string(n_pos) +
                " target trials requested, only " +
                std::to_string(positives.size()) + " same-speaker pairs exist");
  }
  if (n_neg > n_cross) {
    throw Error("synth: " + std::to_string(n_neg) +
                " non-target trials requested, only " +
                std::to_string(n_cross) + " cross-speaker pairs exist");
  }

  Rng rng(seed);
  for (size_t i = 0; i < n_pos; ++i) {
    const size_t j = i + static_cast<size_t>(rng.Below(positives.size() - i));
    std::swap(positives[i], positives[j]);
  }
  std::vector<Trial> trials;
  for (size_t i = 0; i < n_pos; ++i) {
    trials.push_back({utts[positives[i].first], utts[positives[i].second],
                      true});
  }
  std::set<std::pair<size_t, size_t>> taken;
  while (taken.size() < n_neg) {
    size_t a = static_cast<size_t>(rng.Below(n_utt));
    size_t b = static_cast<size_t>(rng.Below(n_utt));
    if (a == b || spk_of[a] == spk_of[b]) continue;
    if (a > b) std::swap(a, b);
    if (!taken.insert({a, b}).second) continue;
    trials.push_back({utts[a], utts[b], false});
  }
  rng.Shuffle(&trials);
  return trials;
}

AttributeSchema SynthSchema() {
  using K = AttributeKind;
  using T = AttributeTransform;
  return {{"gender", K::kCategorical, T::kMatch},
          {"language", K::kCategorical, T::kMatch},
          {"snr_db", K::kReal, T::kIdentity},
          {"speech_length", K::kReal, T::kLog1p},
          {"file_length", K::kReal, T::kLog1p},
          {"mos", K::kReal, T::kIdentity},
          {"liveness", K::kReal, T::kIdentity},
          {"bnd", K::kReal, T::kIdentity},
          {"age", K::kReal, T::kIdentity}};
}

AttributeTable GenAttributes(const SpeakerMap& speakers,
                             const SynthConfig& cfg) {
  ValidateSynthConfig(cfg);
  static const char* const kLanguages[] = {"en", "de", "fr", "es", "ru"};
  AttributeTable table;
  table.columns = SynthSchema();
  const double noise = cfg.attribute_noise;
  const auto grouped = GroupBySpeaker(speakers);
  for (size_t s = 0; s < grouped.size(); ++s) {
    Rng spk(Rng::StreamSeed(Rng::StreamSeed(cfg.seed, kAttrSpeakerStream), s));
    const std::string gender = spk.Below(2) == 0 ? "m" : "f";
    const std::string language = kLanguages[spk.Below(5)];
    const double base_age = 18.0 + 60.0 * spk.Uniform();
    const auto& utts = grouped[s].second;
    for (size_t u = 0; u < utts.size(); ++u) {
      Rng r = SubRng(cfg.seed, kAttrUttStream, s, u);
      Rng n = SubRng(cfg.seed, kAttrNoiseStream, s, u);
      const double snr = 30.0 * r.Uniform() + noise * n.Normal();
      const double speech = 2.0 + 18.0 * r.Uniform();
      const double file = speech * (1.0 + 0.5 * r.Uniform());
      const double mos =
          std::clamp(1.0 + 4.0 * r.Uniform() + noise * n.Normal(), 1.0, 5.0);
      const double live =
          std::clamp(r.Uniform() + noise * n.Normal(), 0.0, 1.0);
      const double bnd = std::clamp(r.Uniform() + noise * n.Normal(), 0.0, 1.0);
      const double age = base_age + noise * n.Normal();
      table.Add(utts[u], {gender, language, snr, speech, file, mos, live, bnd,
                          age});
    }
  }
  return table;
}

}  // namespace asvkit
