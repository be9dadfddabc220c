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

// Seeded synthetic corpora: speakers, chunk embeddings, attributes, trials.
// Every output is a pure function of the config; streams come from Rng
// (see rng.h) so other implementations can reproduce them exactly.

#ifndef ASVKIT_SYNTH_H_
#define ASVKIT_SYNTH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "asvkit/dataio.h"

namespace asvkit {

struct SynthConfig {
  int n_speakers = 50;
  int utts_per_speaker = 10;
  int chunks_per_utt = 10;
  int dim = 64;
  double within_spread = 0.1;
  double between_spread = 1.0;
  uint64_t seed = 7;
  double attribute_noise = 0.0;
  // Per-utterance log-normal multiplier on within_spread; 0 disables.
  double quality_spread = 0.0;
};

void ValidateSynthConfig(const SynthConfig& cfg);

struct SynthDataset {
  std::vector<ChunkEmbeddings> embeddings;
  SpeakerMap speakers;
};

// Ids are spk%04d and spk%04d-utt%04d.
std::string SynthSpeakerId(int speaker);
std::string SynthUttId(int speaker, int utt);

// Stream StreamSeed(seed, 0): an anchor direction a ~ normalize(N(0, I)),
// then per speaker mean_s = normalize(a + between_spread * N(0, I)).
// Stream StreamSeed(seed, 1): per utterance z ~ N(0, 1) and
// scale = within_spread * exp(quality_spread * z); per chunk
// normalize(mean_s + scale * N(0, I)).
SynthDataset GenDataset(const SynthConfig& cfg);

// Same-speaker pairs: all (i < j) per speaker over sorted utterance ids,
// n_pos of them picked by a partial Fisher-Yates (i = 0..k-1, swap with
// i + Below(n - i)). Cross-speaker pairs: draw (Below(U), Below(U)) over the
// sorted utterance list, rejecting self pairs, same-speaker pairs and
// repeats. The combined list is then shuffled. All from Rng(seed).
std::vector<Trial> GenTrials(const SpeakerMap& speakers, size_t n_pos,
                             size_t n_neg, uint64_t seed);

// gender, language, snr_db, speech_length, file_length, mos, liveness, bnd,
// age. Gender, language and the base age are per speaker.
AttributeSchema SynthSchema();
AttributeTable GenAttributes(const SpeakerMap& speakers,
                             const SynthConfig& cfg);

}  // namespace asvkit

#endif  // ASVKIT_SYNTH_H_
