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


#include <set>

#include "doctest.h"

#include "asvkit/kernels.h"
#include "asvkit/synth.h"
#include "test_util.h"

using namespace asvkit;

TEST_CASE("tiny within-speaker spread gives near-identical chunks") {
  SynthConfig cfg;
  cfg.n_speakers = 5;
  cfg.utts_per_speaker = 4;
  cfg.within_spread = 1e-9;
  const auto data = GenDataset(cfg);
  const EmbeddingStore store(data.embeddings);
  const auto trials = GenTrials(data.speakers, 20, 0, 1);
  for (const auto& s : kernels::ScoreTrials(store, trials)) {
    CHECK(s.value > 0.999999);
  }
}

TEST_CASE("generation is deterministic") {
  SynthConfig cfg;
  cfg.n_speakers = 8;
  const auto a = GenDataset(cfg);
  const auto b = GenDataset(cfg);
  CHECK(FormatEmbeddings(a.embeddings) == FormatEmbeddings(b.embeddings));
  cfg.seed = 8;
  CHECK(FormatEmbeddings(GenDataset(cfg).embeddings) !=
        FormatEmbeddings(a.embeddings));
  const auto t1 = GenTrials(a.speakers, 30, 30, 2);
  const auto t2 = GenTrials(a.speakers, 30, 30, 2);
  REQUIRE(t1.size() == 60);
  for (size_t i = 0; i < t1.size(); ++i) {
    CHECK(t1[i].enroll_id == t2[i].enroll_id);
    CHECK(t1[i].test_id == t2[i].test_id);
  }
}

TEST_CASE("default corpus separates speakers") {
  const SynthConfig cfg;
  const auto data = GenDataset(cfg);
  const EmbeddingStore store(data.embeddings);
  const auto trials = GenTrials(data.speakers, 500, 500, 7);
  const auto scores = kernels::ScoreTrials(store, trials);
  double pos = 0, neg = 0;
  for (size_t i = 0; i < trials.size(); ++i) {
    (*trials[i].label ? pos : neg) += scores[i].value;
  }
  CHECK(pos / 500 > neg / 500);
}

TEST_CASE("trial sampling") {
  SynthConfig cfg;
  cfg.n_speakers = 4;
  cfg.utts_per_speaker = 3;
  const auto data = GenDataset(cfg);
  const auto negs = GenTrials(data.speakers, 0, 10, 1);
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& t : negs) {
    CHECK(*t.label == false);
    CHECK(data.speakers.at(t.enroll_id) != data.speakers.at(t.test_id));
    CHECK(seen.insert({t.enroll_id, t.test_id}).second);
  }
  // 4 speakers x C(3, 2) = 12 same-speaker pairs; 66 - 12 = 54 cross pairs.
  CHECK_NOTHROW(GenTrials(data.speakers, 12, 54, 1));
  CHECK_THROWS(GenTrials(data.speakers, 13, 0, 1));
  CHECK_THROWS(GenTrials(data.speakers, 0, 55, 1));
}

TEST_CASE("attributes") {
  SynthConfig cfg;
  cfg.n_speakers = 6;
  const auto data = GenDataset(cfg);
  const auto table = GenAttributes(data.speakers, cfg);
  for (size_t i = 0; i < table.utt_ids.size(); ++i) {
    const auto& row = table.rows[i];
    const std::string first = SynthUttId(
        std::stoi(data.speakers.at(table.utt_ids[i]).substr(3)), 0);
    const auto& ref = *table.Find(first);
    CHECK(row[0] == ref[0]);
    CHECK(row[1] == ref[1]);
    CHECK(std::get<double>(row[2]) >= 0.0);
    CHECK(std::get<double>(row[2]) < 30.0);
    CHECK(std::get<double>(row[5]) >= 1.0);
    CHECK(std::get<double>(row[5]) <= 5.0);
    CHECK(std::get<double>(row[6]) <= 1.0);
    CHECK(std::get<double>(row[3]) > 0.0);
  }
  testutil::TempDir dir;
  WriteSchema(table.columns, dir.File("schema.txt"));
  WriteAttributes(table, dir.File("a.csv"));
  const auto back =
      ReadAttributes(dir.File("a.csv"), ReadSchema(dir.File("schema.txt")));
  CHECK(back.utt_ids == table.utt_ids);
  CHECK(back.rows == table.rows);

  // Noise-free attributes depend only on (seed, speaker, utterance index).
  SynthConfig more = cfg;
  more.n_speakers = 9;
  const auto bigger = GenAttributes(GenDataset(more).speakers, more);
  CHECK(*bigger.Find(SynthUttId(3, 2)) == *table.Find(SynthUttId(3, 2)));
}

TEST_CASE("config validation") {
  SynthConfig cfg;
  cfg.dim = 1;
  CHECK_THROWS(GenDataset(cfg));
  cfg.dim = 4;
  cfg.within_spread = 0;
  CHECK_THROWS(GenDataset(cfg));
}
