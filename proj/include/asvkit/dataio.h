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

// On-disk formats. All text, all decimals in shortest round-trip form.
//
//   embeddings   first line `dim=<D>`, then per utterance
//                `utt_id n_chunks v_1 ... v_{n_chunks*D}` (row-major)
//   trials       `label enroll test` (label 0/1) or `enroll test`
//   speaker map  `utt_id speaker_id`
//   schema       `name kind transform`, kind in {real, categorical},
//                transform in {identity, log1p, match}
//   attributes   CSV, header `utt_id,<schema columns...>`, empty = missing
//   scores       `enroll test score`
//   features     CSV, header `enroll,test,<names...>`, empty = missing
//   fusion model JSON

#ifndef ASVKIT_DATAIO_H_
#define ASVKIT_DATAIO_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "asvkit/common.h"

namespace asvkit {

// One utterance: n_chunks x dim embedding matrix, one row per temporal crop.
struct ChunkEmbeddings {
  std::string utt_id;
  int dim = 0;
  Vector values;  // row-major

  size_t NumChunks() const {
    return dim > 0 ? values.size() / static_cast<size_t>(dim) : 0;
  }
  std::span<const double> Chunk(size_t i) const {
    return {values.data() + i * static_cast<size_t>(dim),
            static_cast<size_t>(dim)};
  }
};

// Throws Error if the record breaks an invariant (empty/whitespace id,
// dim < 1, no chunks, ragged values, non-finite values).
void ValidateChunkEmbeddings(const ChunkEmbeddings& e);

// Id lookup over a list of utterances.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;
  explicit EmbeddingStore(std::vector<ChunkEmbeddings> records);

  const ChunkEmbeddings* Find(const std::string& utt_id) const;
  const ChunkEmbeddings& At(const std::string& utt_id) const;
  const std::vector<ChunkEmbeddings>& records() const { return records_; }
  int dim() const { return dim_; }
  size_t size() const { return records_.size(); }

 private:
  std::vector<ChunkEmbeddings> records_;
  std::unordered_map<std::string, size_t> index_;
  int dim_ = 0;
};

std::vector<ChunkEmbeddings> ReadEmbeddings(const std::string& path);
std::vector<ChunkEmbeddings> ParseEmbeddings(std::string_view text,
                                             const std::string& source);
void WriteEmbeddings(const std::vector<ChunkEmbeddings>& records,
                     const std::string& path);
std::string FormatEmbeddings(const std::vector<ChunkEmbeddings>& records);

struct Trial {
  std::string enroll_id;
  std::string test_id;
  std::optional<bool> label;  // true = same speaker
};

// With expect_labels every line must carry a leading 0/1 label. Without,
// two-field lines are accepted and labeled lines keep their label.
std::vector<Trial> ReadTrials(const std::string& path, bool expect_labels);
std::vector<Trial> ParseTrials(std::string_view text, const std::string& source,
                               bool expect_labels);
void WriteTrials(const std::vector<Trial>& trials, const std::string& path);

// utt_id -> speaker_id
using SpeakerMap = std::map<std::string, std::string>;
SpeakerMap ReadSpeakerMap(const std::string& path);
void WriteSpeakerMap(const SpeakerMap& map, const std::string& path);

enum class AttributeKind { kReal, kCategorical };
enum class AttributeTransform { kIdentity, kLog1p, kMatch };

struct AttributeColumn {
  std::string name;
  AttributeKind kind = AttributeKind::kReal;
  AttributeTransform transform = AttributeTransform::kIdentity;
};
using AttributeSchema = std::vector<AttributeColumn>;

// `match` is only valid for categorical columns; identity/log1p only for
// real ones.
AttributeSchema ReadSchema(const std::string& path);
AttributeSchema ParseSchema(std::string_view text, const std::string& source);
void WriteSchema(const AttributeSchema& schema, const std::string& path);

// monostate marks a missing value.
using AttributeValue = std::variant<std::monostate, double, std::string>;

struct AttributeTable {
  AttributeSchema columns;
  std::vector<std::string> utt_ids;
  std::vector<std::vector<AttributeValue>> rows;

  const std::vector<AttributeValue>* Find(const std::string& utt_id) const;
  void Add(std::string utt_id, std::vector<AttributeValue> row);

 private:
  std::unordered_map<std::string, size_t> index_;
};

AttributeTable ReadAttributes(const std::string& path,
                              const AttributeSchema& schema);
AttributeTable ParseAttributes(std::string_view text,
                               const std::string& source,
                               const AttributeSchema& schema);
void WriteAttributes(const AttributeTable& table, const std::string& path);

struct ScoredTrial {
  std::string enroll_id;
  std::string test_id;
  double score = 0.0;
};

void WriteScores(const std::vector<Trial>& trials, std::span<const double> scores,
                 const std::string& path);
std::string FormatScores(const std::vector<Trial>& trials,
                         std::span<const double> scores);
std::vector<ScoredTrial> ReadScores(const std::string& path);
std::vector<ScoredTrial> ParseScores(std::string_view text,
                                     const std::string& source);

// Per-trial feature matrix; NaN marks a missing value.
struct FeatureTable {
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> ids;  // (enroll, test)
  std::vector<Vector> rows;
};

void WriteFeatures(const FeatureTable& table, const std::string& path);
FeatureTable ReadFeatures(const std::string& path);
FeatureTable ParseFeatures(std::string_view text, const std::string& source);

// Serialized fusion: everything needed to map raw features to a logit.
struct FusionModel {
  std::vector<std::string> feature_names;
  Vector weights;
  double intercept = 0.0;
  std::vector<std::pair<double, double>> minmax;  // (lo, hi) per feature
  Vector medians;                                 // imputation values
  double lambda = 0.0;
  double objective = 0.0;
  int iterations = 0;
};

void ValidateFusionModel(const FusionModel& model);
void WriteFusionModel(const FusionModel& model, const std::string& path);
std::string FormatFusionModel(const FusionModel& model);
FusionModel ReadFusionModel(const std::string& path);
FusionModel ParseFusionModel(std::string_view text, const std::string& source);

}  // namespace asvkit

#endif  // ASVKIT_DATAIO_H_
