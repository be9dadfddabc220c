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

#include "asvkit/dataio.h"

#include <cmath>
#include <set>
#include <string>

#include "json.hpp"

namespace asvkit {

namespace {

using json = nlohmann::json;

// Calls fn(line_number, line) for every line, 1-based, without the newline.
template <typename Fn>
void ForEachLine(std::string_view text, Fn fn) {
  size_t line_no = 0;
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(++line_no, line);
    start = end + 1;
  }
}

bool IsBlank(std::string_view line) { return SplitWhitespace(line).empty(); }

bool HasWhitespace(std::string_view s) {
  return s.find_first_of(" \t\r\n") != std::string_view::npos;
}

std::string Quote(std::string_view s) { return "'" + std::string(s) + "'"; }

const char* KindName(AttributeKind k) {
  return k == AttributeKind::kReal ? "real" : "categorical";
}

const char* TransformName(AttributeTransform t) {
  switch (t) {
    case AttributeTransform::kIdentity:
      return "identity";
    case AttributeTransform::kLog1p:
      return "log1p";
    case AttributeTransform::kMatch:
      return "match";
  }
  return "identity";
}

}  // namespace

void ValidateChunkEmbeddings(const ChunkEmbeddings& e) {
  if (e.utt_id.empty() || HasWhitespace(e.utt_id)) {
    throw Error("invalid utterance id " + Quote(e.utt_id));
  }
  if (e.dim < 1) throw Error("utterance " + e.utt_id + ": dim must be >= 1");
  if (e.values.empty() || e.values.size() % static_cast<size_t>(e.dim) != 0) {
    throw Error("utterance " + e.utt_id + ": " +
                std::to_string(e.values.size()) +
                " values is not a positive multiple of dim=" +
                std::to_string(e.dim));
  }
  for (double v : e.values) {
    if (!std::isfinite(v)) {
      throw Error("utterance " + e.utt_id + ": non-finite value");
    }
  }
}

EmbeddingStore::EmbeddingStore(std::vector<ChunkEmbeddings> records)
    : records_(std::move(records)) {
  for (size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    ValidateChunkEmbeddings(r);
    if (i == 0) dim_ = r.dim;
    if (r.dim != dim_) {
      throw Error("utterance " + r.utt_id + " has dim " +
                  std::to_string(r.dim) + ", store has " +
                  std::to_string(dim_));
    }
    if (!index_.emplace(r.utt_id, i).second) {
      throw Error("duplicate utterance id " + r.utt_id);
    }
  }
}

const ChunkEmbeddings* EmbeddingStore::Find(const std::string& utt_id) const {
  auto it = index_.find(utt_id);
  return it == index_.end() ? nullptr : &records_[it->second];
}

const ChunkEmbeddings& EmbeddingStore::At(const std::string& utt_id) const {
  const ChunkEmbeddings* e = Find(utt_id);
  if (e == nullptr) throw Error("utterance not in embedding store: " + utt_id);
  return *e;
}

// ---------------------------------------------------------------------------
// Embeddings

std::vector<ChunkEmbeddings> ParseEmbeddings(std::string_view text,
                                             const std::string& source) {
  std::vector<ChunkEmbeddings> out;
  std::set<std::string> seen;
  long long dim = -1;
  size_t last_line = 0;
  ForEachLine(text, [&](size_t line_no, std::string_view line) {
    last_line = line_no;
    if (IsBlank(line)) return;
    auto tok = SplitWhitespace(line);
    if (dim < 0) {
      if (tok.size() != 1 || tok[0].substr(0, 4) != "dim=" ||
          !ParseInt(tok[0].substr(4), &dim) || dim < 1) {
        throw ParseError(source, line_no, "expected header 'dim=<D>'");
      }
      return;
    }
    if (tok.size() < 2) {
      throw ParseError(source, line_no, "expected 'utt_id n_chunks values...'");
    }
    ChunkEmbeddings e;
    e.utt_id = std::string(tok[0]);
    e.dim = static_cast<int>(dim);
    long long n_chunks = 0;
    if (!ParseInt(tok[1], &n_chunks) || n_chunks < 1) {
      throw ParseError(source, line_no,
                       "invalid chunk count " + Quote(tok[1]));
    }
    const size_t expected = static_cast<size_t>(n_chunks * dim);
    if (tok.size() - 2 != expected) {
      throw ParseError(source, line_no,
                       "dimension mismatch: expected " +
                           std::to_string(expected) + " values (n_chunks=" +
                           std::to_string(n_chunks) +
                           ", dim=" + std::to_string(dim) + "), got " +
                           std::to_string(tok.size() - 2));
    }
    e.values.resize(expected);
    for (size_t i = 0; i < expected; ++i) {
      if (!ParseDouble(tok[i + 2], &e.values[i])) {
        throw ParseError(source, line_no,
                         "invalid or non-finite value " + Quote(tok[i + 2]));
      }
    }
    if (!seen.insert(e.utt_id).second) {
      throw ParseError(source, line_no, "duplicate utterance id " + e.utt_id);
    }
    out.push_back(std::move(e));
  });
  if (dim < 0) throw ParseError(source, last_line + 1, "missing 'dim=' header");
  return out;
}

std::vector<ChunkEmbeddings> ReadEmbeddings(const std::string& path) {
  return ParseEmbeddings(ReadFile(path), path);
}

std::string FormatEmbeddings(const std::vector<ChunkEmbeddings>& records) {
  if (records.empty()) throw Error("no records");
  std::set<std::string> seen;
  const int dim = records.front().dim;
  std::string out = "dim=" + std::to_string(dim) + "\n";
  for (const auto& r : records) {
    ValidateChunkEmbeddings(r);
    if (r.dim != dim) {
      throw Error("inconsistent dims: " + r.utt_id + " has " +
                  std::to_string(r.dim) + ", expected " + std::to_string(dim));
    }
    if (!seen.insert(r.utt_id).second) {
      throw Error("duplicate utterance id " + r.utt_id);
    }
    out += r.utt_id;
    out += ' ';
    out += std::to_string(r.NumChunks());
    for (double v : r.values) {
      out += ' ';
      out += FormatDouble(v);
    }
    out += '\n';
  }
  return out;
}

void WriteEmbeddings(const std::vector<ChunkEmbeddings>& records,
                     const std::string& path) {
  WriteFileAtomic(path, FormatEmbeddings(records));
}

// ---------------------------------------------------------------------------
// Trials and speaker maps

std::vector<Trial> ParseTrials(std::string_view text, const std::string& source,
                               bool expect_labels) {
  std::vector<Trial> out;
  ForEachLine(text, [&](size_t line_no, std::string_view line) {
    if (IsBlank(line)) return;
    auto tok = SplitWhitespace(line);
    Trial t;
    if (tok.size() == 3) {
      if (tok[0] == "1") {
        t.label = true;
      } else if (tok[0] == "0") {
        t.label = false;
      } else {
        throw ParseError(source, line_no,
                         "invalid label " + Quote(tok[0]) + " (expected 0/1)");
      }
      t.enroll_id = std::string(tok[1]);
      t.test_id = std::string(tok[2]);
    } else if (tok.size() == 2) {
      if (expect_labels) throw ParseError(source, line_no, "missing label");
      t.enroll_id = std::string(tok[0]);
      t.test_id = std::string(tok[1]);
    } else {
      throw ParseError(source, line_no,
                       "wrong field count " + std::to_string(tok.size()));
    }
    out.push_back(std::move(t));
  });
  return out;
}

std::vector<Trial> ReadTrials(const std::string& path, bool expect_labels) {
  return ParseTrials(ReadFile(path), path, expect_labels);
}

void WriteTrials(const std::vector<Trial>& trials, const std::string& path) {
  std::string out;
  for (const auto& t : trials) {
    if (t.label) out += *t.label ? "1 " : "0 ";
    out += t.enroll_id + " " + t.test_id + "\n";
  }
  WriteFileAtomic(path, out);
}

SpeakerMap ReadSpeakerMap(const std::string& path) {
  SpeakerMap out;
  ForEachLine(ReadFile(path), [&](size_t line_no, std::string_view line) {
    if (IsBlank(line)) return;
    auto tok = SplitWhitespace(line);
    if (tok.size() != 2) {
      throw ParseError(path, line_no, "expected 'utt_id speaker_id'");
    }
    if (!out.emplace(std::string(tok[0]), std::string(tok[1])).second) {
      throw ParseError(path, line_no,
                       "duplicate utterance id " + std::string(tok[0]));
    }
  });
  return out;
}

void WriteSpeakerMap(const SpeakerMap& map, const std::string& path) {
  std::string out;
  for (const auto& [utt, spk] : map) out += utt + " " + spk + "\n";
  WriteFileAtomic(path, out);
}

// ---------------------------------------------------------------------------
// Attribute schema and table

AttributeSchema ParseSchema(std::string_view text, const std::string& source) {
  AttributeSchema out;
  std::set<std::string> seen;
  ForEachLine(text, [&](size_t line_no, std::string_view line) {
    if (IsBlank(line)) return;
    auto tok = SplitWhitespace(line);
    if (tok.size() != 3) {
      throw ParseError(source, line_no, "expected 'name kind transform'");
    }
    AttributeColumn col;
    col.name = std::string(tok[0]);
    if (col.name == "utt_id" || col.name.find(',') != std::string::npos) {
      throw ParseError(source, line_no, "invalid column name " + Quote(tok[0]));
    }
    if (tok[1] == "real") {
      col.kind = AttributeKind::kReal;
    } else if (tok[1] == "categorical") {
      col.kind = AttributeKind::kCategorical;
    } else {
      throw ParseError(source, line_no, "unknown kind " + Quote(tok[1]));
    }
    if (tok[2] == "identity") {
      col.transform = AttributeTransform::kIdentity;
    } else if (tok[2] == "log1p") {
      col.transform = AttributeTransform::kLog1p;
    } else if (tok[2] == "match") {
      col.transform = AttributeTransform::kMatch;
    } else {
      throw ParseError(source, line_no, "unknown transform " + Quote(tok[2]));
    }
    const bool categorical = col.kind == AttributeKind::kCategorical;
    const bool match = col.transform == AttributeTransform::kMatch;
    if (categorical != match) {
      throw ParseError(source, line_no,
                       std::string("transform ") + TransformName(col.transform) +
                           " is not valid for kind " + KindName(col.kind));
    }
    if (!seen.insert(col.name).second) {
      throw ParseError(source, line_no, "duplicate column " + col.name);
    }
    out.push_back(std::move(col));
  });
  return out;
}

AttributeSchema ReadSchema(const std::string& path) {
  return ParseSchema(ReadFile(path), path);
}

void WriteSchema(const AttributeSchema& schema, const std::string& path) {
  std::string out;
  for (const auto& c : schema) {
    out += c.name + " " + KindName(c.kind) + " " + TransformName(c.transform) +
           "\n";
  }
  WriteFileAtomic(path, out);
}

const std::vector<AttributeValue>* AttributeTable::Find(
    const std::string& utt_id) const {
  auto it = index_.find(utt_id);
  return it == index_.end() ? nullptr : &rows[it->second];
}

void AttributeTable::Add(std::string utt_id, std::vector<AttributeValue> row) {
  if (row.size() != columns.size()) {
    throw Error("attribute row for " + utt_id + " has " +
                std::to_string(row.size()) + " values, expected " +
                std::to_string(columns.size()));
  }
  if (!index_.emplace(utt_id, utt_ids.size()).second) {
    throw Error("duplicate utterance id " + utt_id);
  }
  utt_ids.push_back(std::move(utt_id));
  rows.push_back(std::move(row));
}

AttributeTable ParseAttributes(std::string_view text,
                               const std::string& source,
                               const AttributeSchema& schema) {
  AttributeTable table;
  table.columns = schema;
  // file column index -> schema column index
  std::vector<size_t> mapping;
  bool have_header = false;
  size_t last_line = 0;
  ForEachLine(text, [&](size_t line_no, std::string_view line) {
    last_line = line_no;
    if (line.empty()) return;
    auto fields = SplitChar(line, ',');
    if (!have_header) {
      if (fields[0] != "utt_id") {
        throw ParseError(source, line_no, "missing utt_id column");
      }
      std::vector<bool> present(schema.size(), false);
      for (size_t i = 1; i < fields.size(); ++i) {
        size_t k = 0;
        while (k < schema.size() && schema[k].name != fields[i]) ++k;
        if (k == schema.size()) {
          throw ParseError(source, line_no,
                           "column " + Quote(fields[i]) + " not in schema");
        }
        if (present[k]) {
          throw ParseError(source, line_no,
                           "duplicate column " + Quote(fields[i]));
        }
        present[k] = true;
        mapping.push_back(k);
      }
      for (size_t k = 0; k < schema.size(); ++k) {
        if (!present[k]) {
          throw ParseError(source, line_no,
                           "schema column " + Quote(schema[k].name) +
                               " missing from header");
        }
      }
      have_header = true;
      return;
    }
    if (fields.size() != mapping.size() + 1) {
      throw ParseError(source, line_no,
                       "row has " + std::to_string(fields.size()) +
                           " fields, header has " +
                           std::to_string(mapping.size() + 1));
    }
    std::string utt(fields[0]);
    if (utt.empty() || HasWhitespace(utt)) {
      throw ParseError(source, line_no, "invalid utt_id " + Quote(utt));
    }
    if (table.Find(utt) != nullptr) {
      throw ParseError(source, line_no, "duplicate utterance id " + utt);
    }
    std::vector<AttributeValue> row(schema.size());
    for (size_t i = 1; i < fields.size(); ++i) {
      const size_t k = mapping[i - 1];
      std::string_view f = fields[i];
      if (f.empty()) continue;
      if (schema[k].kind == AttributeKind::kReal) {
        double v = 0.0;
        if (!ParseDouble(f, &v)) {
          throw ParseError(source, line_no,
                           "column " + schema[k].name + ": value " + Quote(f) +
                               " is not a finite real");
        }
        row[k] = v;
      } else {
        row[k] = std::string(f);
      }
    }
    table.Add(std::move(utt), std::move(row));
  });
  if (!have_header) throw ParseError(source, last_line + 1, "missing header");
  return table;
}

AttributeTable ReadAttributes(const std::string& path,
                              const AttributeSchema& schema) {
  return ParseAttributes(ReadFile(path), path, schema);
}

void WriteAttributes(const AttributeTable& table, const std::string& path) {
  std::string out = "utt_id";
  for (const auto& c : table.columns) out += "," + c.name;
  out += '\n';
  for (size_t r = 0; r < table.rows.size(); ++r) {
    out += table.utt_ids[r];
    for (const auto& v : table.rows[r]) {
      out += ',';
      if (const double* d = std::get_if<double>(&v)) {
        out += FormatDouble(*d);
      } else if (const std::string* s = std::get_if<std::string>(&v)) {
        if (s->find_first_of(",\n") != std::string::npos) {
          throw Error("categorical value " + Quote(*s) +
                      " cannot be written to CSV");
        }
        out += *s;
      }
    }
    out += '\n';
  }
  WriteFileAtomic(path, out);
}

// ---------------------------------------------------------------------------
// Scores

std::string FormatScores(const std::vector<Trial>& trials,
                         std::span<const double> scores) {
  if (trials.size() != scores.size()) {
    throw Error("score count mismatch: " + std::to_string(scores.size()) +
                " scores for " + std::to_string(trials.size()) + " trials");
  }
  std::string out;
  for (size_t i = 0; i < trials.size(); ++i) {
    if (!std::isfinite(scores[i])) {
      throw Error("non-finite score for trial " + trials[i].enroll_id + " " +
                  trials[i].test_id);
    }
    out += trials[i].enroll_id + " " + trials[i].test_id + " " +
           FormatDouble(scores[i]) + "\n";
  }
  return out;
}

void WriteScores(const std::vector<Trial>& trials,
                 std::span<const double> scores, const std::string& path) {
  WriteFileAtomic(path, FormatScores(trials, scores));
}

std::vector<ScoredTrial> ParseScores(std::string_view text,
                                     const std::string& source) {
  std::vector<ScoredTrial> out;
  ForEachLine(text, [&](size_t line_no, std::string_view line) {
    if (IsBlank(line)) return;
    auto tok = SplitWhitespace(line);
    if (tok.size() != 3) {
      throw ParseError(source, line_no, "expected 'enroll test score'");
    }
    ScoredTrial s{std::string(tok[0]), std::string(tok[1]), 0.0};
    if (!ParseDouble(tok[2], &s.score)) {
      throw ParseError(source, line_no,
                       "invalid or non-finite score " + Quote(tok[2]));
    }
    out.push_back(std::move(s));
  });
  return out;
}

std::vector<ScoredTrial> ReadScores(const std::string& path) {
  return ParseScores(ReadFile(path), path);
}

// ---------------------------------------------------------------------------
// Feature tables

void WriteFeatures(const FeatureTable& table, const std::string& path) {
  if (table.ids.size() != table.rows.size()) {
    throw Error("feature table: id/row count mismatch");
  }
  std::string out = "enroll,test";
  for (const auto& n : table.names) out += "," + n;
  out += '\n';
  for (size_t r = 0; r < table.rows.size(); ++r) {
    if (table.rows[r].size() != table.names.size()) {
      throw Error("feature table: row width mismatch");
    }
    out += table.ids[r].first + "," + table.ids[r].second;
    for (double v : table.rows[r]) {
      out += ',';
      if (!std::isnan(v)) {
        if (!std::isfinite(v)) throw Error("feature table: infinite value");
        out += FormatDouble(v);
      }
    }
    out += '\n';
  }
  WriteFileAtomic(path, out);
}

FeatureTable ParseFeatures(std::string_view text, const std::string& source) {
  FeatureTable table;
  bool have_header = false;
  size_t last_line = 0;
  ForEachLine(text, [&](size_t line_no, std::string_view line) {
    last_line = line_no;
    if (line.empty()) return;
    auto fields = SplitChar(line, ',');
    if (!have_header) {
      if (fields.size() < 2 || fields[0] != "enroll" || fields[1] != "test") {
        throw ParseError(source, line_no, "expected header 'enroll,test,...'");
      }
      std::set<std::string> seen;
      for (size_t i = 2; i < fields.size(); ++i) {
        if (fields[i].empty() || !seen.insert(std::string(fields[i])).second) {
          throw ParseError(source, line_no,
                           "empty or duplicate feature name " +
                               Quote(fields[i]));
        }
        table.names.emplace_back(fields[i]);
      }
      have_header = true;
      return;
    }
    if (fields.size() != table.names.size() + 2) {
      throw ParseError(source, line_no,
                       "row has " + std::to_string(fields.size()) +
                           " fields, header has " +
                           std::to_string(table.names.size() + 2));
    }
    Vector row(table.names.size(), std::nan(""));
    for (size_t i = 2; i < fields.size(); ++i) {
      if (fields[i].empty()) continue;
      if (!ParseDouble(fields[i], &row[i - 2])) {
        throw ParseError(source, line_no,
                         "feature " + table.names[i - 2] + ": invalid value " +
                             Quote(fields[i]));
      }
    }
    table.ids.emplace_back(std::string(fields[0]), std::string(fields[1]));
    table.rows.push_back(std::move(row));
  });
  if (!have_header) throw ParseError(source, last_line + 1, "missing header");
  return table;
}

FeatureTable ReadFeatures(const std::string& path) {
  return ParseFeatures(ReadFile(path), path);
}

// ---------------------------------------------------------------------------
// Fusion model

void ValidateFusionModel(const FusionModel& m) {
  const size_t n = m.feature_names.size();
  if (m.weights.size() != n || m.minmax.size() != n || m.medians.size() != n) {
    throw Error("fusion model: weights/minmax/medians must match " +
                std::to_string(n) + " feature names");
  }
  std::set<std::string> seen;
  for (const auto& name : m.feature_names) {
    if (!seen.insert(name).second) {
      throw Error("fusion model: duplicate feature " + name);
    }
  }
  for (size_t i = 0; i < n; ++i) {
    const auto [lo, hi] = m.minmax[i];
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
      throw Error("fusion model: invalid min-max range for " +
                  m.feature_names[i]);
    }
    if (!std::isfinite(m.weights[i]) || !std::isfinite(m.medians[i])) {
      throw Error("fusion model: non-finite parameter for " +
                  m.feature_names[i]);
    }
  }
  if (!std::isfinite(m.intercept)) throw Error("fusion model: bad intercept");
  if (!(m.lambda >= 0.0) || !std::isfinite(m.lambda)) {
    throw Error("fusion model: lambda must be >= 0");
  }
}

std::string FormatFusionModel(const FusionModel& m) {
  ValidateFusionModel(m);
  json j;
  j["feature_names"] = m.feature_names;
  j["weights"] = m.weights;
  j["intercept"] = m.intercept;
  json mm = json::array();
  for (const auto& [lo, hi] : m.minmax) mm.push_back({lo, hi});
  j["minmax"] = mm;
  j["medians"] = m.medians;
  j["lambda"] = m.lambda;
  j["objective"] = m.objective;
  j["iterations"] = m.iterations;
  return j.dump(2) + "\n";
}

void WriteFusionModel(const FusionModel& model, const std::string& path) {
  WriteFileAtomic(path, FormatFusionModel(model));
}

FusionModel ParseFusionModel(std::string_view text, const std::string& source) {
  FusionModel m;
  try {
    json j = json::parse(text);
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    m.weights = j.at("weights").get<Vector>();
    m.intercept = j.at("intercept").get<double>();
    for (const auto& p : j.at("minmax")) {
      if (!p.is_array() || p.size() != 2) throw Error("minmax entry not a pair");
      m.minmax.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    m.medians = j.at("medians").get<Vector>();
    m.lambda = j.at("lambda").get<double>();
    m.objective = j.value("objective", 0.0);
    m.iterations = j.value("iterations", 0);
  } catch (const json::exception& e) {
    throw Error(source + ": invalid fusion model: " + e.what());
  }
  try {
    ValidateFusionModel(m);
  } catch (const Error& e) {
    throw Error(source + ": " + e.what());
  }
  return m;
}

FusionModel ReadFusionModel(const std::string& path) {
  return ParseFusionModel(ReadFile(path), path);
}

}  // namespace asvkit
