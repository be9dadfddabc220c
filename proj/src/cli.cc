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

#include "asvkit/cli.h"

#include <cstdio>
#include <filesystem>
#include <map>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"

#include "asvkit/asnorm.h"
#include "asvkit/curation.h"
#include "asvkit/dataio.h"
#include "asvkit/fusion.h"
#include "asvkit/kernels.h"
#include "asvkit/metrics.h"
#include "asvkit/qmf.h"
#include "asvkit/synth.h"
#include "asvkit/trainspec.h"

namespace asvkit {

namespace {

namespace fs = std::filesystem;

std::vector<Trial> TrialsOf(const std::vector<ScoredTrial>& scored) {
  std::vector<Trial> out;
  for (const auto& s : scored) out.push_back({s.enroll_id, s.test_id, {}});
  return out;
}

void CheckAligned(const std::string& what, const std::vector<Trial>& ref,
                  size_t n, const std::function<std::pair<const std::string&,
                                                          const std::string&>(
                                size_t)>& ids) {
  if (n != ref.size()) {
    throw Error(what + " has " + std::to_string(n) + " rows, expected " +
                std::to_string(ref.size()));
  }
  for (size_t i = 0; i < n; ++i) {
    const auto [e, t] = ids(i);
    if (e != ref[i].enroll_id || t != ref[i].test_id) {
      throw Error(what + " row " + std::to_string(i + 1) + " is (" + e + ", " +
                  t + "), expected (" + ref[i].enroll_id + ", " +
                  ref[i].test_id + ")");
    }
  }
}

// Score columns named by file stem; QMF columns by the feature header.
struct FeatureInputs {
  std::vector<std::string> names;
  std::vector<Trial> trials;
  Matrix x;
};

FeatureInputs LoadFeatures(const std::vector<std::string>& score_paths,
                           const std::string& qmf_path,
                           const std::vector<Trial>* reference) {
  FeatureInputs in;
  std::vector<std::vector<ScoredTrial>> systems;
  std::set<std::string> seen;
  for (const auto& p : score_paths) {
    std::string name = fs::path(p).stem().string();
    if (!seen.insert(name).second) {
      throw Error("two score files share the feature name " + name);
    }
    in.names.push_back(name);
    systems.push_back(ReadScores(p));
  }
  in.trials = reference ? *reference : TrialsOf(systems.front());
  for (size_t k = 0; k < systems.size(); ++k) {
    const auto& sys = systems[k];
    CheckAligned(score_paths[k], in.trials, sys.size(), [&](size_t i) {
      return std::pair<const std::string&, const std::string&>(
          sys[i].enroll_id, sys[i].test_id);
    });
  }
  FeatureTable qmf;
  if (!qmf_path.empty()) {
    qmf = ReadFeatures(qmf_path);
    CheckAligned(qmf_path, in.trials, qmf.rows.size(), [&](size_t i) {
      return std::pair<const std::string&, const std::string&>(
          qmf.ids[i].first, qmf.ids[i].second);
    });
    for (const auto& n : qmf.names) {
      if (!seen.insert(n).second) throw Error("duplicate feature name " + n);
      in.names.push_back(n);
    }
  }
  in.x = Matrix(in.trials.size(), in.names.size());
  for (size_t i = 0; i < in.trials.size(); ++i) {
    auto row = in.x.Row(i);
    for (size_t k = 0; k < systems.size(); ++k) row[k] = systems[k][i].score;
    for (size_t j = 0; j < qmf.names.size(); ++j) {
      row[systems.size() + j] = qmf.rows[i][j];
    }
  }
  return in;
}

std::string EvalReport(std::span<const double> scores,
                       const std::vector<bool>& labels,
                       const std::vector<double>& p_targets) {
  const DetCurve curve = ComputeDetCurve(scores, labels);
  char buf[128];
  std::snprintf(buf, sizeof(buf), "EER=%.2f%%", 100.0 * Eer(curve));
  std::string line = buf;
  for (double p : p_targets) {
    DcfParams params;
    params.p_target = p;
    std::snprintf(buf, sizeof(buf), " minDCF(p=%g)=%.4f", p,
                  MinDcf(curve, params).cost);
    line += buf;
  }
  return line;
}

StaircaseSpec ParseStaircase(const std::string& text, double max_lr) {
  auto parts = SplitChar(text, ',');
  if (parts.size() != 4) {
    throw CLI::ValidationError("--spec", "expected gamma,warmup,plateau,per");
  }
  StaircaseSpec s;
  long long w = 0, p = 0, e = 0;
  if (!ParseDouble(parts[0], &s.gamma) || !ParseInt(parts[1], &w) ||
      !ParseInt(parts[2], &p) || !ParseInt(parts[3], &e)) {
    throw CLI::ValidationError("--spec", "expected gamma,warmup,plateau,per");
  }
  s.warmup_epochs = static_cast<int>(w);
  s.plateau_epochs = static_cast<int>(p);
  s.epochs_per = static_cast<int>(e);
  s.max_lr = max_lr;
  return s;
}

SynthConfig ParseSynthConfig(const nlohmann::json& j) {
  SynthConfig c;
  c.n_speakers = j.value("n_speakers", c.n_speakers);
  c.utts_per_speaker = j.value("utts_per_speaker", c.utts_per_speaker);
  c.chunks_per_utt = j.value("chunks_per_utt", c.chunks_per_utt);
  c.dim = j.value("dim", c.dim);
  c.within_spread = j.value("within_spread", c.within_spread);
  c.between_spread = j.value("between_spread", c.between_spread);
  c.seed = j.value("seed", c.seed);
  c.attribute_noise = j.value("attribute_noise", c.attribute_noise);
  c.quality_spread = j.value("quality_spread", c.quality_spread);
  return c;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Speaker verification back-end: scoring, AS-Norm, QMF fusion, "
               "evaluation and data curation"};
  app.name("asvkit");
  app.require_subcommand(1);

  // score
  std::string emb_path, trials_path, out_path;
  auto* score = app.add_subcommand("score", "Chunk-level pairwise cosine scoring");
  score->add_option("--embeddings", emb_path, "Embedding store")->required();
  score->add_option("--trials", trials_path, "Trial list")->required();
  score->add_option("--out", out_path, "Output score file")->required();

  // cohort
  std::string spk_path;
  size_t per_speaker = 20;
  uint64_t seed = 0;
  auto* cohort = app.add_subcommand("cohort", "Build an AS-Norm cohort");
  cohort->add_option("--embeddings", emb_path)->required();
  cohort->add_option("--speakers", spk_path, "utt_id speaker_id map")
      ->required();
  cohort->add_option("--per-speaker", per_speaker)->capture_default_str();
  cohort->add_option("--seed", seed)->capture_default_str();
  cohort->add_option("--out", out_path)->required();

  // asnorm
  std::string scores_path, cohort_path;
  size_t top_n = 100;
  auto* asnorm = app.add_subcommand("asnorm", "Adaptive symmetric normalization");
  asnorm->add_option("--scores", scores_path)->required();
  asnorm->add_option("--embeddings", emb_path)->required();
  asnorm->add_option("--cohort", cohort_path)->required();
  asnorm->add_option("--top-n", top_n)->capture_default_str();
  asnorm->add_option("--out", out_path)->required();

  // qmf
  std::string attr_path, schema_path;
  auto* qmf = app.add_subcommand("qmf", "Per-trial quality measure features");
  qmf->add_option("--embeddings", emb_path);
  qmf->add_option("--attributes", attr_path);
  qmf->add_option("--schema", schema_path);
  qmf->add_option("--trials", trials_path)->required();
  qmf->add_option("--out", out_path)->required();

  // fuse-fit / fuse-apply
  std::vector<std::string> score_files;
  std::string qmf_path, model_path;
  double lambda = 0.01;
  FitOptions fit_opts;
  bool emit_logit = false;
  auto* fit = app.add_subcommand("fuse-fit", "Fit L1 logistic fusion");
  fit->add_option("--scores", score_files, "Score file (repeat per system)")
      ->required();
  fit->add_option("--qmf", qmf_path, "QMF feature CSV");
  fit->add_option("--trials", trials_path, "Labeled trial list")->required();
  fit->add_option("--lambda", lambda)->capture_default_str();
  fit->add_option("--max-iters", fit_opts.max_iters)->capture_default_str();
  fit->add_option("--tol", fit_opts.tol)->capture_default_str();
  fit->add_option("--out", out_path, "Model JSON")->required();

  auto* apply = app.add_subcommand("fuse-apply", "Apply a fitted fusion");
  apply->add_option("--model", model_path)->required();
  apply->add_option("--scores", score_files)->required();
  apply->add_option("--qmf", qmf_path);
  apply->add_option("--out", out_path)->required();
  apply->add_flag("--logit", emit_logit, "Write logits instead of probabilities");

  // eval
  std::vector<double> p_targets;
  auto* eval = app.add_subcommand("eval", "EER and minDCF");
  eval->add_option("--scores", scores_path)->required();
  eval->add_option("--trials", trials_path, "Labeled trial list")->required();
  eval->add_option("--p-target", p_targets, "Repeatable; default 0.05 0.01");

  // ddf
  std::string src_emb, src_spk, tgt_emb, tgt_spk;
  DdfConfig ddf_cfg;
  auto* ddf = app.add_subcommand("ddf", "Domain dataset filtering");
  ddf->add_option("--source-emb", src_emb)->required();
  ddf->add_option("--source-spk", src_spk)->required();
  ddf->add_option("--target-emb", tgt_emb)->required();
  ddf->add_option("--target-spk", tgt_spk)->required();
  ddf->add_option("--top-k", ddf_cfg.top_k)->capture_default_str();
  ddf->add_option("--dedup", ddf_cfg.dedup_threshold)->capture_default_str();
  ddf->add_option("--out", out_path)->required();

  // schedule
  std::string sched_name, sched_spec = "0.5,2,6,2";
  double max_lr = 1.0;
  int epochs = -1;
  auto* sched = app.add_subcommand("schedule", "Print a training schedule as CSV");
  sched->add_option("--name", sched_name)
      ->required()
      ->check(CLI::IsMember({"base", "finetune", "staircase"}));
  sched->add_option("--spec", sched_spec, "gamma,warmup,plateau,per")
      ->capture_default_str();
  sched->add_option("--max-lr", max_lr)->capture_default_str();
  sched->add_option("--epochs", epochs, "Default: full schedule (40 for staircase)");

  // synth
  std::string config_path, out_dir;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  synth->add_option("--config", config_path, "JSON config")->required();
  synth->add_option("--out", out_dir, "Output directory")->required();

  std::vector<std::string> argv_store{"asvkit"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (score->parsed()) {
      const EmbeddingStore store(ReadEmbeddings(emb_path));
      const auto trials = ReadTrials(trials_path, false);
      const auto scored = kernels::ScoreTrials(store, trials);
      Vector values;
      for (const auto& s : scored) values.push_back(s.value);
      WriteScores(trials, values, out_path);
    } else if (cohort->parsed()) {
      const EmbeddingStore store(ReadEmbeddings(emb_path));
      AsNormConfig cfg;
      cfg.utterances_per_speaker = per_speaker;
      const Cohort c = BuildCohort(store, ReadSpeakerMap(spk_path), cfg, seed);
      WriteEmbeddings(CohortToRecords(c), out_path);
    } else if (asnorm->parsed()) {
      const auto scored = ReadScores(scores_path);
      const EmbeddingStore store(ReadEmbeddings(emb_path));
      const Cohort c = CohortFromRecords(ReadEmbeddings(cohort_path));
      AsNormConfig cfg;
      cfg.top_n = top_n;
      Vector raw;
      for (const auto& s : scored) raw.push_back(s.score);
      const auto trials = TrialsOf(scored);
      WriteScores(trials, AsNormTrials(raw, trials, store, c, cfg), out_path);
    } else if (qmf->parsed()) {
      if (attr_path.empty() != schema_path.empty()) {
        throw CLI::ValidationError("--attributes and --schema go together");
      }
      if (attr_path.empty() && emb_path.empty()) {
        throw CLI::ValidationError("need --embeddings and/or --attributes");
      }
      std::optional<AttributeTable> attrs;
      if (!attr_path.empty()) {
        attrs = ReadAttributes(attr_path, ReadSchema(schema_path));
      }
      std::optional<EmbeddingStore> store;
      if (!emb_path.empty()) store.emplace(ReadEmbeddings(emb_path));
      const auto trials = ReadTrials(trials_path, false);
      WriteFeatures(BuildQmfTable(trials, attrs ? &*attrs : nullptr,
                                  store ? &*store : nullptr),
                    out_path);
    } else if (fit->parsed()) {
      const auto trials = ReadTrials(trials_path, true);
      FeatureInputs in = LoadFeatures(score_files, qmf_path, &trials);
      FusionModel model;
      model.feature_names = in.names;
      model.medians = FeatureMedians(in.x);
      ImputeMissing(&in.x, model.medians);
      model.minmax = MinMaxFit(in.x);
      MinMaxApplyInPlace(&in.x, model.minmax);
      FusionProblem problem;
      problem.x = std::move(in.x);
      for (const auto& t : trials) problem.labels.push_back(*t.label);
      problem.lambda = lambda;
      problem.feature_names = in.names;
      const FittedFusion fitted = FitFusion(problem, fit_opts);
      model.weights = fitted.weights;
      model.intercept = fitted.intercept;
      model.lambda = lambda;
      model.objective = fitted.objective;
      model.iterations = fitted.iterations;
      WriteFusionModel(model, out_path);
      size_t nonzero = 0;
      for (double w : fitted.weights) nonzero += w != 0.0;
      out << "features=" << in.names.size() << " nonzero=" << nonzero
          << " objective=" << FormatDouble(fitted.objective)
          << " iterations=" << fitted.iterations
          << (fitted.converged ? "" : " (max iterations reached)") << "\n";
    } else if (apply->parsed()) {
      const FusionModel model = ReadFusionModel(model_path);
      FeatureInputs in = LoadFeatures(score_files, qmf_path, nullptr);
      const size_t n = std::max(in.names.size(), model.feature_names.size());
      for (size_t i = 0; i < n; ++i) {
        const std::string have =
            i < in.names.size() ? in.names[i] : "<none>";
        const std::string want =
            i < model.feature_names.size() ? model.feature_names[i] : "<none>";
        if (have != want) {
          throw Error("feature mismatch at position " + std::to_string(i + 1) +
                      ": model expects '" + want + "', input provides '" +
                      have + "'");
        }
      }
      ImputeMissing(&in.x, model.medians);
      MinMaxApplyInPlace(&in.x, model.minmax);
      Vector fused(in.trials.size());
      for (size_t i = 0; i < fused.size(); ++i) {
        const double logit =
            FuseLogit(in.x.Row(i), model.weights, model.intercept);
        fused[i] = emit_logit ? logit : Sigmoid(logit);
      }
      WriteScores(in.trials, fused, out_path);
    } else if (eval->parsed()) {
      if (p_targets.empty()) p_targets = {0.05, 0.01};
      const auto trials = ReadTrials(trials_path, true);
      const auto scored = ReadScores(scores_path);
      std::map<std::pair<std::string, std::string>, bool> label_of;
      for (const auto& t : trials) {
        label_of[{t.enroll_id, t.test_id}] = *t.label;
      }
      Vector values;
      std::vector<bool> labels;
      for (const auto& s : scored) {
        auto it = label_of.find({s.enroll_id, s.test_id});
        if (it == label_of.end()) {
          throw Error("no label for trial " + s.enroll_id + " " + s.test_id);
        }
        values.push_back(s.score);
        labels.push_back(it->second);
      }
      out << EvalReport(values, labels, p_targets) << "\n";
    } else if (ddf->parsed()) {
      const EmbeddingStore src(ReadEmbeddings(src_emb));
      const EmbeddingStore tgt(ReadEmbeddings(tgt_emb));
      const auto selection =
          DdfSelect(BuildProfiles(src, ReadSpeakerMap(src_spk)),
                    BuildProfiles(tgt, ReadSpeakerMap(tgt_spk)), ddf_cfg);
      WriteFileAtomic(out_path, FormatDdfCsv(selection));
    } else if (sched->parsed()) {
      std::string csv;
      if (sched_name == "staircase") {
        const StaircaseSpec spec = ParseStaircase(sched_spec, max_lr);
        if (epochs < 0) epochs = 40;
        csv = "epoch,lr\n";
        for (int e = 0; e < epochs; ++e) {
          csv += std::to_string(e) + "," + FormatDouble(StaircaseLr(spec, e)) +
                 "\n";
        }
      } else {
        const PhaseSchedule s =
            sched_name == "base" ? BaseSchedule() : FinetuneSchedule();
        if (epochs < 0) epochs = s.total_epochs;
        csv = "epoch,lr,margin\n";
        for (int e = 0; e < epochs; ++e) {
          csv += std::to_string(e) + "," + FormatDouble(PhaseLr(s, e)) + "," +
                 FormatDouble(PhaseMargin(s, e)) + "\n";
        }
      }
      out << csv;
    } else if (synth->parsed()) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(ReadFile(config_path));
      } catch (const nlohmann::json::exception& e) {
        throw Error(config_path + ": " + e.what());
      }
      const SynthConfig cfg = ParseSynthConfig(j);
      const auto trial_cfg = j.value("trials", nlohmann::json::object());
      const size_t n_pos = trial_cfg.value("n_pos", size_t{500});
      const size_t n_neg = trial_cfg.value("n_neg", size_t{500});
      const uint64_t trial_seed = trial_cfg.value("seed", cfg.seed);
      const SynthDataset data = GenDataset(cfg);
      const auto trials = GenTrials(data.speakers, n_pos, n_neg, trial_seed);
      const AttributeTable attrs = GenAttributes(data.speakers, cfg);
      fs::create_directories(out_dir);
      const fs::path dir(out_dir);
      WriteEmbeddings(data.embeddings, (dir / "embeddings.txt").string());
      WriteSpeakerMap(data.speakers, (dir / "speakers.txt").string());
      WriteSchema(attrs.columns, (dir / "schema.txt").string());
      WriteAttributes(attrs, (dir / "attributes.csv").string());
      WriteTrials(trials, (dir / "trials.txt").string());
    }
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace asvkit
