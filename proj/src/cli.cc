// Copyright (c) 2026 The advtrace Authors
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

#include "advtrace/cli.h"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "advtrace/artifact.h"
#include "advtrace/embedding_store.h"
#include "advtrace/error.h"
#include "advtrace/fusion.h"
#include "advtrace/manifest.h"
#include "advtrace/metrics.h"
#include "advtrace/projection.h"
#include "advtrace/rng.h"
#include "advtrace/scoring.h"
#include "advtrace/synthetic.h"
#include "advtrace/trials.h"
#include "json.hpp"

namespace advtrace::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

// Input files must exist before any work starts; output directories too.
void RequireInput(const std::string& path, const char* what) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw IoError(std::string(what) + " '" + path + "' does not exist or is "
                  "not a regular file");
  }
}

void RequireOutput(const std::string& path,
                   std::initializer_list<const std::string*> inputs) {
  const fs::path p(path);
  const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw IoError("output directory '" + dir.string() + "' does not exist");
  }
  for (const std::string* in : inputs) {
    if (in == nullptr || in->empty()) continue;
    if (fs::weakly_canonical(p, ec) == fs::weakly_canonical(*in, ec)) {
      throw ValidationError("output '" + path + "' would overwrite input '" +
                            *in + "'");
    }
  }
}

std::ofstream OpenOutput(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

std::string ReadText(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::optional<Split> SplitOption(const std::string& name) {
  if (name == "all") return std::nullopt;
  auto split = ParseSplit(name);
  if (!split) throw ValidationError("unknown split '" + name + "'");
  return split;
}

std::vector<UtteranceRecord> SelectSplit(std::vector<UtteranceRecord> records,
                                         const std::string& split) {
  const auto s = SplitOption(split);
  return s ? FilterSplit(records, *s) : records;
}

// Seed flag shared by every stochastic subcommand.
struct SeedOption {
  std::optional<std::uint64_t> value;

  std::uint64_t Resolve(std::ostream& err) {
    if (!value) {
      std::random_device rd;
      value = (std::uint64_t{rd()} << 32) ^ rd();
      err << "note: no --seed given, generated seed " << *value << '\n';
    }
    return *value;
  }
};

void PrintConfig(std::ostream& err, const std::string& command,
                 const ordered_json& config) {
  err << "advtrace " << command << " config " << config.dump() << '\n';
}

struct SimulateArgs {
  std::size_t methods = 20;
  std::size_t samples = 100;
  std::size_t dim = 32;
  double separation = 1.0;
  double intra_std = 0.25;
  std::optional<double> bonafide_separation;
  double validation_fraction = 0.0;
  SeedOption seed;
  std::string out_manifest, out_store;
};

int RunSimulate(SimulateArgs& a, std::ostream& out, std::ostream& err) {
  RequireOutput(a.out_manifest, {});
  RequireOutput(a.out_store, {&a.out_manifest});
  ClusterSpec spec;
  spec.n_methods = a.methods;
  spec.samples_per_method = a.samples;
  spec.dim = a.dim;
  spec.separation = a.separation;
  spec.intra_std = a.intra_std;
  spec.bonafide_separation = a.bonafide_separation;
  spec.validation_fraction = a.validation_fraction;
  spec.seed = a.seed.Resolve(err);
  ordered_json config{{"methods", spec.n_methods},
                      {"samples", spec.samples_per_method},
                      {"dim", spec.dim},
                      {"separation", spec.separation},
                      {"intra_std", spec.intra_std},
                      {"validation_fraction", spec.validation_fraction},
                      {"seed", spec.seed},
                      {"rng", Rng::kAlgorithm}};
  if (spec.bonafide_separation) {
    config["bonafide_separation"] = *spec.bonafide_separation;
  }
  PrintConfig(err, "simulate", config);

  const SyntheticCorpus corpus = GenerateCorpus(spec);
  WriteManifestFile(corpus.manifest, a.out_manifest);
  WriteStoreFile(corpus.embeddings, a.out_store);
  out << ordered_json{{"utterances", corpus.manifest.size()},
                      {"manifest", a.out_manifest},
                      {"store", a.out_store}}
             .dump()
      << '\n';
  return kExitOk;
}

struct TrialsArgs {
  std::string manifest, split = "test", out;
  std::size_t e_count = 1, v_count = 1, per_class = 0;
  SeedOption seed;
};

int RunTrials(TrialsArgs& a, std::ostream& out, std::ostream& err) {
  RequireInput(a.manifest, "manifest");
  RequireOutput(a.out, {&a.manifest});
  const std::uint64_t seed = a.seed.Resolve(err);
  PrintConfig(err, "trials",
              {{"manifest", a.manifest},
               {"split", a.split},
               {"e_count", a.e_count},
               {"v_count", a.v_count},
               {"per_class", a.per_class},
               {"seed", seed},
               {"rng", Rng::kAlgorithm}});
  const auto records = SelectSplit(ReadManifestFile(a.manifest), a.split);
  const TrialList list =
      GenerateTrials(records, a.e_count, a.v_count, a.per_class, seed);
  for (const auto& ex : list.excluded) {
    err << "warning: method '" << ex.label << "' excluded (" << ex.available
        << " utterances < " << a.e_count + a.v_count << ")\n";
  }
  WriteTrialsFile(list.trials, a.out);
  out << ordered_json{{"trials", list.trials.size()},
                      {"excluded_methods", list.excluded.size()},
                      {"out", a.out}}
             .dump()
      << '\n';
  return kExitOk;
}

struct BalanceArgs {
  std::string manifest, out;
  std::size_t per_type = 1000;
  SeedOption seed;
};

int RunBalance(BalanceArgs& a, std::ostream& out, std::ostream& err) {
  RequireInput(a.manifest, "manifest");
  RequireOutput(a.out, {&a.manifest});
  const std::uint64_t seed = a.seed.Resolve(err);
  PrintConfig(err, "balance",
              {{"manifest", a.manifest},
               {"per_type", a.per_type},
               {"seed", seed},
               {"rng", Rng::kAlgorithm}});
  const auto subset = BalanceSubset(ReadManifestFile(a.manifest), a.per_type, seed);
  WriteManifestFile(subset, a.out);
  out << ordered_json{{"records", subset.size()}, {"out", a.out}}.dump() << '\n';
  return kExitOk;
}

struct ScoreArgs {
  std::string trials, store, out;
};

int RunScore(ScoreArgs& a, std::ostream& out, std::ostream& err) {
  RequireInput(a.trials, "trials file");
  RequireInput(a.store, "embedding store");
  RequireOutput(a.out, {&a.trials, &a.store});
  PrintConfig(err, "score",
              {{"trials", a.trials}, {"store", a.store}, {"out", a.out}});
  const auto trials = ReadTrialsFile(a.trials);
  const auto store = ReadStoreFile(a.store);
  const auto scored = ScoreTrials(trials, store);
  WriteScoredTrialsFile(scored, a.out);
  out << ordered_json{{"scored", scored.size()}, {"out", a.out}}.dump() << '\n';
  return kExitOk;
}

struct CalibrateArgs {
  std::string scores, out;
};

int RunCalibrate(CalibrateArgs& a, std::ostream& out, std::ostream& err) {
  RequireInput(a.scores, "scores file");
  if (!a.out.empty()) RequireOutput(a.out, {&a.scores});
  PrintConfig(err, "calibrate", {{"scores", a.scores}, {"out", a.out}});
  const auto scored = ReadScoredTrialsFile(a.scores);
  const EerResult eer = ComputeEer(scored);
  const std::string text =
      ordered_json{{"threshold", eer.threshold}, {"eer", eer.eer}}.dump(2);
  if (!a.out.empty()) OpenOutput(a.out) << text << '\n';
  out << text << '\n';
  return kExitOk;
}

struct EvaluateArgs {
  std::string scores, trials, store, threshold_file, out, roc;
  std::optional<double> threshold;
};

int RunEvaluate(EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  const bool from_scores = !a.scores.empty();
  if (from_scores == (!a.trials.empty() || !a.store.empty())) {
    throw ValidationError(
        "evaluate takes either --scores or both --trials and --store");
  }
  if (!from_scores && (a.trials.empty() || a.store.empty())) {
    throw ValidationError("--trials and --store must be given together");
  }
  if (a.threshold.has_value() == !a.threshold_file.empty()) {
    throw ValidationError(
        "evaluate needs exactly one of --threshold or --threshold-file");
  }
  if (from_scores) {
    RequireInput(a.scores, "scores file");
  } else {
    RequireInput(a.trials, "trials file");
    RequireInput(a.store, "embedding store");
  }
  if (!a.threshold_file.empty()) RequireInput(a.threshold_file, "threshold file");
  if (a.roc.empty()) {
    a.roc = fs::path(a.out).replace_extension(".roc.csv").string();
  }
  RequireOutput(a.out, {&a.scores, &a.trials, &a.store, &a.threshold_file});
  RequireOutput(a.roc, {&a.scores, &a.trials, &a.store, &a.threshold_file,
                        &a.out});

  double threshold = 0.0;
  if (a.threshold) {
    threshold = *a.threshold;
  } else {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(ReadText(a.threshold_file));
      threshold = j.at("threshold").get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("threshold file '" + a.threshold_file +
                        "': " + e.what());
    }
  }
  ordered_json config{{"threshold", threshold}, {"out", a.out}, {"roc", a.roc}};
  if (from_scores) {
    config["scores"] = a.scores;
  } else {
    config["trials"] = a.trials;
    config["store"] = a.store;
  }
  PrintConfig(err, "evaluate", config);

  std::vector<ScoredTrial> scored;
  if (from_scores) {
    scored = ReadScoredTrialsFile(a.scores);
  } else {
    scored = ScoreTrials(ReadTrialsFile(a.trials), ReadStoreFile(a.store));
  }
  const MetricsReport report = ComputeReport(scored, threshold);
  const std::string text = ReportToJson(report);
  OpenOutput(a.out) << text << '\n';
  auto roc_out = OpenOutput(a.roc);
  WriteRocCsv(ComputeRoc(scored), roc_out);
  out << text << '\n';
  return kExitOk;
}

struct DetectArgs {
  std::string manifest, store, out;
  std::string enroll_split = "train", split = "test";
  double temperature = kDefaultTemperature;
};

int RunDetect(DetectArgs& a, std::ostream& out, std::ostream& err) {
  RequireInput(a.manifest, "manifest");
  RequireInput(a.store, "embedding store");
  RequireOutput(a.out, {&a.manifest, &a.store});
  PrintConfig(err, "detect",
              {{"manifest", a.manifest},
               {"store", a.store},
               {"enroll_split", a.enroll_split},
               {"split", a.split},
               {"temperature", a.temperature},
               {"out", a.out}});
  const auto manifest = ReadManifestFile(a.manifest);
  const auto store = ReadStoreFile(a.store);
  const auto centroids =
      BuildMethodCentroids(SelectSplit(manifest, a.enroll_split), store);
  const auto scores = DetectionScores(SelectSplit(manifest, a.split), store,
                                      centroids, a.temperature);
  auto file = OpenOutput(a.out);
  WriteDetectionScores(scores, file);

  ordered_json summary{{"utterances", scores.size()},
                       {"centroids", centroids.size()}};
  const auto as_trials = DetectionAsScoredTrials(scores);
  const bool both = std::any_of(scores.begin(), scores.end(),
                                [](auto& s) { return s.is_bonafide; }) &&
                    std::any_of(scores.begin(), scores.end(),
                                [](auto& s) { return !s.is_bonafide; });
  if (both) {
    summary["auroc"] = ComputeAuroc(as_trials);
    summary["eer"] = ComputeEer(as_trials).eer;
  } else {
    err << "warning: test split lacks bonafide or spoof utterances; "
           "no detection metrics\n";
  }
  out << summary.dump(2) << '\n';
  return kExitOk;
}

struct ExtractArgs {
  std::string manifest, out, errors;
  unsigned threads = 0;
};

int RunExtract(ExtractArgs& a, std::ostream& out, std::ostream& err) {
  RequireInput(a.manifest, "manifest");
  RequireOutput(a.out, {&a.manifest});
  if (!a.errors.empty()) RequireOutput(a.errors, {&a.manifest, &a.out});
  PrintConfig(err, "extract",
              {{"manifest", a.manifest},
               {"out", a.out},
               {"threads", a.threads},
               {"frame_ms", kFrameSeconds * 1000},
               {"hop_ms", kHopSeconds * 1000},
               {"hf_split_hz", kHighFrequencySplitHz}});
  const auto records = ReadManifestFile(a.manifest);
  const fs::path base = fs::path(a.manifest).parent_path();
  const ExtractionResult result =
      ExtractCorpus(records, WavFileLoader(base), a.threads);
  for (const auto& f : result.failures) {
    err << "warning: extraction failed for '" << f.utt_id << "': " << f.message
        << '\n';
  }
  if (!a.errors.empty()) {
    auto file = OpenOutput(a.errors);
    for (const auto& f : result.failures) {
      file << ordered_json{{"utt_id", f.utt_id}, {"error", f.message}}.dump()
           << '\n';
    }
  }
  WriteStoreFile(result.embeddings, a.out);
  out << ordered_json{{"extracted", result.embeddings.size()},
                      {"failed", result.failures.size()},
                      {"dim", ArtifactVector::kSize},
                      {"out", a.out}}
             .dump()
      << '\n';
  return kExitOk;
}

struct FuseArgs {
  std::string structural, artifact, out;
  std::optional<std::string> mode;  // defaults to the config's mode, else fused
  std::string config, save_config, manifest, fit_split = "train";
  double std_floor = kDefaultStdFloor;
};

int RunFuse(FuseArgs& a, std::ostream& out, std::ostream& err) {
  std::optional<BranchConfig> loaded;
  if (!a.config.empty()) {
    RequireInput(a.config, "branch config");
    loaded = ParseBranchConfig(ReadText(a.config));
  }
  const std::string mode_name =
      a.mode ? *a.mode
             : std::string(FusionModeName(loaded ? loaded->mode
                                                 : FusionMode::kFused));
  const auto mode = ParseFusionMode(mode_name);
  if (!mode) throw ValidationError("unknown --mode '" + mode_name + "'");
  const bool need_s = *mode != FusionMode::kArtifactOnly;
  const bool need_a = *mode != FusionMode::kStructuralOnly;
  if (need_s && a.structural.empty()) {
    throw ValidationError("--mode " + mode_name + " needs --structural");
  }
  if (need_a && a.artifact.empty()) {
    throw ValidationError("--mode " + mode_name + " needs --artifact");
  }
  if (need_s) RequireInput(a.structural, "structural store");
  if (need_a) RequireInput(a.artifact, "artifact store");
  if (!a.manifest.empty()) RequireInput(a.manifest, "manifest");
  RequireOutput(a.out, {&a.structural, &a.artifact, &a.config, &a.manifest});
  if (!a.save_config.empty()) {
    RequireOutput(a.save_config,
                  {&a.structural, &a.artifact, &a.config, &a.manifest, &a.out});
  }
  PrintConfig(err, "fuse",
              {{"structural", a.structural},
               {"artifact", a.artifact},
               {"mode", mode_name},
               {"config", a.config},
               {"manifest", a.manifest},
               {"fit_split", a.fit_split},
               {"std_floor", a.std_floor},
               {"out", a.out}});

  std::optional<EmbeddingStore> s_store, a_store;
  if (need_s) s_store = ReadStoreFile(a.structural);
  if (need_a) a_store = ReadStoreFile(a.artifact);

  BranchConfig config;
  if (loaded) {
    config = *loaded;
    if (config.mode != *mode) {
      err << "note: --mode " << mode_name << " overrides config mode "
          << FusionModeName(config.mode) << '\n';
    }
    config.mode = *mode;
  } else {
    config.mode = *mode;
    // Fit on the reference split when a manifest is given, else on all.
    auto fit = [&](const EmbeddingStore& store) {
      if (a.manifest.empty()) return FitNormalizer(store.records(), a.std_floor);
      std::vector<Embedding> subset;
      for (const auto& rec :
           SelectSplit(ReadManifestFile(a.manifest), a.fit_split)) {
        if (const Embedding* e = store.Find(rec.utt_id)) subset.push_back(*e);
      }
      return FitNormalizer(subset, a.std_floor);
    };
    if (need_s) config.structural = fit(*s_store);
    if (need_a) config.artifact = fit(*a_store);
  }
  const auto fused = FuseStores(s_store ? &*s_store : nullptr,
                                a_store ? &*a_store : nullptr, config);
  WriteStoreFile(fused, a.out);
  if (!a.save_config.empty()) {
    OpenOutput(a.save_config) << SerializeBranchConfig(config) << '\n';
  }
  out << ordered_json{{"fused", fused.size()},
                      {"dim", fused.front().vector.size()},
                      {"mode", mode_name},
                      {"out", a.out}}
             .dump()
      << '\n';
  return kExitOk;
}

struct ProjectArgs {
  std::string store, manifest, out;
};

int RunProject(ProjectArgs& a, std::ostream& out, std::ostream& err) {
  RequireInput(a.store, "embedding store");
  if (!a.manifest.empty()) RequireInput(a.manifest, "manifest");
  RequireOutput(a.out, {&a.store, &a.manifest});
  PrintConfig(err, "project",
              {{"store", a.store}, {"manifest", a.manifest}, {"out", a.out}});
  const auto store = ReadStoreFile(a.store);
  std::vector<UtteranceRecord> manifest;
  if (!a.manifest.empty()) manifest = ReadManifestFile(a.manifest);
  const Projection2d proj = ProjectPca(store.records());
  auto file = OpenOutput(a.out);
  WriteProjectionCsv(proj, manifest, file);
  out << ordered_json{{"points", proj.coords.size()},
                      {"explained_variance", proj.variances},
                      {"out", a.out}}
             .dump()
      << '\n';
  return kExitOk;
}

void AddSeed(CLI::App* cmd, SeedOption& seed) {
  cmd->add_option("--seed", seed.value,
                  "64-bit RNG seed (generated and printed when omitted)");
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"advtrace: open-set audio deepfake source tracing engine",
               "advtrace"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic "
                                      "method-cluster corpus");
  simulate->add_option("--methods", sim.methods, "Number of methods")
      ->capture_default_str();
  simulate->add_option("--samples", sim.samples, "Samples per method")
      ->capture_default_str();
  simulate->add_option("--dim", sim.dim, "Embedding dimension")
      ->capture_default_str();
  simulate->add_option("--separation", sim.separation,
                       "Centroid radius multiplier")
      ->capture_default_str();
  simulate->add_option("--intra-std", sim.intra_std,
                       "Within-cluster standard deviation")
      ->capture_default_str();
  simulate->add_option("--bonafide-separation", sim.bonafide_separation,
                       "Add a bonafide cluster at this radius");
  simulate->add_option("--validation-fraction", sim.validation_fraction,
                       "Fraction of each cluster assigned to validation")
      ->capture_default_str();
  AddSeed(simulate, sim.seed);
  simulate->add_option("--out-manifest", sim.out_manifest, "Manifest output")
      ->required();
  simulate->add_option("--out-store", sim.out_store, "ADVE store output")
      ->required();

  TrialsArgs tri;
  auto* trials = app.add_subcommand("trials", "Generate verification trials");
  trials->add_option("--manifest", tri.manifest, "Input manifest")->required();
  trials->add_option("--split", tri.split,
                     "train|validation|test|all")
      ->capture_default_str();
  trials->add_option("--e-count", tri.e_count, "Enrollment samples per trial")
      ->capture_default_str();
  trials->add_option("--v-count", tri.v_count,
                     "Verification samples per trial")
      ->capture_default_str();
  trials->add_option("--per-class", tri.per_class,
                     "Same and different trials to draw (each)")
      ->required();
  AddSeed(trials, tri.seed);
  trials->add_option("--out", tri.out, "Trials output (JSON lines)")
      ->required();

  BalanceArgs bal;
  auto* balance = app.add_subcommand("balance", "Per-method balanced subset");
  balance->add_option("--manifest", bal.manifest, "Input manifest")->required();
  balance->add_option("--per-type", bal.per_type, "Records per method")
      ->capture_default_str();
  AddSeed(balance, bal.seed);
  balance->add_option("--out", bal.out, "Subset manifest output")->required();

  ScoreArgs sco;
  auto* score = app.add_subcommand("score", "Cosine-score trials");
  score->add_option("--trials", sco.trials, "Trials file")->required();
  score->add_option("--store", sco.store, "Embedding store")->required();
  score->add_option("--out", sco.out, "Scored trials output")->required();

  CalibrateArgs cal;
  auto* calibrate = app.add_subcommand(
      "calibrate", "EER threshold of validation scores");
  calibrate->add_option("--scores", cal.scores, "Validation scored trials")
      ->required();
  calibrate->add_option("--out", cal.out, "Threshold JSON output");

  EvaluateArgs eva;
  auto* evaluate = app.add_subcommand("evaluate", "Full metric report");
  evaluate->add_option("--scores", eva.scores, "Scored trials");
  evaluate->add_option("--trials", eva.trials, "Trials (scored on the fly)");
  evaluate->add_option("--store", eva.store, "Embedding store for --trials");
  evaluate->add_option("--threshold", eva.threshold, "Decision threshold");
  evaluate->add_option("--threshold-file", eva.threshold_file,
                       "JSON written by calibrate");
  evaluate->add_option("--out", eva.out, "Report JSON output")->required();
  evaluate->add_option("--roc", eva.roc,
                       "ROC CSV output (default: <out>.roc.csv)");

  DetectArgs det;
  auto* detect = app.add_subcommand("detect", "Bonafide-posterior detection");
  detect->add_option("--manifest", det.manifest, "Manifest")->required();
  detect->add_option("--store", det.store, "Embedding store")->required();
  detect->add_option("--enroll-split", det.enroll_split,
                     "Split used to build method centroids")
      ->capture_default_str();
  detect->add_option("--split", det.split, "Split to score")
      ->capture_default_str();
  detect->add_option("--temperature", det.temperature, "Softmax temperature")
      ->capture_default_str();
  detect->add_option("--out", det.out, "Detection scores output")->required();

  ExtractArgs ext;
  auto* extract = app.add_subcommand("extract", "Artifact features from WAVs");
  extract->add_option("--manifest", ext.manifest, "Manifest with source_path")
      ->required();
  extract->add_option("--out", ext.out, "ADVE store output")->required();
  extract->add_option("--threads", ext.threads, "Worker threads (0 = auto)")
      ->capture_default_str();
  extract->add_option("--errors", ext.errors, "Failure report (JSON lines)");

  FuseArgs fus;
  auto* fuse = app.add_subcommand("fuse", "Fuse branch embeddings");
  fuse->add_option("--structural", fus.structural, "Structural store");
  fuse->add_option("--artifact", fus.artifact, "Artifact store");
  fuse->add_option("--mode", fus.mode,
                   "fused|structural_only|artifact_only (default: the "
                   "config's mode, else fused)");
  fuse->add_option("--config", fus.config, "Fitted branch config JSON");
  fuse->add_option("--save-config", fus.save_config,
                   "Write the branch config used");
  fuse->add_option("--manifest", fus.manifest,
                   "Restrict normalizer fitting to --fit-split");
  fuse->add_option("--fit-split", fus.fit_split, "Reference split")
      ->capture_default_str();
  fuse->add_option("--std-floor", fus.std_floor, "Normalizer std floor")
      ->capture_default_str();
  fuse->add_option("--out", fus.out, "Fused ADVE store output")->required();

  ProjectArgs pro;
  auto* project = app.add_subcommand("project", "2D PCA projection CSV");
  project->add_option("--store", pro.store, "Embedding store")->required();
  project->add_option("--manifest", pro.manifest, "Manifest for labels");
  project->add_option("--out", pro.out, "CSV output")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  const std::vector<std::pair<CLI::App*, std::function<int()>>> handlers = {
      {simulate, [&] { return RunSimulate(sim, out, err); }},
      {trials, [&] { return RunTrials(tri, out, err); }},
      {balance, [&] { return RunBalance(bal, out, err); }},
      {score, [&] { return RunScore(sco, out, err); }},
      {calibrate, [&] { return RunCalibrate(cal, out, err); }},
      {evaluate, [&] { return RunEvaluate(eva, out, err); }},
      {detect, [&] { return RunDetect(det, out, err); }},
      {extract, [&] { return RunExtract(ext, out, err); }},
      {fuse, [&] { return RunFuse(fus, out, err); }},
      {project, [&] { return RunProject(pro, out, err); }},
  };
  try {
    for (auto& [cmd, run] : handlers) {
      if (cmd->parsed()) return run();
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}

int Main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return Run(args, std::cout, std::cerr);
}

}  // namespace advtrace::cli
