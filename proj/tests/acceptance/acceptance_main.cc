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

// Acceptance gate: one line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "advtrace/artifact.h"
#include "advtrace/cli.h"
#include "advtrace/dsp.h"
#include "advtrace/embedding_store.h"
#include "advtrace/error.h"
#include "advtrace/manifest.h"
#include "advtrace/metrics.h"
#include "advtrace/rng.h"
#include "advtrace/scoring.h"
#include "advtrace/synthetic.h"
#include "advtrace/trials.h"
#include "advtrace/wav.h"
#include "json.hpp"
#include "test_util.h"

namespace advtrace {
namespace {

using testing::TempDir;

struct Outcome {
  bool pass = true;
  std::string detail;

  void Require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += "FAILED " + what;
    }
  }
  void Note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string Fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since)
      .count();
}

// The synthetic protocol shared by C3, C4 and C9.
constexpr std::size_t kMethods = 20;
constexpr std::size_t kSamples = 100;
constexpr std::size_t kDim = 32;
constexpr double kIntraStd = 0.25;
constexpr std::size_t kPerClass = 500;
constexpr std::uint64_t kSeeds[] = {1, 2, 3};
constexpr double kSeparations[] = {0.5, 1.0, 2.0, 4.0};

ClusterSpec ProtocolSpec(double separation, std::uint64_t seed) {
  ClusterSpec spec;
  spec.n_methods = kMethods;
  spec.samples_per_method = kSamples;
  spec.dim = kDim;
  spec.separation = separation;
  spec.intra_std = kIntraStd;
  spec.seed = seed;
  return spec;
}

std::uint64_t TrialSeed(std::uint64_t seed) { return 1000 + seed; }

double ProtocolEer(const SyntheticCorpus& corpus, std::size_t e, std::size_t v,
                   std::uint64_t trial_seed) {
  const EmbeddingStore store(corpus.embeddings);
  const auto trials =
      GenerateTrials(corpus.manifest, e, v, kPerClass, trial_seed).trials;
  return ComputeEer(ScoreTrials(trials, store)).eer;
}

Outcome C1() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  Rng rng(20260101);
  double worst_eer = 0.0, worst_auc = 0.0;
  for (int set = 0; set < 200; ++set) {
    const std::size_t total = 2 + rng.UniformBelow(999);
    const std::size_t n_same = 1 + rng.UniformBelow(total - 1);
    // Every third set is quantized to force heavy ties.
    const int levels = set % 3 == 0 ? 1 + static_cast<int>(rng.UniformBelow(20)) : 0;
    const auto scored = testing::RandomScored(rng, n_same, total - n_same,
                                              3.0 * rng.Uniform01(), levels);
    worst_eer = std::max(worst_eer, std::abs(ComputeEer(scored).eer -
                                             testing::BruteForceEer(scored)));
    worst_auc = std::max(worst_auc, std::abs(ComputeAuroc(scored) -
                                             testing::QuadraticAuroc(scored)));
  }
  const double elapsed = Seconds(start);
  o.Require(worst_eer <= 1e-12, "EER max |diff| " + Fmt("%.3g", worst_eer));
  o.Require(worst_auc <= 1e-12, "AUROC max |diff| " + Fmt("%.3g", worst_auc));
  o.Require(elapsed < 30.0, "runtime " + Fmt("%.1f s", elapsed) + " >= 30 s");
  o.Note("200 sets, max |EER diff| " + Fmt("%.2g", worst_eer) +
         ", max |AUROC diff| " + Fmt("%.2g", worst_auc) + ", " +
         Fmt("%.2f s", elapsed));
  return o;
}

Outcome C2() {
  Outcome o;
  const auto eer_set = testing::MakeScored({0.9, 0.8, 0.3}, {0.7, 0.2, 0.1});
  const EerResult eer = ComputeEer(eer_set);
  const MetricsReport at_eer = ComputeReport(eer_set, eer.threshold);
  o.Require(eer.eer == 1.0 / 3.0, "EER == 1/3 (got " + Fmt("%.17g", eer.eer) + ")");
  o.Require(at_eer.counts.fp == 1 && at_eer.counts.fn == 1,
            "1 false accept and 1 false reject at the EER threshold");
  o.Require(at_eer.far == 1.0 / 3.0 && at_eer.frr == 1.0 / 3.0,
            "FAR == FRR == 1/3 at the EER threshold");
  const RocCurve roc = ComputeRoc(eer_set);
  bool found = false;
  for (const auto& p : roc.points) {
    if (p.threshold == 0.3) {
      found = p.false_accepts == 1 && p.false_rejects == 1;
    }
  }
  o.Require(found, "ROC point at threshold 0.3 with counts (1, 1)");
  const auto far_point =
      ComputeOperatingPoint(eer_set, RateConstraint::kFar, 0.01);
  o.Require(far_point.far == 0.0 && far_point.frr == 1.0 / 3.0,
            "FAR-constrained point (0, 1/3)");

  const auto auc_set = testing::MakeScored({0.9, 0.3}, {0.7, 0.1});
  const double auc = ComputeAuroc(auc_set);
  o.Require(auc == 0.75, "AUROC == 3/4 (got " + Fmt("%.17g", auc) + ")");
  const RocCurve roc2 = ComputeRoc(auc_set);
  bool at07 = false;
  for (const auto& p : roc2.points) {
    if (p.threshold == 0.7) at07 = p.false_accepts == 0 && p.false_rejects == 1;
  }
  o.Require(at07, "threshold 0.7 gives FAR 0/2, FRR 1/2");
  o.Note("EER 1/3 with counts 1/3 and 1/3; AUROC 3/4");
  return o;
}

Outcome C3() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  for (std::uint64_t seed : kSeeds) {
    std::vector<double> eers;
    for (double d : kSeparations) {
      eers.push_back(ProtocolEer(GenerateCorpus(ProtocolSpec(d, seed)), 1, 1,
                                 TrialSeed(seed)));
    }
    const double chance =
        ProtocolEer(GenerateCorpus(ProtocolSpec(0.0, seed)), 1, 1, TrialSeed(seed));
    std::string row = "seed " + std::to_string(seed) + " EER";
    for (double e : eers) row += " " + Fmt("%.4f", e);
    row += " d0 " + Fmt("%.4f", chance);
    o.Note(row);
    for (std::size_t i = 1; i < eers.size(); ++i) {
      o.Require(eers[i] < eers[i - 1],
                "seed " + std::to_string(seed) + " strictly decreasing at d=" +
                    Fmt("%g", kSeparations[i]));
    }
    o.Require(eers.back() < 0.02,
              "seed " + std::to_string(seed) + " EER(d=4) < 0.02");
    o.Require(chance >= 0.46 && chance <= 0.54,
              "seed " + std::to_string(seed) + " EER(d=0) in [0.46, 0.54]");
  }
  const double elapsed = Seconds(start);
  o.Require(elapsed < 60.0, "runtime " + Fmt("%.1f s", elapsed) + " >= 60 s");
  o.Note(Fmt("%.2f s", elapsed));
  return o;
}

Outcome C4() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  for (std::uint64_t seed : kSeeds) {
    const SyntheticCorpus corpus = GenerateCorpus(ProtocolSpec(1.0, seed));
    const double one = ProtocolEer(corpus, 1, 1, TrialSeed(seed));
    const double five = ProtocolEer(corpus, 5, 5, TrialSeed(seed));
    o.Note("seed " + std::to_string(seed) + " EER(1,1) " + Fmt("%.4f", one) +
           " EER(5,5) " + Fmt("%.4f", five));
    o.Require(five <= 0.7 * one, "seed " + std::to_string(seed) +
                                     " EER(5,5) <= 0.7 EER(1,1)");
  }
  const double elapsed = Seconds(start);
  o.Require(elapsed < 60.0, "runtime " + Fmt("%.1f s", elapsed) + " >= 60 s");
  o.Note(Fmt("%.2f s", elapsed));
  return o;
}

// Validation and test halves of one corpus share centroids; samples are
// drawn independently, so the two splits are i.i.d.
Outcome C5() {
  Outcome o;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ClusterSpec spec = ProtocolSpec(1.0, 500 + seed);
    spec.validation_fraction = 0.5;
    const SyntheticCorpus corpus = GenerateCorpus(spec);
    const EmbeddingStore store(corpus.embeddings);
    const auto validation = GenerateTrials(
        FilterSplit(corpus.manifest, Split::kValidation), 1, 1, kPerClass,
        2 * seed).trials;
    const auto test = GenerateTrials(FilterSplit(corpus.manifest, Split::kTest),
                                     1, 1, kPerClass, 2 * seed + 1).trials;
    const double threshold = Calibrate(ScoreTrials(validation, store));
    const MetricsReport r = ComputeReport(ScoreTrials(test, store), threshold);
    const double gap = std::abs(r.far - r.frr);
    o.Note("seed " + std::to_string(seed) + " FAR " + Fmt("%.3f", r.far) +
           " FRR " + Fmt("%.3f", r.frr));
    o.Require(gap <= 0.05, "seed " + std::to_string(seed) +
                               " |FAR - FRR| " + Fmt("%.3f", gap) + " <= 0.05");
  }
  return o;
}

Outcome C6() {
  Outcome o;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    ClusterSpec spec = ProtocolSpec(1.0, 600 + seed);
    spec.n_methods = 10;
    spec.bonafide_separation = 3.0;
    spec.validation_fraction = 0.5;
    const SyntheticCorpus corpus = GenerateCorpus(spec);
    const EmbeddingStore store(corpus.embeddings);
    const auto centroids = BuildMethodCentroids(
        FilterSplit(corpus.manifest, Split::kValidation), store);
    const auto scores = DetectionScores(
        FilterSplit(corpus.manifest, Split::kTest), store, centroids);
    const double auc = ComputeAuroc(DetectionAsScoredTrials(scores));
    o.Note("seed " + std::to_string(seed) + " AUROC " + Fmt("%.4f", auc));
    o.Require(auc > 0.95, "seed " + std::to_string(seed) + " AUROC > 0.95");
  }
  return o;
}

Outcome C7() {
  Outcome o;
  // 1 kHz argmax.
  const MelSpectrogram mel = ComputeMelSpectrogram(testing::Sine(1000.0, 0.5, 1.0));
  const double top = 2595.0 * std::log10(1.0 + 8000.0 / 700.0);
  std::size_t nearest = 0;
  double best_gap = 1e300;
  for (std::size_t m = 0; m < kNumMels; ++m) {
    const double mel_c = top * static_cast<double>(m + 1) / (kNumMels + 1);
    const double hz = 700.0 * (std::pow(10.0, mel_c / 2595.0) - 1.0);
    if (std::abs(hz - 1000.0) < best_gap) {
      best_gap = std::abs(hz - 1000.0);
      nearest = m;
    }
  }
  std::size_t wrong = 0;
  for (std::size_t t = 0; t < mel.num_frames; ++t) {
    std::size_t arg = 0;
    for (std::size_t m = 1; m < mel.num_mels; ++m) {
      if (mel.at(t, m) > mel.at(t, arg)) arg = m;
    }
    wrong += arg != nearest;
  }
  o.Require(wrong == 0, std::to_string(wrong) + " frames with wrong argmax");

  // Silence floor.
  const MelSpectrogram silent =
      ComputeMelSpectrogram({std::vector<double>(16000, 0.0), 16000});
  bool flat = true;
  for (double v : silent.log_energies) flat = flat && v == std::log(1e-10);
  o.Require(flat, "silence gives log(1e-10) everywhere");

  // Scale invariance of ratio features.
  AudioBuffer base = testing::WhiteNoise(7, 1.0);
  for (std::size_t i = 0; i < base.samples.size(); ++i) {
    if ((i / 2000) % 2 == 1) base.samples[i] = 0.0;
  }
  const ArtifactVector a = ComputeArtifactFeatures(base);
  double worst = 0.0;
  for (double c : {0.001, 0.5, 7.0, 1000.0}) {
    AudioBuffer scaled = base;
    for (double& s : scaled.samples) s *= c;
    const ArtifactVector b = ComputeArtifactFeatures(scaled);
    const double diffs[] = {
        b.hf_ratio_mean - a.hf_ratio_mean, b.hf_ratio_var - a.hf_ratio_var,
        b.hf_discontinuity - a.hf_discontinuity,
        b.silence_fraction - a.silence_fraction,
        b.spectral_flatness_mean - a.spectral_flatness_mean,
        (b.spectral_centroid_mean - a.spectral_centroid_mean) /
            a.spectral_centroid_mean,
        b.zero_crossing_rate_mean - a.zero_crossing_rate_mean,
        b.log_energy_range - a.log_energy_range};
    for (double d : diffs) worst = std::max(worst, std::abs(d));
  }
  o.Require(worst <= 1e-9, "scale invariance max diff " + Fmt("%.3g", worst));

  // Extraction determinism.
  TempDir dir;
  std::vector<UtteranceRecord> records;
  for (int i = 0; i < 6; ++i) {
    const std::string name = "a" + std::to_string(i) + ".wav";
    WriteWavFile(i % 2 ? testing::WhiteNoise(i, 0.4)
                       : testing::SineWithGaps(0.05, 0.4),
                 WavEncoding::kPcm16, dir / name);
    records.push_back({"u" + std::to_string(i), {"M", false}, Split::kTest, name});
  }
  WriteStoreFile(ExtractCorpus(records, WavFileLoader(dir.path())).embeddings,
                 dir / "one.adve");
  WriteStoreFile(ExtractCorpus(records, WavFileLoader(dir.path())).embeddings,
                 dir / "two.adve");
  std::ifstream f1(dir / "one.adve", std::ios::binary), f2(dir / "two.adve", std::ios::binary);
  const std::string s1((std::istreambuf_iterator<char>(f1)), {});
  const std::string s2((std::istreambuf_iterator<char>(f2)), {});
  o.Require(!s1.empty() && s1 == s2, "extraction stores bit-identical");
  o.Note(std::to_string(mel.num_frames) + " sine frames checked, scale diff " +
         Fmt("%.2g", worst) + ", store " + std::to_string(s1.size()) + " bytes x2");
  return o;
}

std::string RandomId(Rng& rng, std::size_t i) {
  static const char* const kPieces[] = {"a", "Z", "_", "-", "7", "\xC3\xA9",
                                        "\xE6\x97\xA5", " ", ".", "/"};
  std::string id = std::to_string(i) + ":";
  const std::size_t len = rng.UniformBelow(12);
  for (std::size_t k = 0; k < len; ++k) id += kPieces[rng.UniformBelow(10)];
  return id;
}

template <typename Fn>
bool Throws(Fn&& fn) {
  try {
    fn();
  } catch (const ValidationError&) {
    return true;
  } catch (const FormatError&) {
    return true;
  }
  return false;
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string Join(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

Outcome C8() {
  Outcome o;
  Rng rng(8);
  std::size_t round_trip_failures = 0;
  std::vector<std::vector<std::uint8_t>> samples;
  for (int s = 0; s < 1000; ++s) {
    const std::size_t dim = 1 + rng.UniformBelow(64);
    const std::size_t count = 1 + rng.UniformBelow(20);
    const auto branch = static_cast<Branch>(rng.UniformBelow(3));
    std::vector<Embedding> records;
    for (std::size_t i = 0; i < count; ++i) {
      Embedding e{RandomId(rng, i), branch, {}};
      for (std::size_t d = 0; d < dim; ++d) {
        e.vector.push_back(static_cast<float>(rng.Normal() *
                                              std::pow(10.0, rng.UniformBelow(9) - 4.0)));
      }
      records.push_back(std::move(e));
    }
    const auto bytes = EncodeStore(records);
    const EmbeddingStore back(DecodeStore(bytes));
    if (back.records() != records || EncodeStore(back.records()) != bytes) {
      ++round_trip_failures;
    }
    if (s % 50 == 0) samples.push_back(bytes);
  }
  o.Require(round_trip_failures == 0,
            std::to_string(round_trip_failures) + " store round trips differ");

  std::size_t accepted_truncations = 0, truncations = 0;
  for (const auto& bytes : samples) {
    for (std::size_t len = 0; len < bytes.size(); ++len, ++truncations) {
      if (!Throws([&] { DecodeStore(std::span(bytes.data(), len)); })) {
        ++accepted_truncations;
      }
    }
  }
  o.Require(accepted_truncations == 0,
            std::to_string(accepted_truncations) + " truncations accepted");

  // Trials: round trip plus one seeded corruption per round.
  std::vector<UtteranceRecord> corpus;
  for (int m = 0; m < 5; ++m) {
    for (int i = 0; i < 8; ++i) {
      corpus.push_back({"m" + std::to_string(m) + "_" + std::to_string(i),
                        {"M" + std::to_string(m), false},
                        i < 4 ? Split::kTrain : Split::kTest, std::nullopt});
    }
  }
  std::size_t trial_escapes = 0, trial_rounds = 0, manifest_escapes = 0,
              manifest_rounds = 0, round_trip_bad = 0;
  const std::vector<std::function<std::string(const std::string&)>> trial_corruptions = {
      [](const std::string& l) {
        auto j = nlohmann::ordered_json::parse(l);
        j["label"] = j["label"] == "same" ? "Same" : "DIFFERENT";
        return j.dump();
      },
      [](const std::string& l) {
        auto j = nlohmann::ordered_json::parse(l);
        j["verify"].push_back(j["enroll"][0]);
        return j.dump();
      },
      [](const std::string& l) {
        auto j = nlohmann::ordered_json::parse(l);
        j["enroll"] = nlohmann::json::array();
        return j.dump();
      },
      [](const std::string& l) { return l.substr(0, l.size() / 2); },
      [](const std::string& l) {
        auto j = nlohmann::ordered_json::parse(l);
        j.erase("verify");
        return j.dump();
      },
      [](const std::string& l) {
        auto j = nlohmann::ordered_json::parse(l);
        j["enroll"].push_back(j["enroll"][0]);
        return j.dump();
      },
      [](const std::string& l) {
        auto j = nlohmann::ordered_json::parse(l);
        j["trial_id"] = 42;
        return j.dump();
      },
  };
  for (std::uint64_t seed = 0; seed < 70; ++seed) {
    const auto trials = GenerateTrials(corpus, 1 + seed % 3, 1 + seed % 2, 20, seed).trials;
    std::ostringstream out;
    WriteTrials(trials, out);
    std::istringstream in(out.str());
    if (ReadTrials(in) != trials) ++round_trip_bad;

    Rng pick(seed);
    auto lines = Lines(out.str());
    const std::size_t target = pick.UniformBelow(lines.size());
    lines[target] = trial_corruptions[seed % trial_corruptions.size()](lines[target]);
    ++trial_rounds;
    std::string message;
    try {
      std::istringstream bad(Join(lines));
      ReadTrials(bad);
    } catch (const ValidationError& e) {
      message = e.what();
    } catch (const FormatError& e) {
      message = e.what();
    }
    if (message.find("line " + std::to_string(target + 1)) == std::string::npos) {
      ++trial_escapes;
    }
  }
  // Duplicate trial_id across lines.
  {
    const auto trials = GenerateTrials(corpus, 1, 1, 3, 1).trials;
    std::ostringstream out;
    WriteTrials(trials, out);
    auto lines = Lines(out.str());
    auto j = nlohmann::ordered_json::parse(lines[4]);
    j["trial_id"] = trials[1].trial_id;
    lines[4] = j.dump();
    ++trial_rounds;
    std::istringstream bad(Join(lines));
    if (!Throws([&] { ReadTrials(bad); })) ++trial_escapes;
  }

  const std::vector<std::function<std::string(const std::string&, const std::string&)>>
      manifest_corruptions = {
          [](const std::string& l, const std::string&) {
            auto j = nlohmann::ordered_json::parse(l);
            j["split"] = "dev";
            return j.dump();
          },
          [](const std::string& l, const std::string& other) {
            auto j = nlohmann::ordered_json::parse(l);
            j["utt_id"] = nlohmann::json::parse(other)["utt_id"];
            return j.dump();
          },
          [](const std::string& l, const std::string&) {
            auto j = nlohmann::ordered_json::parse(l);
            j.erase("label");
            return j.dump();
          },
          [](const std::string& l, const std::string&) { return l + ","; },
          [](const std::string& l, const std::string&) {
            auto j = nlohmann::ordered_json::parse(l);
            j["is_bonafide"] = "false";
            return j.dump();
          },
          [](const std::string& l, const std::string&) {
            auto j = nlohmann::ordered_json::parse(l);
            j["utt_id"] = "";
            return j.dump();
          },
          [](const std::string& l, const std::string&) {
            auto j = nlohmann::ordered_json::parse(l);
            j["is_bonafide"] = true;  // label also appears elsewhere as spoof
            return j.dump();
          },
      };
  for (std::uint64_t seed = 0; seed < 70; ++seed) {
    ClusterSpec spec;
    spec.n_methods = 3 + seed % 4;
    spec.samples_per_method = 4;
    spec.validation_fraction = 0.5;
    spec.seed = seed;
    const auto manifest = GenerateCorpus(spec).manifest;
    std::ostringstream out;
    WriteManifest(manifest, out);
    std::istringstream in(out.str());
    if (ReadManifest(in) != manifest) ++round_trip_bad;

    Rng pick(seed + 99);
    auto lines = Lines(out.str());
    // Target a line after the first so "duplicate" and "inconsistent" apply.
    const std::size_t target = 1 + pick.UniformBelow(lines.size() - 1);
    lines[target] = manifest_corruptions[seed % manifest_corruptions.size()](
        lines[target], lines[0]);
    if (seed % manifest_corruptions.size() == 6) {
      // Make the corrupted label appear as spoof earlier in the file.
      const std::string label = manifest[target].label.name;
      bool earlier = false;
      for (std::size_t i = 0; i < target; ++i) earlier |= manifest[i].label.name == label;
      if (!earlier) std::swap(lines[target], lines[target - 1]);
    }
    ++manifest_rounds;
    std::string message;
    try {
      std::istringstream bad(Join(lines));
      ReadManifest(bad);
    } catch (const ValidationError& e) {
      message = e.what();
    } catch (const FormatError& e) {
      message = e.what();
    }
    if (message.find("manifest line") == std::string::npos) ++manifest_escapes;
  }
  o.Require(round_trip_bad == 0, std::to_string(round_trip_bad) +
                                     " JSON-lines round trips differ");
  o.Require(trial_escapes == 0, std::to_string(trial_escapes) +
                                    " trial corruptions not reported at their line");
  o.Require(manifest_escapes == 0,
            std::to_string(manifest_escapes) + " manifest corruptions accepted");
  o.Note("1000 stores, " + std::to_string(truncations) + " truncations, " +
         std::to_string(trial_rounds) + " trial and " +
         std::to_string(manifest_rounds) + " manifest corruptions");
  return o;
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct CliRun {
  bool ok = true;
  std::string report;
  std::vector<std::string> files;
};

CliRun RunCliPipeline(const TempDir& dir, double separation, std::uint64_t seed) {
  CliRun run;
  auto call = [&](std::vector<std::string> args) {
    std::ostringstream out, err;
    if (cli::Run(args, out, err) != cli::kExitOk) {
      run.ok = false;
      std::cerr << err.str();
    }
    return out.str();
  };
  char sep[32];
  std::snprintf(sep, sizeof(sep), "%.17g", separation);
  call({"simulate", "--methods", std::to_string(kMethods), "--samples",
        std::to_string(kSamples), "--dim", std::to_string(kDim),
        "--separation", sep, "--intra-std", "0.25", "--seed",
        std::to_string(seed), "--out-manifest", dir / "m.jsonl", "--out-store",
        dir / "e.adve"});
  call({"trials", "--manifest", dir / "m.jsonl", "--split", "test",
        "--per-class", std::to_string(kPerClass), "--seed",
        std::to_string(TrialSeed(seed)), "--out", dir / "t.jsonl"});
  call({"score", "--trials", dir / "t.jsonl", "--store", dir / "e.adve",
        "--out", dir / "s.jsonl"});
  call({"calibrate", "--scores", dir / "s.jsonl", "--out", dir / "thr.json"});
  run.report = call({"evaluate", "--scores", dir / "s.jsonl", "--threshold-file",
                     dir / "thr.json", "--out", dir / "report.json"});
  for (const char* f : {"m.jsonl", "e.adve", "t.jsonl", "s.jsonl", "thr.json",
                        "report.json", "report.roc.csv"}) {
    run.files.push_back(Slurp(dir / f));
  }
  return run;
}

Outcome C9() {
  Outcome o;
  std::size_t runs = 0;
  for (std::uint64_t seed : kSeeds) {
    for (double d : kSeparations) {
      TempDir first, second;
      const CliRun a = RunCliPipeline(first, d, seed);
      const CliRun b = RunCliPipeline(second, d, seed);
      const std::string tag = "seed " + std::to_string(seed) + " d=" + Fmt("%g", d);
      o.Require(a.ok && b.ok, tag + " CLI exit codes");
      if (!a.ok || !b.ok) continue;
      o.Require(a.files == b.files && a.report == b.report,
                tag + " outputs byte-identical");
      const double cli_eer = nlohmann::json::parse(a.report)["eer"].get<double>();
      const double lib_eer =
          ProtocolEer(GenerateCorpus(ProtocolSpec(d, seed)), 1, 1, TrialSeed(seed));
      o.Require(cli_eer == lib_eer, tag + " CLI EER " + Fmt("%.17g", cli_eer) +
                                        " equals library " + Fmt("%.17g", lib_eer));
      ++runs;
    }
  }
  o.Note(std::to_string(runs) + " pipelines run twice, reports identical and "
         "equal to the library EER");
  return o;
}

struct Criterion {
  const char* id;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace advtrace

int main() {
  using namespace advtrace;
  const std::vector<Criterion> criteria = {
      {"C1", "metric oracle equivalence", C1},
      {"C2", "hand-computed metric fixtures", C2},
      {"C3", "separation monotonicity", C3},
      {"C4", "enrollment trend", C4},
      {"C5", "calibration transfer", C5},
      {"C6", "detection mode", C6},
      {"C7", "DSP checks", C7},
      {"C8", "format torture", C8},
      {"C9", "end-to-end CLI pipeline", C9},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += !o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << c.id << ' ' << c.title
              << ": " << o.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed"
                              : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
