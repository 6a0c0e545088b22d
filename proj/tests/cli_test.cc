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

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "advtrace/embedding_store.h"
#include "advtrace/manifest.h"
#include "advtrace/wav.h"
#include "json.hpp"
#include "test_util.h"

namespace advtrace {
namespace {

using testing::TempDir;

struct RunResult {
  int code;
  std::string out, err;
};

RunResult Cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::Run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// simulate -> trials -> score -> calibrate -> evaluate inside `dir`.
nlohmann::json Pipeline(const TempDir& dir, const std::string& separation,
                        const std::string& intra_std) {
  auto ok = [](const RunResult& r) {
    EXPECT_EQ(r.code, 0) << r.err;
  };
  ok(Cli({"simulate", "--methods", "20", "--samples", "100", "--dim", "32",
          "--separation", separation, "--intra-std", intra_std,
          "--validation-fraction", "0.5", "--seed", "17", "--out-manifest",
          dir / "m.jsonl", "--out-store", dir / "e.adve"}));
  ok(Cli({"trials", "--manifest", dir / "m.jsonl", "--split", "validation",
          "--per-class", "500", "--seed", "3", "--out", dir / "val.jsonl"}));
  ok(Cli({"trials", "--manifest", dir / "m.jsonl", "--split", "test",
          "--per-class", "500", "--seed", "4", "--out", dir / "test.jsonl"}));
  ok(Cli({"score", "--trials", dir / "val.jsonl", "--store", dir / "e.adve",
          "--out", dir / "val_scores.jsonl"}));
  ok(Cli({"calibrate", "--scores", dir / "val_scores.jsonl", "--out",
          dir / "threshold.json"}));
  const RunResult eval =
      Cli({"evaluate", "--trials", dir / "test.jsonl", "--store",
           dir / "e.adve", "--threshold-file", dir / "threshold.json",
           "--out", dir / "report.json"});
  ok(eval);
  return nlohmann::json::parse(eval.out);
}

TEST(CliTest, EndToEndWideSeparation) {
  TempDir dir;
  const auto report = Pipeline(dir, "4", "0.1");
  EXPECT_LT(report["eer"].get<double>(), 0.02);
  EXPECT_EQ(report["counts"]["n_same"], 500);
  EXPECT_EQ(nlohmann::json::parse(Slurp(dir / "report.json")), report);
  const std::string roc = Slurp(dir / "report.roc.csv");
  EXPECT_EQ(roc.rfind("threshold,far,frr\n", 0), 0u);
}

TEST(CliTest, PipelineIsByteReproducible) {
  TempDir a, b;
  Pipeline(a, "1", "0.25");
  Pipeline(b, "1", "0.25");
  for (const char* f : {"m.jsonl", "e.adve", "val.jsonl", "test.jsonl",
                        "val_scores.jsonl", "threshold.json", "report.json",
                        "report.roc.csv"}) {
    EXPECT_EQ(Slurp(a / f), Slurp(b / f)) << f;
  }
}

TEST(CliTest, PrintsConfigAndGeneratedSeed) {
  TempDir dir;
  const RunResult r = Cli({"simulate", "--methods", "2", "--samples", "3",
                           "--out-manifest", dir / "m.jsonl", "--out-store",
                           dir / "e.adve"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("generated seed"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("advtrace simulate config {"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("\"seed\":"), std::string::npos) << r.err;
}

TEST(CliTest, ExitCodes) {
  TempDir dir;
  EXPECT_EQ(Cli({}).code, cli::kExitValidation);
  EXPECT_EQ(Cli({"frobnicate"}).code, cli::kExitValidation);
  EXPECT_EQ(Cli({"--help"}).code, cli::kExitOk);
  EXPECT_EQ(Cli({"trials", "--manifest", dir / "m.jsonl", "--out", dir / "t"}).code,
            cli::kExitValidation);  // --per-class missing
  EXPECT_EQ(Cli({"score", "--trials", dir / "missing.jsonl", "--store",
                 dir / "missing.adve", "--out", dir / "s.jsonl"})
                .code,
            cli::kExitIo);
  EXPECT_EQ(Cli({"simulate", "--out-manifest", dir / "no/such/dir/m.jsonl",
                 "--out-store", dir / "e.adve", "--seed", "1"})
                .code,
            cli::kExitIo);

  {
    std::ofstream bad(dir / "bad.jsonl");
    bad << "{\"utt_id\":\"u\",\"label\":\"A\",\"is_bonafide\":false,"
           "\"split\":\"nowhere\"}\n";
  }
  const RunResult r = Cli({"trials", "--manifest", dir / "bad.jsonl",
                           "--per-class", "1", "--seed", "1", "--out",
                           dir / "t.jsonl"});
  EXPECT_EQ(r.code, cli::kExitValidation);
  EXPECT_NE(r.err.find("line 1"), std::string::npos) << r.err;

  {
    std::ofstream junk(dir / "junk.adve");
    junk << "XXXXnot a store";
  }
  {
    std::ofstream trials(dir / "t.jsonl");
    trials << R"({"trial_id":"t0","enroll":["a"],"verify":["b"],"label":"same"})"
           << '\n';
  }
  EXPECT_EQ(Cli({"score", "--trials", dir / "t.jsonl", "--store",
                 dir / "junk.adve", "--out", dir / "s.jsonl"})
                .code,
            cli::kExitValidation);
  EXPECT_EQ(Cli({"score", "--trials", dir / "t.jsonl", "--store",
                 dir / "junk.adve", "--out", dir / "t.jsonl"})
                .code,
            cli::kExitValidation);
}

TEST(CliTest, EvaluateArgumentRules) {
  TempDir dir;
  Pipeline(dir, "2", "0.25");
  EXPECT_EQ(Cli({"evaluate", "--scores", dir / "val_scores.jsonl", "--out",
                 dir / "r.json"})
                .code,
            cli::kExitValidation);
  EXPECT_EQ(Cli({"evaluate", "--scores", dir / "val_scores.jsonl",
                 "--threshold", "0.1", "--threshold-file",
                 dir / "threshold.json", "--out", dir / "r.json"})
                .code,
            cli::kExitValidation);
  EXPECT_EQ(Cli({"evaluate", "--scores", dir / "val_scores.jsonl", "--trials",
                 dir / "test.jsonl", "--threshold", "0.1", "--out",
                 dir / "r.json"})
                .code,
            cli::kExitValidation);
  const RunResult r = Cli({"evaluate", "--scores", dir / "val_scores.jsonl",
                           "--threshold", "0.3", "--out", dir / "r.json",
                           "--roc", dir / "curve.csv"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["threshold_used"], 0.3);
  EXPECT_FALSE(Slurp(dir / "curve.csv").empty());

  {
    std::ofstream trials(dir / "ghost.jsonl");
    trials << R"({"trial_id":"t0","enroll":["M000_u00060"],)"
           << R"("verify":["ghost_utt"],"label":"different"})" << '\n';
  }
  const RunResult missing =
      Cli({"evaluate", "--trials", dir / "ghost.jsonl", "--store",
           dir / "e.adve", "--threshold", "0.3", "--out", dir / "g.json"});
  EXPECT_EQ(missing.code, cli::kExitValidation);
  EXPECT_NE(missing.err.find("ghost_utt"), std::string::npos) << missing.err;
}

TEST(CliTest, DetectAndProject) {
  TempDir dir;
  ASSERT_EQ(Cli({"simulate", "--methods", "4", "--samples", "40", "--dim", "8",
                 "--bonafide-separation", "3", "--validation-fraction", "0.5",
                 "--seed", "2", "--out-manifest", dir / "m.jsonl",
                 "--out-store", dir / "e.adve"})
                .code,
            0);
  const RunResult det = Cli({"detect", "--manifest", dir / "m.jsonl", "--store",
                             dir / "e.adve", "--enroll-split", "validation",
                             "--out", dir / "det.jsonl"});
  ASSERT_EQ(det.code, 0) << det.err;
  const auto summary = nlohmann::json::parse(det.out);
  EXPECT_GT(summary["auroc"].get<double>(), 0.95);
  std::istringstream lines(Slurp(dir / "det.jsonl"));
  std::string line;
  std::size_t n = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(j.contains("utt_id") && j.contains("score") &&
                j.contains("is_bonafide"));
    ++n;
  }
  EXPECT_EQ(n, 100u);

  const RunResult proj = Cli({"project", "--store", dir / "e.adve",
                              "--manifest", dir / "m.jsonl", "--out",
                              dir / "p.csv"});
  ASSERT_EQ(proj.code, 0) << proj.err;
  EXPECT_EQ(Slurp(dir / "p.csv").rfind("utt_id,x,y,label\n", 0), 0u);
}

TEST(CliTest, ExtractFuseScore) {
  TempDir dir;
  std::filesystem::create_directories(dir.path() / "audio");
  std::vector<UtteranceRecord> manifest;
  for (int i = 0; i < 8; ++i) {
    const std::string rel = "audio/c" + std::to_string(i) + ".wav";
    const AudioBuffer audio = i % 2 ? testing::WhiteNoise(i, 0.3)
                                    : testing::Sine(500.0 + 40 * i, 0.5, 0.3);
    WriteWavFile(audio, WavEncoding::kPcm16, dir / rel);
    manifest.push_back({"u" + std::to_string(i),
                        {i % 2 ? "noise" : "tone", false},
                        i < 4 ? Split::kTrain : Split::kTest, rel});
  }
  manifest.push_back({"u8", {"tone", false}, Split::kTest, "audio/missing.wav"});
  WriteManifestFile(manifest, dir / "m.jsonl");

  const RunResult ext = Cli({"extract", "--manifest", dir / "m.jsonl", "--out",
                             dir / "art.adve", "--errors", dir / "err.jsonl"});
  ASSERT_EQ(ext.code, 0) << ext.err;
  EXPECT_NE(Slurp(dir / "err.jsonl").find("u8"), std::string::npos);
  const EmbeddingStore art = ReadStoreFile(dir / "art.adve");
  EXPECT_EQ(art.size(), 8u);
  EXPECT_EQ(art.dim(), 16u);
  EXPECT_EQ(art.branch(), Branch::kArtifact);

  const RunResult fuse = Cli({"fuse", "--artifact", dir / "art.adve", "--mode",
                              "artifact_only", "--manifest", dir / "m.jsonl",
                              "--save-config", dir / "cfg.json", "--out",
                              dir / "fused.adve"});
  ASSERT_EQ(fuse.code, 0) << fuse.err;
  EXPECT_EQ(ReadStoreFile(dir / "fused.adve").branch(), Branch::kFused);
  const RunResult again = Cli({"fuse", "--artifact", dir / "art.adve",
                               "--config", dir / "cfg.json", "--out",
                               dir / "fused2.adve"});
  ASSERT_EQ(again.code, 0) << again.err;
  EXPECT_EQ(Slurp(dir / "fused.adve"), Slurp(dir / "fused2.adve"));

  EXPECT_EQ(Cli({"fuse", "--artifact", dir / "art.adve", "--mode", "fused",
                 "--manifest", dir / "m.jsonl", "--out", dir / "f3.adve"})
                .code,
            cli::kExitValidation);
}

}  // namespace
}  // namespace advtrace
