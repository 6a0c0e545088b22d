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

#include "advtrace/fusion.h"

#include <cmath>

#include "advtrace/error.h"
#include "json.hpp"

namespace advtrace {

std::string_view FusionModeName(FusionMode mode) {
  switch (mode) {
    case FusionMode::kFused:
      return "fused";
    case FusionMode::kStructuralOnly:
      return "structural_only";
    case FusionMode::kArtifactOnly:
      return "artifact_only";
  }
  return "unknown";
}

std::optional<FusionMode> ParseFusionMode(std::string_view name) {
  if (name == "fused") return FusionMode::kFused;
  if (name == "structural_only") return FusionMode::kStructuralOnly;
  if (name == "artifact_only") return FusionMode::kArtifactOnly;
  return std::nullopt;
}

NormalizerStats FitNormalizer(std::span<const Embedding> embeddings,
                              double floor) {
  if (embeddings.empty()) {
    throw ValidationError("cannot fit a normalizer on an empty store");
  }
  if (!(floor > 0.0) || !std::isfinite(floor)) {
    throw ValidationError("std floor must be a positive finite number");
  }
  const std::size_t dim = embeddings.front().vector.size();
  NormalizerStats stats;
  stats.mean.assign(dim, 0.0);
  std::vector<double> m2(dim, 0.0);
  // Welford's update, one pass per dimension.
  double n = 0.0;
  for (const auto& e : embeddings) {
    if (e.vector.size() != dim) {
      throw ValidationError("dimension mismatch at '" + e.utt_id + "'");
    }
    n += 1.0;
    for (std::size_t d = 0; d < dim; ++d) {
      const double delta = e.vector[d] - stats.mean[d];
      stats.mean[d] += delta / n;
      m2[d] += delta * (e.vector[d] - stats.mean[d]);
    }
  }
  stats.std.resize(dim);
  for (std::size_t d = 0; d < dim; ++d) {
    stats.std[d] = std::max(std::sqrt(m2[d] / n), floor);
  }
  return stats;
}

namespace {

void AppendNormalized(std::span<const double> x, const NormalizerStats& stats,
                      const char* branch, const std::string& utt_id,
                      std::vector<double>& out) {
  if (x.size() != stats.dim()) {
    throw ValidationError(std::string(branch) + " embedding of '" + utt_id +
                          "' has dimension " + std::to_string(x.size()) +
                          ", normalizer expects " +
                          std::to_string(stats.dim()));
  }
  for (std::size_t d = 0; d < x.size(); ++d) {
    out.push_back((x[d] - stats.mean[d]) / stats.std[d]);
  }
}

const NormalizerStats& RequireStats(const std::optional<NormalizerStats>& s,
                                    const char* branch) {
  if (!s) {
    throw ValidationError(std::string("branch config has no ") + branch +
                          " normalizer");
  }
  return *s;
}

}  // namespace

Embedding Fuse(std::string utt_id,
               std::optional<std::span<const double>> structural,
               std::optional<std::span<const double>> artifact,
               const BranchConfig& config) {
  const bool use_structural = config.mode != FusionMode::kArtifactOnly;
  const bool use_artifact = config.mode != FusionMode::kStructuralOnly;

  Embedding out{std::move(utt_id), Branch::kFused, {}};
  if (use_structural) {
    if (!structural) {
      throw ValidationError("missing structural embedding for '" +
                            out.utt_id + "'");
    }
    AppendNormalized(*structural, RequireStats(config.structural, "structural"),
                     "structural", out.utt_id, out.vector);
  }
  if (use_artifact) {
    if (!artifact) {
      throw ValidationError("missing artifact embedding for '" + out.utt_id +
                            "'");
    }
    AppendNormalized(*artifact, RequireStats(config.artifact, "artifact"),
                     "artifact", out.utt_id, out.vector);
  }

  double sq = 0.0;
  for (double v : out.vector) sq += v * v;
  const double norm = std::sqrt(sq);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ValidationError("fused embedding of '" + out.utt_id +
                          "' is zero after normalization");
  }
  for (double& v : out.vector) v /= norm;
  return out;
}

std::vector<Embedding> FuseStores(const EmbeddingStore* structural,
                                  const EmbeddingStore* artifact,
                                  const BranchConfig& config) {
  const bool use_structural = config.mode != FusionMode::kArtifactOnly;
  const bool use_artifact = config.mode != FusionMode::kStructuralOnly;
  if (use_structural && structural == nullptr) {
    throw ValidationError("mode " + std::string(FusionModeName(config.mode)) +
                          " needs a structural store");
  }
  if (use_artifact && artifact == nullptr) {
    throw ValidationError("mode " + std::string(FusionModeName(config.mode)) +
                          " needs an artifact store");
  }

  const EmbeddingStore& lead = use_structural ? *structural : *artifact;
  if (use_structural && use_artifact && structural->size() != artifact->size()) {
    for (const auto& e : artifact->records()) {
      if (structural->Find(e.utt_id) == nullptr) {
        throw ValidationError("utterance '" + e.utt_id +
                              "' has no structural embedding");
      }
    }
  }

  std::vector<Embedding> out;
  out.reserve(lead.size());
  for (const auto& e : lead.records()) {
    std::optional<std::span<const double>> s, a;
    if (use_structural) s = structural->Find(e.utt_id)->vector;
    if (use_artifact) {
      const Embedding* match = artifact->Find(e.utt_id);
      if (match == nullptr) {
        throw ValidationError("utterance '" + e.utt_id +
                              "' has no artifact embedding");
      }
      a = match->vector;
    }
    out.push_back(Fuse(e.utt_id, s, a, config));
  }
  return out;
}

namespace {

using nlohmann::ordered_json;

ordered_json StatsToJson(const NormalizerStats& s) {
  return ordered_json{{"mean", s.mean}, {"std", s.std}};
}

NormalizerStats StatsFromJson(const nlohmann::json& j, const char* branch) {
  NormalizerStats s;
  try {
    s.mean = j.at("mean").get<std::vector<double>>();
    s.std = j.at("std").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("branch config '") + branch +
                      "': " + e.what());
  }
  if (s.mean.empty() || s.mean.size() != s.std.size()) {
    throw ValidationError(std::string("branch config '") + branch +
                          "': mean/std must be non-empty and equal length");
  }
  for (std::size_t d = 0; d < s.std.size(); ++d) {
    if (!std::isfinite(s.mean[d]) || !(s.std[d] > 0.0) ||
        !std::isfinite(s.std[d])) {
      throw ValidationError(std::string("branch config '") + branch +
                            "': statistics must be finite with std > 0");
    }
  }
  return s;
}

}  // namespace

std::string SerializeBranchConfig(const BranchConfig& config) {
  ordered_json j;
  j["mode"] = FusionModeName(config.mode);
  if (config.structural) j["structural"] = StatsToJson(*config.structural);
  if (config.artifact) j["artifact"] = StatsToJson(*config.artifact);
  return j.dump(2);
}

BranchConfig ParseBranchConfig(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("branch config: ") + e.what());
  }
  if (!j.is_object() || !j.contains("mode") || !j["mode"].is_string()) {
    throw FormatError("branch config: expected an object with a 'mode' string");
  }
  BranchConfig config;
  const auto mode = ParseFusionMode(j["mode"].get<std::string>());
  if (!mode) {
    throw ValidationError("branch config: unknown mode '" +
                          j["mode"].get<std::string>() + "'");
  }
  config.mode = *mode;
  if (j.contains("structural")) {
    config.structural = StatsFromJson(j["structural"], "structural");
  }
  if (j.contains("artifact")) {
    config.artifact = StatsFromJson(j["artifact"], "artifact");
  }
  return config;
}

}  // namespace advtrace
