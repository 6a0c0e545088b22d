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

#ifndef ADVTRACE_FUSION_H_
#define ADVTRACE_FUSION_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "advtrace/embedding_store.h"
#include "advtrace/types.h"

namespace advtrace {

// Branch selection; the two single-branch modes are the ablation settings.
enum class FusionMode { kFused, kStructuralOnly, kArtifactOnly };

std::string_view FusionModeName(FusionMode mode);
std::optional<FusionMode> ParseFusionMode(std::string_view name);

inline constexpr double kDefaultStdFloor = 1e-6;

struct NormalizerStats {
  std::vector<double> mean;
  std::vector<double> std;  // population convention, floored

  std::size_t dim() const { return mean.size(); }
};

NormalizerStats FitNormalizer(std::span<const Embedding> embeddings,
                              double floor = kDefaultStdFloor);

struct BranchConfig {
  FusionMode mode = FusionMode::kFused;
  std::optional<NormalizerStats> structural;
  std::optional<NormalizerStats> artifact;
};

/// Z-normalizes each required branch with its fitted statistics, concatenates
/// (structural first) and L2-normalizes. Single-branch modes ignore the other
/// input entirely. The result is always unit-norm with branch = fused.
Embedding Fuse(std::string utt_id,
               std::optional<std::span<const double>> structural,
               std::optional<std::span<const double>> artifact,
               const BranchConfig& config);

// Joins two stores by utt_id and fuses every utterance. Stores not needed by
// config.mode may be null. Output follows the order of the leading store
// (structural unless mode is artifact_only).
std::vector<Embedding> FuseStores(const EmbeddingStore* structural,
                                  const EmbeddingStore* artifact,
                                  const BranchConfig& config);

std::string SerializeBranchConfig(const BranchConfig& config);
BranchConfig ParseBranchConfig(std::string_view json_text);

}  // namespace advtrace

#endif  // ADVTRACE_FUSION_H_
