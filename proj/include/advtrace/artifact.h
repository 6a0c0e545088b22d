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

#ifndef ADVTRACE_ARTIFACT_H_
#define ADVTRACE_ARTIFACT_H_

#include <array>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "advtrace/dsp.h"
#include "advtrace/types.h"

namespace advtrace {

inline constexpr double kHighFrequencySplitHz = 4000.0;
inline constexpr double kSilenceRelativeThreshold = 1e-4;
// log_energy_range floors frame energies at this fraction of the loudest
// frame so digital silence stays finite.
inline constexpr double kLogEnergyRelativeFloor = 1e-10;

/// Per-utterance generation-artifact statistics.
///
/// Variances are population variances over frames. Flux and discontinuity
/// statistics are taken over the T - 1 successive frame pairs.
struct ArtifactVector {
  static constexpr std::size_t kSize = 16;

  double hf_ratio_mean = 0.0;
  double hf_ratio_var = 0.0;
  double hf_discontinuity = 0.0;
  double spectral_flux_mean = 0.0;
  double spectral_flux_var = 0.0;
  double silence_fraction = 0.0;
  double silent_frame_flatness_mean = 0.0;
  double silent_frame_hf_ratio_mean = 0.0;
  double spectral_centroid_mean = 0.0;
  double spectral_centroid_var = 0.0;
  double spectral_flatness_mean = 0.0;
  double spectral_flatness_var = 0.0;
  double frame_energy_var = 0.0;
  double log_energy_range = 0.0;
  double zero_crossing_rate_mean = 0.0;
  double zero_crossing_rate_var = 0.0;

  // Serialization order; matches the field order above.
  static constexpr std::array<std::string_view, kSize> kNames = {
      "hf_ratio_mean",          "hf_ratio_var",
      "hf_discontinuity",       "spectral_flux_mean",
      "spectral_flux_var",      "silence_fraction",
      "silent_frame_flatness_mean", "silent_frame_hf_ratio_mean",
      "spectral_centroid_mean", "spectral_centroid_var",
      "spectral_flatness_mean", "spectral_flatness_var",
      "frame_energy_var",       "log_energy_range",
      "zero_crossing_rate_mean", "zero_crossing_rate_var"};

  std::array<double, kSize> ToArray() const;
};

// Requires at least two frames.
ArtifactVector ComputeArtifactFeatures(const AudioBuffer& audio);

using AudioLoader = std::function<AudioBuffer(const UtteranceRecord&)>;

// Loads record.source_path as WAV; relative paths resolve against base_dir.
AudioLoader WavFileLoader(std::filesystem::path base_dir = {});

struct ExtractionFailure {
  std::string utt_id;
  std::string message;
};

struct ExtractionResult {
  std::vector<Embedding> embeddings;  // manifest order, failures skipped
  std::vector<ExtractionFailure> failures;
};

// Computes one artifact-branch embedding (D = 16) per record. Per-utterance
// failures are collected; throws only when every utterance fails.
// `threads == 0` uses the hardware concurrency.
ExtractionResult ExtractCorpus(std::span<const UtteranceRecord> records,
                               const AudioLoader& loader,
                               unsigned threads = 0);

}  // namespace advtrace

#endif  // ADVTRACE_ARTIFACT_H_
