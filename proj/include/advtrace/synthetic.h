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

#ifndef ADVTRACE_SYNTHETIC_H_
#define ADVTRACE_SYNTHETIC_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "advtrace/types.h"

namespace advtrace {

/// Spherical Gaussian method clusters on a sphere of radius `separation`.
struct ClusterSpec {
  std::size_t n_methods = 2;
  std::size_t samples_per_method = 1;
  std::size_t dim = 2;
  double separation = 1.0;
  double intra_std = 0.25;
  // Adds one "bonafide" cluster whose centroid radius is this value.
  std::optional<double> bonafide_separation;
  // The first round(fraction * samples_per_method) samples of every cluster
  // go to the validation split, the rest to test.
  double validation_fraction = 0.0;
  std::uint64_t seed = 0;
};

void ValidateClusterSpec(const ClusterSpec& spec);

struct SyntheticCorpus {
  std::vector<UtteranceRecord> manifest;
  std::vector<Embedding> embeddings;  // branch fused, manifest order
};

// Centroids are uniform directions scaled by the separation, samples are
// centroid + N(0, intra_std^2 I), L2-normalized and then rounded to float32
// so an ADVE round trip reproduces them exactly. Labels are M000, M001, ...
// plus "bonafide"; utterance ids are <label>_u00000, ...
SyntheticCorpus GenerateCorpus(const ClusterSpec& spec);

}  // namespace advtrace

#endif  // ADVTRACE_SYNTHETIC_H_
