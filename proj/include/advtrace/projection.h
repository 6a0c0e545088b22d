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

#ifndef ADVTRACE_PROJECTION_H_
#define ADVTRACE_PROJECTION_H_

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "advtrace/types.h"

namespace advtrace {

struct Projection2d {
  std::vector<std::string> utt_ids;
  std::vector<std::array<double, 2>> coords;
  std::array<std::vector<double>, 2> axes;  // unit principal directions
  std::array<double, 2> variances{};        // eigenvalues of the covariance
};

inline constexpr double kPowerIterationTolerance = 1e-9;

/// Mean-centered projection onto the top two principal components.
///
/// The components come from power iteration on the population covariance
/// with deflation, started from a fixed vector, so the output is a
/// deterministic function of the input. Each axis is signed so that its
/// largest-magnitude entry is positive. Throws when there are fewer than
/// three points, D < 2, or the covariance is zero.
Projection2d ProjectPca(std::span<const Embedding> embeddings);

// "utt_id,x,y,label" rows, then one "#centroid,x,y,label" row per label with
// the mean 2D position of that label's points. Fields are RFC 4180 quoted
// where needed. Utterances missing from the manifest get an empty label.
void WriteProjectionCsv(const Projection2d& projection,
                        std::span<const UtteranceRecord> manifest,
                        std::ostream& out);

}  // namespace advtrace

#endif  // ADVTRACE_PROJECTION_H_
