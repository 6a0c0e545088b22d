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

#ifndef ADVTRACE_SCORING_H_
#define ADVTRACE_SCORING_H_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "advtrace/embedding_store.h"
#include "advtrace/trials.h"
#include "advtrace/types.h"

namespace advtrace {

inline constexpr double kDefaultTemperature = 0.1;

struct ScoredTrial {
  std::string trial_id;
  double score = 0.0;  // cosine, in [-1, 1]
  TrialLabel label = TrialLabel::kSame;

  friend bool operator==(const ScoredTrial&, const ScoredTrial&) = default;
};

struct MethodCentroid {
  MethodLabel label;
  std::vector<double> vector;  // unit norm
  std::size_t support = 0;
};

double Cosine(std::span<const double> a, std::span<const double> b);

// L2-normalized mean of the L2-normalized inputs. Throws on empty input, a
// zero input vector, mismatched dimensions, or a mean that cancels to zero.
std::vector<double> Centroid(std::span<const std::span<const double>> vectors);

// score = cosine(centroid(enroll), centroid(verify)); order preserved.
std::vector<ScoredTrial> ScoreTrials(std::span<const TrialPair> trials,
                                     const EmbeddingStore& store);

// same <=> score > threshold.
std::vector<TrialLabel> Decide(std::span<const ScoredTrial> scored,
                               double threshold);

// One centroid per method label over the given records, labels sorted by name.
std::vector<MethodCentroid> BuildMethodCentroids(
    std::span<const UtteranceRecord> records, const EmbeddingStore& store);

// Softmax over cos(x, c_k) / temperature, in centroid order.
std::vector<double> CentroidPosteriors(std::span<const double> x,
                                       std::span<const MethodCentroid> centroids,
                                       double temperature);

struct DetectionScore {
  std::string utt_id;
  double score = 0.0;  // posterior of the bonafide centroid
  bool is_bonafide = false;
};

// Requires exactly one bonafide centroid and at least one other.
std::vector<DetectionScore> DetectionScores(
    std::span<const UtteranceRecord> records, const EmbeddingStore& store,
    std::span<const MethodCentroid> centroids,
    double temperature = kDefaultTemperature);

// bonafide -> same, spoof -> different, so the verification metrics apply.
std::vector<ScoredTrial> DetectionAsScoredTrials(
    std::span<const DetectionScore> scores);

void WriteScoredTrials(std::span<const ScoredTrial> scored, std::ostream& out);
std::vector<ScoredTrial> ReadScoredTrials(std::istream& in);
void WriteScoredTrialsFile(std::span<const ScoredTrial> scored,
                           const std::filesystem::path& path);
std::vector<ScoredTrial> ReadScoredTrialsFile(const std::filesystem::path& path);

void WriteDetectionScores(std::span<const DetectionScore> scores,
                          std::ostream& out);

}  // namespace advtrace

#endif  // ADVTRACE_SCORING_H_
