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

#ifndef ADVTRACE_METRICS_H_
#define ADVTRACE_METRICS_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "advtrace/scoring.h"

namespace advtrace {

// One operating point of the strict "score > threshold => same" rule. Rates
// are exact ratios of the integer counts.
struct RocPoint {
  double threshold = 0.0;
  double far = 0.0;
  double frr = 0.0;
  std::size_t false_accepts = 0;
  std::size_t false_rejects = 0;
};

/// Thresholds strictly decreasing: an above-max endpoint (FAR 0, FRR 1), one
/// point per distinct score, and a below-min endpoint (FAR 1, FRR 0). The
/// endpoint thresholds are the adjacent representable doubles, so every
/// point is a realizable threshold.
struct RocCurve {
  std::vector<RocPoint> points;
  std::size_t n_same = 0;
  std::size_t n_different = 0;
};

RocCurve ComputeRoc(std::span<const ScoredTrial> scored);

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
};

// Walks to the first point where FAR - FRR >= 0. An exact crossing returns
// that point's rate and the midpoint of the threshold interval realizing it;
// otherwise rates and threshold are linearly interpolated between the two
// bracketing points.
EerResult ComputeEer(const RocCurve& roc);
EerResult ComputeEer(std::span<const ScoredTrial> scored);

// Mann-Whitney rank statistic with ties counted as 1/2, O(n log n).
double ComputeAuroc(std::span<const ScoredTrial> scored);

enum class RateConstraint { kFar, kFrr };

struct OperatingPoint {
  double threshold = 0.0;
  double far = 0.0;
  double frr = 0.0;
};

// kFar: among points with FAR <= alpha, minimal FRR (ties: higher FAR).
// kFrr: among points with FRR <= alpha, minimal FAR (ties: higher FRR).
// Never interpolated.
OperatingPoint ComputeOperatingPoint(const RocCurve& roc,
                                     RateConstraint constraint, double alpha);
OperatingPoint ComputeOperatingPoint(std::span<const ScoredTrial> scored,
                                     RateConstraint constraint, double alpha);

struct ConfusionCounts {
  std::size_t n_same = 0;
  std::size_t n_different = 0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
};

struct MetricsReport {
  double acc = 0.0;
  double far = 0.0;
  double frr = 0.0;
  double eer = 0.0;
  double f1 = 0.0;
  double auroc = 0.0;
  double frr_at_far1 = 0.0;
  double far_at_frr1 = 0.0;
  double threshold_used = 0.0;
  ConfusionCounts counts;
};

inline constexpr double kOperatingPointAlpha = 0.01;

// Acc/FAR/FRR/F1 at the supplied threshold ("same" is the positive class);
// EER, AUROC and the 1% operating points are threshold-free.
MetricsReport ComputeReport(std::span<const ScoredTrial> scored,
                            double threshold);

// The validation-set EER threshold.
double Calibrate(std::span<const ScoredTrial> validation);

std::string ReportToJson(const MetricsReport& report);
void WriteRocCsv(const RocCurve& roc, std::ostream& out);

}  // namespace advtrace

#endif  // ADVTRACE_METRICS_H_
