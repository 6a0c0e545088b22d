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

#include "advtrace/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "advtrace/error.h"
#include "json.hpp"

namespace advtrace {
namespace {

struct ClassCounts {
  std::size_t same = 0;
  std::size_t different = 0;
};

ClassCounts CheckScored(std::span<const ScoredTrial> scored) {
  ClassCounts c;
  for (const auto& s : scored) {
    if (!std::isfinite(s.score)) {
      throw ValidationError("non-finite score in trial '" + s.trial_id + "'");
    }
    (s.label == TrialLabel::kSame ? c.same : c.different)++;
  }
  if (c.same == 0 || c.different == 0) {
    throw ValidationError(
        "metrics need at least one same and one different trial (got " +
        std::to_string(c.same) + " same, " + std::to_string(c.different) +
        " different)");
  }
  return c;
}

RocPoint MakePoint(double threshold, std::size_t fa, std::size_t fr,
                   const ClassCounts& n) {
  return {threshold, static_cast<double>(fa) / static_cast<double>(n.different),
          static_cast<double>(fr) / static_cast<double>(n.same), fa, fr};
}

// (FAR - FRR) * n_same * n_different, exact in integers.
long double Gap(const RocPoint& p, const RocCurve& roc) {
  return static_cast<long double>(p.false_accepts) * roc.n_same -
         static_cast<long double>(p.false_rejects) * roc.n_different;
}

}  // namespace

RocCurve ComputeRoc(std::span<const ScoredTrial> scored) {
  const ClassCounts n = CheckScored(scored);
  std::vector<std::pair<double, TrialLabel>> sorted;
  sorted.reserve(scored.size());
  for (const auto& s : scored) sorted.emplace_back(s.score, s.label);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  RocCurve roc;
  roc.n_same = n.same;
  roc.n_different = n.different;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::size_t fa = 0, fr = n.same;
  roc.points.push_back(MakePoint(std::nextafter(sorted.front().first, kInf),
                                 fa, fr, n));
  for (std::size_t i = 0; i < sorted.size();) {
    const double s = sorted[i].first;
    // Scores strictly above s are already accepted.
    roc.points.push_back(MakePoint(s, fa, fr, n));
    for (; i < sorted.size() && sorted[i].first == s; ++i) {
      if (sorted[i].second == TrialLabel::kSame) {
        --fr;
      } else {
        ++fa;
      }
    }
  }
  roc.points.push_back(
      MakePoint(std::nextafter(sorted.back().first, -kInf), fa, fr, n));
  return roc;
}

EerResult ComputeEer(const RocCurve& roc) {
  const auto& pts = roc.points;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const long double gap = Gap(pts[i], roc);
    if (gap < 0) continue;
    if (gap == 0) {
      // Every threshold in [t_i, t_{i-1}) realizes point i.
      return {pts[i].far, 0.5 * (pts[i].threshold + pts[i - 1].threshold)};
    }
    const long double prev = Gap(pts[i - 1], roc);
    const double alpha = static_cast<double>(-prev / (gap - prev));
    return {pts[i - 1].far + alpha * (pts[i].far - pts[i - 1].far),
            pts[i - 1].threshold +
                alpha * (pts[i].threshold - pts[i - 1].threshold)};
  }
  // Unreachable: the last point always has FAR 1, FRR 0.
  throw Error("ROC curve does not reach FAR = 1");
}

EerResult ComputeEer(std::span<const ScoredTrial> scored) {
  return ComputeEer(ComputeRoc(scored));
}

double ComputeAuroc(std::span<const ScoredTrial> scored) {
  const ClassCounts n = CheckScored(scored);
  std::vector<double> different;
  different.reserve(n.different);
  for (const auto& s : scored) {
    if (s.label == TrialLabel::kDifferent) different.push_back(s.score);
  }
  std::sort(different.begin(), different.end());
  // Twice the pair count, so ties stay integral.
  unsigned long long doubled = 0;
  for (const auto& s : scored) {
    if (s.label != TrialLabel::kSame) continue;
    const auto lo = std::lower_bound(different.begin(), different.end(), s.score);
    const auto hi = std::upper_bound(lo, different.end(), s.score);
    doubled += 2ULL * static_cast<unsigned long long>(lo - different.begin()) +
               static_cast<unsigned long long>(hi - lo);
  }
  return static_cast<double>(doubled) /
         (2.0 * static_cast<double>(n.same) * static_cast<double>(n.different));
}

OperatingPoint ComputeOperatingPoint(const RocCurve& roc,
                                     RateConstraint constraint, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ValidationError("operating point alpha must lie in (0, 1)");
  }
  const RocPoint* best = nullptr;
  for (const auto& p : roc.points) {
    if (constraint == RateConstraint::kFar) {
      if (p.far > alpha) continue;
      if (best == nullptr || p.frr < best->frr ||
          (p.frr == best->frr && p.far > best->far)) {
        best = &p;
      }
    } else {
      if (p.frr > alpha) continue;
      if (best == nullptr || p.far < best->far ||
          (p.far == best->far && p.frr > best->frr)) {
        best = &p;
      }
    }
  }
  // The endpoints (FAR 0 / FRR 0) always qualify.
  return {best->threshold, best->far, best->frr};
}

OperatingPoint ComputeOperatingPoint(std::span<const ScoredTrial> scored,
                                     RateConstraint constraint, double alpha) {
  return ComputeOperatingPoint(ComputeRoc(scored), constraint, alpha);
}

MetricsReport ComputeReport(std::span<const ScoredTrial> scored,
                            double threshold) {
  const RocCurve roc = ComputeRoc(scored);
  MetricsReport r;
  r.threshold_used = threshold;
  auto& c = r.counts;
  c.n_same = roc.n_same;
  c.n_different = roc.n_different;
  const auto decisions = Decide(scored, threshold);
  for (std::size_t i = 0; i < scored.size(); ++i) {
    const bool accepted = decisions[i] == TrialLabel::kSame;
    if (scored[i].label == TrialLabel::kSame) {
      (accepted ? c.tp : c.fn)++;
    } else {
      (accepted ? c.fp : c.tn)++;
    }
  }
  const double total = static_cast<double>(c.n_same + c.n_different);
  r.acc = static_cast<double>(c.tp + c.tn) / total;
  r.far = static_cast<double>(c.fp) / static_cast<double>(c.n_different);
  r.frr = static_cast<double>(c.fn) / static_cast<double>(c.n_same);
  r.f1 = 2.0 * static_cast<double>(c.tp) /
         static_cast<double>(2 * c.tp + c.fp + c.fn);
  r.eer = ComputeEer(roc).eer;
  r.auroc = ComputeAuroc(scored);
  r.frr_at_far1 =
      ComputeOperatingPoint(roc, RateConstraint::kFar, kOperatingPointAlpha).frr;
  r.far_at_frr1 =
      ComputeOperatingPoint(roc, RateConstraint::kFrr, kOperatingPointAlpha).far;
  return r;
}

double Calibrate(std::span<const ScoredTrial> validation) {
  return ComputeEer(validation).threshold;
}

std::string ReportToJson(const MetricsReport& r) {
  nlohmann::ordered_json j;
  j["acc"] = r.acc;
  j["far"] = r.far;
  j["frr"] = r.frr;
  j["eer"] = r.eer;
  j["f1"] = r.f1;
  j["auroc"] = r.auroc;
  j["frr_at_far1"] = r.frr_at_far1;
  j["far_at_frr1"] = r.far_at_frr1;
  j["threshold_used"] = r.threshold_used;
  j["counts"] = {{"n_same", r.counts.n_same},
                 {"n_different", r.counts.n_different},
                 {"tp", r.counts.tp},
                 {"fp", r.counts.fp},
                 {"tn", r.counts.tn},
                 {"fn", r.counts.fn}};
  return j.dump(2);
}

void WriteRocCsv(const RocCurve& roc, std::ostream& out) {
  out << "threshold,far,frr\n";
  char buf[96];
  for (const auto& p : roc.points) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", p.threshold, p.far,
                  p.frr);
    out << buf;
  }
}

}  // namespace advtrace
