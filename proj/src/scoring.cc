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

#include "advtrace/scoring.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "advtrace/error.h"
#include "json.hpp"

namespace advtrace {
namespace {

double Norm(std::span<const double> v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  return std::sqrt(sq);
}

}  // namespace

double Cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ValidationError("cosine of vectors with different dimensions");
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  const double denom = Norm(a) * Norm(b);
  if (!(denom > 0.0)) throw ValidationError("cosine of a zero vector");
  return std::clamp(dot / denom, -1.0, 1.0);
}

std::vector<double> Centroid(std::span<const std::span<const double>> vectors) {
  if (vectors.empty()) throw ValidationError("centroid of no embeddings");
  const std::size_t dim = vectors.front().size();
  std::vector<double> mean(dim, 0.0);
  for (const auto v : vectors) {
    if (v.size() != dim) {
      throw ValidationError("centroid inputs have different dimensions");
    }
    const double n = Norm(v);
    if (!(n > 0.0)) throw ValidationError("centroid input is a zero vector");
    for (std::size_t d = 0; d < dim; ++d) mean[d] += v[d] / n;
  }
  for (double& x : mean) x /= static_cast<double>(vectors.size());
  const double n = Norm(mean);
  // Unit inputs: a mean this small is cancellation, not signal.
  if (!(n > 1e-12)) throw ValidationError("centroid mean is zero");
  for (double& x : mean) x /= n;
  return mean;
}

std::vector<ScoredTrial> ScoreTrials(std::span<const TrialPair> trials,
                                     const EmbeddingStore& store) {
  std::vector<ScoredTrial> out;
  out.reserve(trials.size());
  std::vector<std::span<const double>> side;
  auto centroid_of = [&](const TrialPair& t,
                         const std::vector<std::string>& ids) {
    side.clear();
    for (const auto& id : ids) {
      const Embedding* e = store.Find(id);
      if (e == nullptr) {
        throw ValidationError("trial '" + t.trial_id + "' references utt_id '" +
                              id + "' which is not in the embedding store");
      }
      side.push_back(e->vector);
    }
    return Centroid(side);
  };
  for (const auto& t : trials) {
    const auto enroll = centroid_of(t, t.enroll_ids);
    const auto verify = centroid_of(t, t.verify_ids);
    out.push_back({t.trial_id, Cosine(enroll, verify), t.label});
  }
  return out;
}

std::vector<TrialLabel> Decide(std::span<const ScoredTrial> scored,
                               double threshold) {
  if (!std::isfinite(threshold)) throw ValidationError("non-finite threshold");
  std::vector<TrialLabel> out;
  out.reserve(scored.size());
  for (const auto& s : scored) {
    if (!std::isfinite(s.score)) {
      throw ValidationError("non-finite score in trial '" + s.trial_id + "'");
    }
    out.push_back(s.score > threshold ? TrialLabel::kSame
                                      : TrialLabel::kDifferent);
  }
  return out;
}

std::vector<MethodCentroid> BuildMethodCentroids(
    std::span<const UtteranceRecord> records, const EmbeddingStore& store) {
  std::map<std::string, std::pair<MethodLabel, std::vector<std::span<const double>>>>
      groups;
  for (const auto& rec : records) {
    const Embedding* e = store.Find(rec.utt_id);
    if (e == nullptr) {
      throw ValidationError("no embedding for enrollment utterance '" +
                            rec.utt_id + "'");
    }
    auto& g = groups[rec.label.name];
    g.first = rec.label;
    g.second.push_back(e->vector);
  }
  std::vector<MethodCentroid> out;
  for (auto& [name, g] : groups) {
    out.push_back({g.first, Centroid(g.second), g.second.size()});
  }
  return out;
}

std::vector<double> CentroidPosteriors(std::span<const double> x,
                                       std::span<const MethodCentroid> centroids,
                                       double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw ValidationError("temperature must be a positive finite number");
  }
  if (centroids.empty()) throw ValidationError("no centroids");
  std::vector<double> logits(centroids.size());
  for (std::size_t k = 0; k < centroids.size(); ++k) {
    logits[k] = Cosine(x, centroids[k].vector) / temperature;
  }
  const double top = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double& l : logits) {
    l = std::exp(l - top);
    z += l;
  }
  for (double& l : logits) l /= z;
  return logits;
}

std::vector<DetectionScore> DetectionScores(
    std::span<const UtteranceRecord> records, const EmbeddingStore& store,
    std::span<const MethodCentroid> centroids, double temperature) {
  std::size_t bonafide = centroids.size();
  for (std::size_t k = 0; k < centroids.size(); ++k) {
    if (!centroids[k].label.is_bonafide) continue;
    if (bonafide != centroids.size()) {
      throw ValidationError("more than one bonafide centroid");
    }
    bonafide = k;
  }
  if (bonafide == centroids.size()) {
    throw ValidationError("detection needs a bonafide centroid");
  }
  if (centroids.size() < 2) {
    throw ValidationError("detection needs at least one non-bonafide centroid");
  }
  std::vector<DetectionScore> out;
  out.reserve(records.size());
  for (const auto& rec : records) {
    const Embedding* e = store.Find(rec.utt_id);
    if (e == nullptr) {
      throw ValidationError("no embedding for utterance '" + rec.utt_id + "'");
    }
    const auto post = CentroidPosteriors(e->vector, centroids, temperature);
    out.push_back({rec.utt_id, post[bonafide], rec.label.is_bonafide});
  }
  return out;
}

std::vector<ScoredTrial> DetectionAsScoredTrials(
    std::span<const DetectionScore> scores) {
  std::vector<ScoredTrial> out;
  out.reserve(scores.size());
  for (const auto& s : scores) {
    out.push_back({s.utt_id, s.score,
                   s.is_bonafide ? TrialLabel::kSame : TrialLabel::kDifferent});
  }
  return out;
}

void WriteScoredTrials(std::span<const ScoredTrial> scored, std::ostream& out) {
  for (const auto& s : scored) {
    nlohmann::ordered_json j;
    j["trial_id"] = s.trial_id;
    j["score"] = s.score;
    j["label"] = TrialLabelName(s.label);
    out << j.dump() << '\n';
  }
  if (!out) throw IoError("failed writing scores");
}

std::vector<ScoredTrial> ReadScoredTrials(std::istream& in) {
  std::vector<ScoredTrial> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::string where = "scores line " + std::to_string(line_no) + ": ";
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(where + "malformed JSON: " + e.what());
    }
    if (!j.is_object() || !j.contains("trial_id") ||
        !j["trial_id"].is_string() || !j.contains("score") ||
        !j["score"].is_number() || !j.contains("label") ||
        !j["label"].is_string()) {
      throw FormatError(where + "expected {trial_id, score, label}");
    }
    const auto label = ParseTrialLabel(j["label"].get<std::string>());
    if (!label) throw FormatError(where + "label must be same or different");
    ScoredTrial s{j["trial_id"].get<std::string>(), j["score"].get<double>(),
                  *label};
    if (!std::isfinite(s.score)) throw ValidationError(where + "non-finite score");
    out.push_back(std::move(s));
  }
  if (in.bad()) throw IoError("failed reading scores");
  return out;
}

void WriteScoredTrialsFile(std::span<const ScoredTrial> scored,
                           const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  WriteScoredTrials(scored, out);
}

std::vector<ScoredTrial> ReadScoredTrialsFile(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scores file '" + path.string() + "'");
  return ReadScoredTrials(in);
}

void WriteDetectionScores(std::span<const DetectionScore> scores,
                          std::ostream& out) {
  for (const auto& s : scores) {
    nlohmann::ordered_json j;
    j["utt_id"] = s.utt_id;
    j["score"] = s.score;
    j["is_bonafide"] = s.is_bonafide;
    out << j.dump() << '\n';
  }
  if (!out) throw IoError("failed writing detection scores");
}

}  // namespace advtrace
