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

#include "advtrace/projection.h"

#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <unordered_map>

#include "advtrace/error.h"

namespace advtrace {
namespace {

constexpr int kMaxIterations = 20000;

using Matrix = std::vector<double>;  // row-major D x D

std::vector<double> Multiply(const Matrix& m, const std::vector<double>& v) {
  const std::size_t d = v.size();
  std::vector<double> out(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) acc += m[i * d + j] * v[j];
    out[i] = acc;
  }
  return out;
}

double Dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

void RemoveComponent(std::vector<double>& v, const std::vector<double>& axis) {
  const double p = Dot(v, axis);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= p * axis[i];
}

bool Normalize(std::vector<double>& v) {
  const double n = std::sqrt(Dot(v, v));
  if (!(n > 0.0)) return false;
  for (double& x : v) x /= n;
  return true;
}

void FixSign(std::vector<double>& v) {
  std::size_t arg = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
  }
  if (v[arg] < 0.0) {
    for (double& x : v) x = -x;
  }
}

// Dominant eigenpair of `cov` restricted to the complement of `previous`.
std::pair<std::vector<double>, double> PowerIterate(
    const Matrix& cov, const std::vector<double>* previous, double scale) {
  const std::size_t d = static_cast<std::size_t>(std::sqrt(cov.size()));
  std::vector<double> v(d);
  for (std::size_t i = 0; i < d; ++i) v[i] = 1.0 / std::sqrt(1.0 + i);
  if (previous) RemoveComponent(v, *previous);
  if (!Normalize(v)) {
    v.assign(d, 0.0);
    v[d - 1] = 1.0;
    if (previous) RemoveComponent(v, *previous);
    Normalize(v);
  }

  double lambda = 0.0;
  for (int it = 0; it < kMaxIterations; ++it) {
    auto w = Multiply(cov, v);
    if (previous) RemoveComponent(w, *previous);
    lambda = std::sqrt(Dot(w, w));
    // Null space: any unit vector orthogonal to `previous` is an eigenvector.
    if (lambda <= scale) return {v, 0.0};
    for (double& x : w) x /= lambda;
    FixSign(w);
    double change = 0.0;
    for (std::size_t i = 0; i < d; ++i) change += (w[i] - v[i]) * (w[i] - v[i]);
    v = std::move(w);
    if (std::sqrt(change) < kPowerIterationTolerance) break;
  }
  return {v, Dot(v, Multiply(cov, v))};
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

Projection2d ProjectPca(std::span<const Embedding> embeddings) {
  if (embeddings.size() < 3) {
    throw ValidationError("projection needs at least 3 embeddings");
  }
  const std::size_t d = embeddings.front().vector.size();
  if (d < 2) throw ValidationError("projection needs dimension >= 2");
  const double n = static_cast<double>(embeddings.size());

  std::vector<double> mean(d, 0.0);
  double max_abs = 0.0;
  for (const auto& e : embeddings) {
    if (e.vector.size() != d) {
      throw ValidationError("dimension mismatch at '" + e.utt_id + "'");
    }
    for (std::size_t i = 0; i < d; ++i) {
      mean[i] += e.vector[i];
      max_abs = std::max(max_abs, std::abs(e.vector[i]));
    }
  }
  for (double& m : mean) m /= n;

  Matrix cov(d * d, 0.0);
  std::vector<double> centered(d);
  for (const auto& e : embeddings) {
    for (std::size_t i = 0; i < d; ++i) centered[i] = e.vector[i] - mean[i];
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i; j < d; ++j) {
        cov[i * d + j] += centered[i] * centered[j];
      }
    }
  }
  double trace = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      cov[i * d + j] /= n;
      cov[j * d + i] = cov[i * d + j];
    }
    trace += cov[i * d + i];
  }
  // Relative to the data scale, rounding noise from centering is ~1e-16.
  const double noise = 1e-12 * max_abs * 1e-12 * max_abs * static_cast<double>(d);
  if (!(trace > noise)) {
    throw ValidationError("covariance has rank 0 (all embeddings identical)");
  }

  Projection2d out;
  auto [axis0, var0] = PowerIterate(cov, nullptr, noise);
  // Deflate the first component before searching for the second.
  Matrix deflated = cov;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      deflated[i * d + j] -= var0 * axis0[i] * axis0[j];
    }
  }
  auto [axis1, var1] = PowerIterate(deflated, &axis0, noise);
  out.axes = {axis0, axis1};
  out.variances = {var0, std::max(var1, 0.0)};

  out.utt_ids.reserve(embeddings.size());
  out.coords.reserve(embeddings.size());
  for (const auto& e : embeddings) {
    for (std::size_t i = 0; i < d; ++i) centered[i] = e.vector[i] - mean[i];
    out.utt_ids.push_back(e.utt_id);
    out.coords.push_back({Dot(centered, out.axes[0]), Dot(centered, out.axes[1])});
  }
  return out;
}

void WriteProjectionCsv(const Projection2d& projection,
                        std::span<const UtteranceRecord> manifest,
                        std::ostream& out) {
  std::unordered_map<std::string_view, std::string_view> label_of;
  for (const auto& r : manifest) label_of.emplace(r.utt_id, r.label.name);

  struct Accum {
    double x = 0.0, y = 0.0;
    std::size_t n = 0;
  };
  std::map<std::string, Accum> centroids;
  char buf[64];
  out << "utt_id,x,y,label\n";
  for (std::size_t i = 0; i < projection.utt_ids.size(); ++i) {
    auto it = label_of.find(projection.utt_ids[i]);
    const std::string label =
        it == label_of.end() ? std::string() : std::string(it->second);
    const auto [x, y] = projection.coords[i];
    std::snprintf(buf, sizeof(buf), ",%.17g,%.17g,", x, y);
    out << CsvField(projection.utt_ids[i]) << buf << CsvField(label) << '\n';
    auto& acc = centroids[label];
    acc.x += x;
    acc.y += y;
    ++acc.n;
  }
  for (const auto& [label, acc] : centroids) {
    std::snprintf(buf, sizeof(buf), ",%.17g,%.17g,",
                  acc.x / static_cast<double>(acc.n),
                  acc.y / static_cast<double>(acc.n));
    out << "#centroid" << buf << CsvField(label) << '\n';
  }
}

}  // namespace advtrace
