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

#include "advtrace/synthetic.h"

#include <cmath>
#include <cstdio>
#include <string>

#include "advtrace/error.h"
#include "advtrace/rng.h"

namespace advtrace {

void ValidateClusterSpec(const ClusterSpec& spec) {
  if (spec.n_methods < 2) throw ValidationError("n_methods must be >= 2");
  if (spec.samples_per_method < 1) {
    throw ValidationError("samples_per_method must be >= 1");
  }
  if (spec.dim < 2) throw ValidationError("dim must be >= 2");
  if (!(spec.separation >= 0.0) || !std::isfinite(spec.separation)) {
    throw ValidationError("separation must be finite and >= 0");
  }
  if (!(spec.intra_std > 0.0) || !std::isfinite(spec.intra_std)) {
    throw ValidationError("intra_std must be finite and > 0");
  }
  if (spec.bonafide_separation && (!(*spec.bonafide_separation >= 0.0) ||
                                   !std::isfinite(*spec.bonafide_separation))) {
    throw ValidationError("bonafide_separation must be finite and >= 0");
  }
  if (!(spec.validation_fraction >= 0.0 && spec.validation_fraction < 1.0)) {
    throw ValidationError("validation_fraction must lie in [0, 1)");
  }
}

namespace {

std::vector<double> RandomDirection(std::size_t dim, Rng& rng) {
  std::vector<double> v(dim);
  double sq = 0.0;
  while (sq == 0.0) {
    sq = 0.0;
    for (double& x : v) {
      x = rng.Normal();
      sq += x * x;
    }
  }
  const double n = std::sqrt(sq);
  for (double& x : v) x /= n;
  return v;
}

}  // namespace

SyntheticCorpus GenerateCorpus(const ClusterSpec& spec) {
  ValidateClusterSpec(spec);
  Rng rng(spec.seed);

  std::vector<MethodLabel> labels;
  std::vector<std::vector<double>> centroids;
  for (std::size_t m = 0; m < spec.n_methods; ++m) {
    char name[32];
    std::snprintf(name, sizeof(name), "M%03zu", m);
    labels.push_back({name, false});
    auto c = RandomDirection(spec.dim, rng);
    for (double& x : c) x *= spec.separation;
    centroids.push_back(std::move(c));
  }
  if (spec.bonafide_separation) {
    labels.push_back({"bonafide", true});
    auto c = RandomDirection(spec.dim, rng);
    for (double& x : c) x *= *spec.bonafide_separation;
    centroids.push_back(std::move(c));
  }

  const auto n_validation = static_cast<std::size_t>(std::llround(
      spec.validation_fraction * static_cast<double>(spec.samples_per_method)));

  SyntheticCorpus corpus;
  corpus.manifest.reserve(labels.size() * spec.samples_per_method);
  corpus.embeddings.reserve(labels.size() * spec.samples_per_method);
  for (std::size_t m = 0; m < labels.size(); ++m) {
    for (std::size_t i = 0; i < spec.samples_per_method; ++i) {
      std::vector<double> v(spec.dim);
      double sq = 0.0;
      while (sq == 0.0) {
        sq = 0.0;
        for (std::size_t d = 0; d < spec.dim; ++d) {
          v[d] = centroids[m][d] + spec.intra_std * rng.Normal();
          sq += v[d] * v[d];
        }
      }
      const double n = std::sqrt(sq);
      for (double& x : v) x = static_cast<float>(x / n);

      char id[64];
      std::snprintf(id, sizeof(id), "%s_u%05zu", labels[m].name.c_str(), i);
      corpus.manifest.push_back(
          {id, labels[m], i < n_validation ? Split::kValidation : Split::kTest,
           std::nullopt});
      corpus.embeddings.push_back({id, Branch::kFused, std::move(v)});
    }
  }
  return corpus;
}

}  // namespace advtrace
