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

#include "advtrace/artifact.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <thread>

#include "advtrace/error.h"
#include "advtrace/wav.h"

namespace advtrace {
namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

Moments MomentsOf(std::span<const double> xs) {
  Moments m;
  if (xs.empty()) return m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  for (double x : xs) m.var += (x - m.mean) * (x - m.mean);
  m.var /= static_cast<double>(xs.size());
  return m;
}

double Flatness(std::span<const double> power) {
  double log_sum = 0.0, sum = 0.0;
  for (double p : power) {
    if (p <= 0.0) return 0.0;
    log_sum += std::log(p);
    sum += p;
  }
  const double n = static_cast<double>(power.size());
  return std::exp(log_sum / n) / (sum / n);
}

}  // namespace

std::array<double, ArtifactVector::kSize> ArtifactVector::ToArray() const {
  return {hf_ratio_mean,          hf_ratio_var,
          hf_discontinuity,       spectral_flux_mean,
          spectral_flux_var,      silence_fraction,
          silent_frame_flatness_mean, silent_frame_hf_ratio_mean,
          spectral_centroid_mean, spectral_centroid_var,
          spectral_flatness_mean, spectral_flatness_var,
          frame_energy_var,       log_energy_range,
          zero_crossing_rate_mean, zero_crossing_rate_var};
}

ArtifactVector ComputeArtifactFeatures(const AudioBuffer& audio) {
  const PowerSpectrogram spec = ComputePowerSpectrogram(audio);
  const FrameLayout& layout = spec.layout;
  const std::size_t frames = layout.num_frames;
  if (frames < 2) {
    throw ValidationError("artifact features need at least 2 frames, got " +
                          std::to_string(frames));
  }
  const std::size_t bins = layout.num_bins();

  std::vector<double> hf_ratio(frames), centroid(frames), flatness(frames),
      energy(frames), zcr(frames), flux;
  flux.reserve(frames - 1);
  std::vector<double> prev_norm(bins), cur_norm(bins);

  for (std::size_t t = 0; t < frames; ++t) {
    const auto power = spec.frame(t);
    double total = 0.0, high = 0.0, weighted = 0.0;
    for (std::size_t k = 0; k < bins; ++k) {
      total += power[k];
      weighted += spec.bin_hz(k) * power[k];
      if (spec.bin_hz(k) > kHighFrequencySplitHz) high += power[k];
    }
    hf_ratio[t] = total > 0.0 ? high / total : 0.0;
    centroid[t] = total > 0.0 ? weighted / total : 0.0;
    flatness[t] = total > 0.0 ? Flatness(power) : 0.0;

    for (std::size_t k = 0; k < bins; ++k) {
      cur_norm[k] = total > 0.0 ? power[k] / total : 0.0;
    }
    if (t > 0) {
      double sq = 0.0;
      for (std::size_t k = 0; k < bins; ++k) {
        const double d = cur_norm[k] - prev_norm[k];
        sq += d * d;
      }
      flux.push_back(std::sqrt(sq));
    }
    std::swap(prev_norm, cur_norm);

    const double* x = audio.samples.data() + t * layout.hop_samples;
    double e = 0.0;
    std::size_t crossings = 0;
    for (std::size_t i = 0; i < layout.frame_samples; ++i) {
      e += x[i] * x[i];
      if (i > 0 && (x[i] >= 0.0) != (x[i - 1] >= 0.0)) ++crossings;
    }
    energy[t] = e;
    zcr[t] = layout.frame_samples > 1
                 ? static_cast<double>(crossings) /
                       static_cast<double>(layout.frame_samples - 1)
                 : 0.0;
  }

  ArtifactVector out;
  const auto hf = MomentsOf(hf_ratio);
  out.hf_ratio_mean = hf.mean;
  out.hf_ratio_var = hf.var;
  double disc = 0.0;
  for (std::size_t t = 1; t < frames; ++t) {
    disc += std::abs(hf_ratio[t] - hf_ratio[t - 1]);
  }
  out.hf_discontinuity = disc / static_cast<double>(frames - 1);

  const auto fl = MomentsOf(flux);
  out.spectral_flux_mean = fl.mean;
  out.spectral_flux_var = fl.var;

  // A fully silent signal (max energy 0) counts every frame as silent.
  const double max_energy = *std::max_element(energy.begin(), energy.end());
  const double silence_threshold = max_energy * kSilenceRelativeThreshold;
  std::size_t silent = 0;
  double silent_flatness = 0.0, silent_hf = 0.0;
  for (std::size_t t = 0; t < frames; ++t) {
    if (max_energy == 0.0 || energy[t] < silence_threshold) {
      ++silent;
      silent_flatness += flatness[t];
      silent_hf += hf_ratio[t];
    }
  }
  out.silence_fraction =
      static_cast<double>(silent) / static_cast<double>(frames);
  if (silent > 0) {
    out.silent_frame_flatness_mean = silent_flatness / static_cast<double>(silent);
    out.silent_frame_hf_ratio_mean = silent_hf / static_cast<double>(silent);
  }

  const auto ce = MomentsOf(centroid);
  out.spectral_centroid_mean = ce.mean;
  out.spectral_centroid_var = ce.var;
  const auto fla = MomentsOf(flatness);
  out.spectral_flatness_mean = fla.mean;
  out.spectral_flatness_var = fla.var;
  out.frame_energy_var = MomentsOf(energy).var;

  if (max_energy > 0.0) {
    const double floor = max_energy * kLogEnergyRelativeFloor;
    double lo = std::log(max_energy), hi = lo;
    for (double e : energy) {
      const double le = std::log(std::max(e, floor));
      lo = std::min(lo, le);
      hi = std::max(hi, le);
    }
    out.log_energy_range = hi - lo;
  }

  const auto z = MomentsOf(zcr);
  out.zero_crossing_rate_mean = z.mean;
  out.zero_crossing_rate_var = z.var;
  return out;
}

AudioLoader WavFileLoader(std::filesystem::path base_dir) {
  return [base = std::move(base_dir)](const UtteranceRecord& rec) {
    if (!rec.source_path) {
      throw ValidationError("record '" + rec.utt_id + "' has no source_path");
    }
    std::filesystem::path path(*rec.source_path);
    if (path.is_relative() && !base.empty()) path = base / path;
    return ReadWavFile(path);
  };
}

ExtractionResult ExtractCorpus(std::span<const UtteranceRecord> records,
                               const AudioLoader& loader, unsigned threads) {
  if (records.empty()) throw ValidationError("empty manifest");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(records.size()));

  // Each slot is written by exactly one worker; output order is manifest
  // order whatever the schedule.
  std::vector<std::optional<std::vector<double>>> vectors(records.size());
  std::vector<std::string> errors(records.size());
  std::vector<std::exception_ptr> causes(records.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < records.size(); i = next++) {
      try {
        const auto features = ComputeArtifactFeatures(loader(records[i]));
        const auto values = features.ToArray();
        vectors[i].emplace(values.begin(), values.end());
      } catch (const std::exception& e) {
        errors[i] = e.what();
        causes[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  ExtractionResult result;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (vectors[i]) {
      result.embeddings.push_back(
          {records[i].utt_id, Branch::kArtifact, std::move(*vectors[i])});
    } else {
      result.failures.push_back({records[i].utt_id, errors[i]});
    }
  }
  // Nothing usable: surface the first failure with its original type so
  // callers can tell I/O problems from bad input.
  if (result.embeddings.empty()) std::rethrow_exception(causes.front());
  return result;
}

}  // namespace advtrace
