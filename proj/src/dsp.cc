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

#include "advtrace/dsp.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "advtrace/error.h"

namespace advtrace {

FrameLayout FrameLayoutFor(const AudioBuffer& audio) {
  if (audio.sample_rate < kMinSampleRate) {
    throw ValidationError("sample rate " + std::to_string(audio.sample_rate) +
                          " Hz is below the supported minimum of 8000 Hz");
  }
  for (double s : audio.samples) {
    if (!std::isfinite(s)) throw ValidationError("non-finite audio sample");
  }
  FrameLayout layout;
  layout.frame_samples =
      static_cast<std::size_t>(std::lround(kFrameSeconds * audio.sample_rate));
  layout.hop_samples =
      static_cast<std::size_t>(std::lround(kHopSeconds * audio.sample_rate));
  layout.fft_size = std::bit_ceil(layout.frame_samples);
  if (audio.samples.size() < layout.frame_samples) {
    throw ValidationError("audio has " + std::to_string(audio.samples.size()) +
                          " samples, shorter than one " +
                          std::to_string(layout.frame_samples) +
                          "-sample frame");
  }
  layout.num_frames =
      1 + (audio.samples.size() - layout.frame_samples) / layout.hop_samples;
  return layout;
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

void Fft(std::span<std::complex<double>> data) {
  const std::size_t n = data.size();
  if (n == 0 || !std::has_single_bit(n)) {
    throw ValidationError("FFT size must be a power of two");
  }
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    for (std::size_t k = 0; k < half; ++k) {
      const std::complex<double> w = std::polar(
          1.0, -2.0 * std::numbers::pi * static_cast<double>(k) /
                   static_cast<double>(len));
      for (std::size_t start = 0; start < n; start += len) {
        const auto u = data[start + k];
        const auto v = data[start + k + half] * w;
        data[start + k] = u + v;
        data[start + k + half] = u - v;
      }
    }
  }
}

std::vector<double> HannWindow(std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (n < 2) return w;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi *
                                static_cast<double>(i) /
                                static_cast<double>(n - 1));
  }
  return w;
}

PowerSpectrogram ComputePowerSpectrogram(const AudioBuffer& audio) {
  PowerSpectrogram spec;
  spec.layout = FrameLayoutFor(audio);
  spec.sample_rate = audio.sample_rate;
  const auto& layout = spec.layout;
  const auto window = HannWindow(layout.frame_samples);
  const std::size_t bins = layout.num_bins();
  spec.power.resize(layout.num_frames * bins);

  std::vector<std::complex<double>> buf(layout.fft_size);
  for (std::size_t t = 0; t < layout.num_frames; ++t) {
    const double* frame = audio.samples.data() + t * layout.hop_samples;
    std::fill(buf.begin(), buf.end(), std::complex<double>{});
    for (std::size_t i = 0; i < layout.frame_samples; ++i) {
      buf[i] = frame[i] * window[i];
    }
    Fft(buf);
    double* row = spec.power.data() + t * bins;
    for (std::size_t k = 0; k < bins; ++k) row[k] = std::norm(buf[k]);
  }
  return spec;
}

MelFilterbank::MelFilterbank(int sample_rate, std::size_t fft_size,
                             std::size_t num_mels)
    : num_bins_(fft_size / 2 + 1) {
  const double max_mel = HzToMel(sample_rate / 2.0);
  std::vector<double> edges(num_mels + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = MelToHz(max_mel * static_cast<double>(i) /
                       static_cast<double>(num_mels + 1));
  }
  centers_hz_.assign(edges.begin() + 1, edges.end() - 1);
  weights_.assign(num_mels * num_bins_, 0.0);
  for (std::size_t m = 0; m < num_mels; ++m) {
    const double lo = edges[m], center = edges[m + 1], hi = edges[m + 2];
    for (std::size_t k = 0; k < num_bins_; ++k) {
      const double f = static_cast<double>(k) * sample_rate /
                       static_cast<double>(fft_size);
      const double rise = (f - lo) / (center - lo);
      const double fall = (hi - f) / (hi - center);
      weights_[m * num_bins_ + k] = std::max(0.0, std::min(rise, fall));
    }
  }
}

void MelFilterbank::Apply(std::span<const double> power,
                          std::span<double> out) const {
  for (std::size_t m = 0; m < num_mels(); ++m) {
    const double* w = weights_.data() + m * num_bins_;
    double acc = 0.0;
    for (std::size_t k = 0; k < num_bins_; ++k) acc += w[k] * power[k];
    out[m] = acc;
  }
}

MelSpectrogram ComputeMelSpectrogram(const AudioBuffer& audio) {
  const PowerSpectrogram power = ComputePowerSpectrogram(audio);
  const MelFilterbank bank(audio.sample_rate, power.layout.fft_size);

  MelSpectrogram mel;
  mel.num_frames = power.layout.num_frames;
  mel.num_mels = bank.num_mels();
  mel.sample_rate = audio.sample_rate;
  mel.log_energies.resize(mel.num_frames * mel.num_mels);
  for (std::size_t t = 0; t < mel.num_frames; ++t) {
    std::span<double> row(mel.log_energies.data() + t * mel.num_mels,
                          mel.num_mels);
    bank.Apply(power.frame(t), row);
    for (double& e : row) e = std::log(e + kLogFloor);
  }
  return mel;
}

}  // namespace advtrace
