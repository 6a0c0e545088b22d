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

#ifndef ADVTRACE_DSP_H_
#define ADVTRACE_DSP_H_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace advtrace {

struct AudioBuffer {
  std::vector<double> samples;  // mono, nominally in [-1, 1]
  int sample_rate = 16000;
};

inline constexpr double kFrameSeconds = 0.025;
inline constexpr double kHopSeconds = 0.010;
inline constexpr std::size_t kNumMels = 80;
inline constexpr double kLogFloor = 1e-10;
inline constexpr int kMinSampleRate = 8000;

struct FrameLayout {
  std::size_t frame_samples = 0;
  std::size_t hop_samples = 0;
  std::size_t fft_size = 0;    // next power of two >= frame_samples
  std::size_t num_frames = 0;  // 1 + floor((len - frame) / hop)

  std::size_t num_bins() const { return fft_size / 2 + 1; }
};

// Validates `audio` (rate, finiteness, at least one frame) and returns the
// framing used by every spectral feature.
FrameLayout FrameLayoutFor(const AudioBuffer& audio);

double HzToMel(double hz);
double MelToHz(double mel);

// In-place iterative radix-2 DFT; data.size() must be a power of two.
void Fft(std::span<std::complex<double>> data);

// Symmetric Hann window of length n.
std::vector<double> HannWindow(std::size_t n);

// Row-major num_frames x num_bins power spectra |X_k|^2 of Hann-windowed,
// zero-padded frames.
struct PowerSpectrogram {
  FrameLayout layout;
  int sample_rate = 0;
  std::vector<double> power;

  std::span<const double> frame(std::size_t t) const {
    return {power.data() + t * layout.num_bins(), layout.num_bins()};
  }
  double bin_hz(std::size_t k) const {
    return static_cast<double>(k) * sample_rate /
           static_cast<double>(layout.fft_size);
  }
};

PowerSpectrogram ComputePowerSpectrogram(const AudioBuffer& audio);

/// Triangular mel filterbank over [0, sample_rate / 2].
///
/// Band m rises linearly from edge m to its peak (weight 1) at center m + 1
/// and falls back to zero at edge m + 2, with the M + 2 edges spaced evenly
/// on the mel scale. Adjacent triangles sum to one between consecutive
/// centers, so no FFT bin between the first and last center is left
/// uncovered. There is no area normalization.
class MelFilterbank {
 public:
  MelFilterbank(int sample_rate, std::size_t fft_size,
                std::size_t num_mels = kNumMels);

  std::size_t num_mels() const { return centers_hz_.size(); }
  std::size_t num_bins() const { return num_bins_; }
  double center_hz(std::size_t band) const { return centers_hz_[band]; }
  double weight(std::size_t band, std::size_t bin) const {
    return weights_[band * num_bins_ + bin];
  }

  // out[m] = sum_k weight(m, k) * power[k]
  void Apply(std::span<const double> power, std::span<double> out) const;

 private:
  std::size_t num_bins_;
  std::vector<double> centers_hz_;
  std::vector<double> weights_;
};

struct MelSpectrogram {
  std::size_t num_frames = 0;
  std::size_t num_mels = 0;
  int sample_rate = 0;
  std::vector<double> log_energies;  // row-major num_frames x num_mels

  double at(std::size_t t, std::size_t m) const {
    return log_energies[t * num_mels + m];
  }
};

// Log-mel energies log(E + 1e-10) with 25 ms / 10 ms framing and 80 bands.
MelSpectrogram ComputeMelSpectrogram(const AudioBuffer& audio);

}  // namespace advtrace

#endif  // ADVTRACE_DSP_H_
