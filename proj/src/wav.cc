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

#include "advtrace/wav.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "advtrace/error.h"

namespace advtrace {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t U32(const std::uint8_t* p) {
  return std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 |
         std::uint32_t{p[2]} << 16 | std::uint32_t{p[3]} << 24;
}
std::uint16_t U16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

void Put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}
void Put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}

struct FormatChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
};

}  // namespace

AudioBuffer ReadWav(std::istream& in) {
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw FormatError("not a RIFF/WAVE file");
  }

  std::optional<FormatChunk> fmt;
  const std::uint8_t* data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::size_t size = U32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || size > avail) throw FormatError("bad fmt chunk");
      FormatChunk f;
      f.format = U16(chunk + 8);
      f.channels = U16(chunk + 10);
      f.sample_rate = U32(chunk + 12);
      f.bits = U16(chunk + 22);
      if (f.format == kFormatExtensible) {
        if (size < 40) throw FormatError("truncated WAVE_FORMAT_EXTENSIBLE");
        f.format = U16(chunk + 8 + 24);
      }
      fmt = f;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      // Streams written without a final size commonly report 0 or 0xFFFFFFFF.
      data_size = std::min(size, avail);
      if (size == 0) data_size = avail;
      break;
    }
    pos = body + size + (size & 1);
  }
  if (!fmt) throw FormatError("WAV file has no fmt chunk");
  if (data == nullptr) throw FormatError("WAV file has no data chunk");
  if (fmt->channels == 0) throw FormatError("WAV file declares 0 channels");
  if (fmt->sample_rate == 0 || fmt->sample_rate > 1'000'000) {
    throw FormatError("WAV sample rate out of range");
  }

  const bool pcm16 = fmt->format == kFormatPcm && fmt->bits == 16;
  const bool float32 = fmt->format == kFormatFloat && fmt->bits == 32;
  if (!pcm16 && !float32) {
    throw FormatError("unsupported WAV encoding (format " +
                      std::to_string(fmt->format) + ", " +
                      std::to_string(fmt->bits) +
                      " bits); only 16-bit PCM and 32-bit float are accepted");
  }
  const std::size_t bytes_per_sample = fmt->bits / 8;
  const std::size_t frame_bytes = bytes_per_sample * fmt->channels;
  const std::size_t frames = data_size / frame_bytes;

  AudioBuffer audio;
  audio.sample_rate = static_cast<int>(fmt->sample_rate);
  audio.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < fmt->channels; ++c) {
      const std::uint8_t* p = data + i * frame_bytes + c * bytes_per_sample;
      if (pcm16) {
        acc += static_cast<std::int16_t>(U16(p)) / 32768.0;
      } else {
        acc += std::bit_cast<float>(U32(p));
      }
    }
    audio.samples[i] = acc / fmt->channels;
  }
  return audio;
}

AudioBuffer ReadWavFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open audio file '" + path.string() + "'");
  try {
    return ReadWav(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void WriteWav(const AudioBuffer& audio, WavEncoding encoding,
              std::ostream& out) {
  const std::uint16_t bits = encoding == WavEncoding::kPcm16 ? 16 : 32;
  const std::uint16_t format =
      encoding == WavEncoding::kPcm16 ? kFormatPcm : kFormatFloat;
  const auto data_bytes =
      static_cast<std::uint32_t>(audio.samples.size() * (bits / 8));
  const auto rate = static_cast<std::uint32_t>(audio.sample_rate);

  std::string buf;
  buf.reserve(44 + data_bytes);
  buf += "RIFF";
  Put32(buf, 36 + data_bytes);
  buf += "WAVEfmt ";
  Put32(buf, 16);
  Put16(buf, format);
  Put16(buf, 1);
  Put32(buf, rate);
  Put32(buf, rate * (bits / 8));
  Put16(buf, static_cast<std::uint16_t>(bits / 8));
  Put16(buf, bits);
  buf += "data";
  Put32(buf, data_bytes);
  for (double s : audio.samples) {
    if (encoding == WavEncoding::kPcm16) {
      const double scaled = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
      Put16(buf, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
    } else {
      Put32(buf, std::bit_cast<std::uint32_t>(static_cast<float>(s)));
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("failed writing WAV data");
}

void WriteWavFile(const AudioBuffer& audio, WavEncoding encoding,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  WriteWav(audio, encoding, out);
}

}  // namespace advtrace
