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

#ifndef ADVTRACE_WAV_H_
#define ADVTRACE_WAV_H_

#include <filesystem>
#include <iosfwd>

#include "advtrace/dsp.h"

namespace advtrace {

// Only 16-bit integer PCM and 32-bit IEEE float are accepted (including the
// WAVE_FORMAT_EXTENSIBLE wrapper). Multi-channel input is averaged to mono.
enum class WavEncoding { kPcm16, kFloat32 };

AudioBuffer ReadWav(std::istream& in);
AudioBuffer ReadWavFile(const std::filesystem::path& path);

void WriteWav(const AudioBuffer& audio, WavEncoding encoding,
              std::ostream& out);
void WriteWavFile(const AudioBuffer& audio, WavEncoding encoding,
                  const std::filesystem::path& path);

}  // namespace advtrace

#endif  // ADVTRACE_WAV_H_
