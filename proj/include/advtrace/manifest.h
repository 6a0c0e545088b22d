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

#ifndef ADVTRACE_MANIFEST_H_
#define ADVTRACE_MANIFEST_H_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "advtrace/types.h"

namespace advtrace {

// JSON-lines manifest, one object per line:
//   {"utt_id":..., "label":..., "is_bonafide":..., "split":...,
//    "source_path":... (optional)}
// Blank lines are skipped. Errors carry the 1-based line number.
std::vector<UtteranceRecord> ReadManifest(std::istream& in);
void WriteManifest(std::span<const UtteranceRecord> records, std::ostream& out);

std::vector<UtteranceRecord> ReadManifestFile(
    const std::filesystem::path& path);
void WriteManifestFile(std::span<const UtteranceRecord> records,
                       const std::filesystem::path& path);

// Corpus-level checks shared by the reader and the writer: unique utt_ids,
// a label's bonafide flag is consistent, at most one bonafide label.
void ValidateManifest(std::span<const UtteranceRecord> records);

std::vector<UtteranceRecord> FilterSplit(std::span<const UtteranceRecord> records,
                                         Split split);

}  // namespace advtrace

#endif  // ADVTRACE_MANIFEST_H_
