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

#ifndef ADVTRACE_TYPES_H_
#define ADVTRACE_TYPES_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace advtrace {

// One exact generation method ("type"), or the bonafide class.
struct MethodLabel {
  std::string name;
  bool is_bonafide = false;

  friend bool operator==(const MethodLabel&, const MethodLabel&) = default;
};

enum class Split { kTrain, kValidation, kTest };

std::string_view SplitName(Split split);
std::optional<Split> ParseSplit(std::string_view name);

struct UtteranceRecord {
  std::string utt_id;
  MethodLabel label;
  Split split = Split::kTest;
  std::optional<std::string> source_path;

  friend bool operator==(const UtteranceRecord&,
                         const UtteranceRecord&) = default;
};

enum class Branch : std::uint8_t {
  kStructural = 0,
  kArtifact = 1,
  kFused = 2,
};

std::string_view BranchName(Branch branch);

// Embeddings are float32 on disk and double in memory.
struct Embedding {
  std::string utt_id;
  Branch branch = Branch::kFused;
  std::vector<double> vector;

  friend bool operator==(const Embedding&, const Embedding&) = default;
};

}  // namespace advtrace

#endif  // ADVTRACE_TYPES_H_
