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

#ifndef ADVTRACE_TRIALS_H_
#define ADVTRACE_TRIALS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "advtrace/types.h"

namespace advtrace {

enum class TrialLabel { kSame, kDifferent };

std::string_view TrialLabelName(TrialLabel label);
// Exact, case-sensitive: "same" or "different".
std::optional<TrialLabel> ParseTrialLabel(std::string_view name);

struct TrialPair {
  std::string trial_id;
  std::vector<std::string> enroll_ids;
  std::vector<std::string> verify_ids;
  TrialLabel label = TrialLabel::kSame;

  friend bool operator==(const TrialPair&, const TrialPair&) = default;
};

// Structural invariants only: non-empty sides, no duplicates, disjoint sides.
// Throws ValidationError.
void ValidateTrial(const TrialPair& trial);

// Recomputes every label from the manifest's utt_id -> method mapping and
// checks side purity. Throws ValidationError on the first mismatch.
void CheckTrialLabels(std::span<const TrialPair> trials,
                      std::span<const UtteranceRecord> manifest);

struct ExcludedMethod {
  std::string label;
  std::size_t available = 0;
};

struct TrialList {
  std::vector<TrialPair> trials;
  std::vector<ExcludedMethod> excluded;
};

/// Samples `per_class` same-method and `per_class` different-method trials.
///
/// Methods with fewer than e_count + v_count utterances are excluded. A same
/// trial picks a method uniformly and draws e_count + v_count distinct
/// utterances from it; a different trial picks an ordered pair of distinct
/// methods uniformly, enrollment from the first and verification from the
/// second. Trials are drawn independently, so a pair may repeat across
/// trials but never within one. Same trials come first; ids run t000000,
/// t000001, ... The result depends only on (records, parameters, seed).
TrialList GenerateTrials(std::span<const UtteranceRecord> records,
                         std::size_t e_count, std::size_t v_count,
                         std::size_t per_class, std::uint64_t seed);

// For every method, min(per_type, available) records drawn without
// replacement. Selected records keep their manifest order.
std::vector<UtteranceRecord> BalanceSubset(
    std::span<const UtteranceRecord> records, std::size_t per_type,
    std::uint64_t seed);

void WriteTrials(std::span<const TrialPair> trials, std::ostream& out);
std::vector<TrialPair> ReadTrials(std::istream& in);
void WriteTrialsFile(std::span<const TrialPair> trials,
                     const std::filesystem::path& path);
std::vector<TrialPair> ReadTrialsFile(const std::filesystem::path& path);

}  // namespace advtrace

#endif  // ADVTRACE_TRIALS_H_
