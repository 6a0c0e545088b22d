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

#include "advtrace/trials.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "advtrace/error.h"
#include "advtrace/rng.h"
#include "json.hpp"

namespace advtrace {

std::string_view TrialLabelName(TrialLabel label) {
  return label == TrialLabel::kSame ? "same" : "different";
}

std::optional<TrialLabel> ParseTrialLabel(std::string_view name) {
  if (name == "same") return TrialLabel::kSame;
  if (name == "different") return TrialLabel::kDifferent;
  return std::nullopt;
}

void ValidateTrial(const TrialPair& trial) {
  const std::string where = "trial '" + trial.trial_id + "': ";
  if (trial.trial_id.empty()) throw ValidationError("trial with empty id");
  if (trial.enroll_ids.empty() || trial.verify_ids.empty()) {
    throw ValidationError(where + "enroll and verify lists must be non-empty");
  }
  std::unordered_set<std::string_view> enroll;
  for (const auto& id : trial.enroll_ids) {
    if (id.empty()) throw ValidationError(where + "empty utt_id");
    if (!enroll.insert(id).second) {
      throw ValidationError(where + "duplicate enrollment id '" + id + "'");
    }
  }
  std::unordered_set<std::string_view> verify;
  for (const auto& id : trial.verify_ids) {
    if (id.empty()) throw ValidationError(where + "empty utt_id");
    if (!verify.insert(id).second) {
      throw ValidationError(where + "duplicate verification id '" + id + "'");
    }
    if (enroll.contains(id)) {
      throw ValidationError(where + "id '" + id +
                            "' appears on both enrollment and verification "
                            "sides");
    }
  }
}

void CheckTrialLabels(std::span<const TrialPair> trials,
                      std::span<const UtteranceRecord> manifest) {
  std::unordered_map<std::string_view, std::string_view> method_of;
  for (const auto& rec : manifest) method_of.emplace(rec.utt_id, rec.label.name);

  auto side_method = [&](const TrialPair& t,
                         const std::vector<std::string>& ids) {
    std::string_view method;
    for (const auto& id : ids) {
      auto it = method_of.find(id);
      if (it == method_of.end()) {
        throw ValidationError("trial '" + t.trial_id + "': unknown utt_id '" +
                              id + "'");
      }
      if (!method.empty() && method != it->second) {
        throw ValidationError("trial '" + t.trial_id +
                              "': mixed methods on one side");
      }
      method = it->second;
    }
    return method;
  };

  for (const auto& t : trials) {
    const auto enroll = side_method(t, t.enroll_ids);
    const auto verify = side_method(t, t.verify_ids);
    const TrialLabel expected =
        enroll == verify ? TrialLabel::kSame : TrialLabel::kDifferent;
    if (expected != t.label) {
      throw ValidationError("trial '" + t.trial_id + "' is labeled " +
                            std::string(TrialLabelName(t.label)) +
                            " but the manifest says " +
                            std::string(TrialLabelName(expected)));
    }
  }
}

namespace {

// Methods keyed by label name (sorted), members in manifest order.
std::map<std::string, std::vector<std::size_t>> GroupByMethod(
    std::span<const UtteranceRecord> records) {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < records.size(); ++i) {
    groups[records[i].label.name].push_back(i);
  }
  return groups;
}

// Partial Fisher-Yates: the first k entries of `pool` become a uniform
// k-subset in random order. `pool` is left permuted.
void SampleInPlace(std::vector<std::size_t>& pool, std::size_t k, Rng& rng) {
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.UniformBelow(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
}

std::string TrialId(std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "t%06zu", n);
  return buf;
}

}  // namespace

TrialList GenerateTrials(std::span<const UtteranceRecord> records,
                         std::size_t e_count, std::size_t v_count,
                         std::size_t per_class, std::uint64_t seed) {
  if (e_count == 0 || v_count == 0) {
    throw ValidationError("e_count and v_count must be >= 1");
  }
  if (per_class == 0) throw ValidationError("trials_per_class must be >= 1");
  TrialList out;
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> members;
  for (auto& [name, idx] : GroupByMethod(records)) {
    if (idx.size() < e_count + v_count) {
      out.excluded.push_back({name, idx.size()});
    } else {
      names.push_back(name);
      members.push_back(std::move(idx));
    }
  }
  if (names.size() < 2) {
    std::string msg = "need at least 2 methods with >= " +
                      std::to_string(e_count + v_count) +
                      " utterances, found " + std::to_string(names.size());
    for (const auto& ex : out.excluded) {
      msg += "; excluded '" + ex.label + "' (" + std::to_string(ex.available) +
             ")";
    }
    throw ValidationError(msg);
  }

  Rng rng(seed);
  const std::size_t k = names.size();
  auto ids_of = [&](const std::vector<std::size_t>& pool, std::size_t from,
                    std::size_t n) {
    std::vector<std::string> ids;
    ids.reserve(n);
    for (std::size_t i = from; i < from + n; ++i) {
      ids.push_back(records[pool[i]].utt_id);
    }
    return ids;
  };

  out.trials.reserve(2 * per_class);
  for (std::size_t n = 0; n < per_class; ++n) {
    auto& pool = members[rng.UniformBelow(k)];
    SampleInPlace(pool, e_count + v_count, rng);
    out.trials.push_back({TrialId(out.trials.size()), ids_of(pool, 0, e_count),
                          ids_of(pool, e_count, v_count), TrialLabel::kSame});
  }
  for (std::size_t n = 0; n < per_class; ++n) {
    const std::size_t first = rng.UniformBelow(k);
    std::size_t second = rng.UniformBelow(k - 1);
    if (second >= first) ++second;
    SampleInPlace(members[first], e_count, rng);
    SampleInPlace(members[second], v_count, rng);
    out.trials.push_back({TrialId(out.trials.size()),
                          ids_of(members[first], 0, e_count),
                          ids_of(members[second], 0, v_count),
                          TrialLabel::kDifferent});
  }
  return out;
}

std::vector<UtteranceRecord> BalanceSubset(
    std::span<const UtteranceRecord> records, std::size_t per_type,
    std::uint64_t seed) {
  if (records.empty()) throw ValidationError("cannot balance an empty manifest");
  if (per_type == 0) throw ValidationError("per_type must be >= 1");
  Rng rng(seed);
  std::vector<bool> keep(records.size(), false);
  for (auto& [name, idx] : GroupByMethod(records)) {
    const std::size_t take = std::min(per_type, idx.size());
    SampleInPlace(idx, take, rng);
    for (std::size_t i = 0; i < take; ++i) keep[idx[i]] = true;
  }
  std::vector<UtteranceRecord> out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (keep[i]) out.push_back(records[i]);
  }
  return out;
}

void WriteTrials(std::span<const TrialPair> trials, std::ostream& out) {
  for (const auto& t : trials) {
    ValidateTrial(t);
    nlohmann::ordered_json j;
    j["trial_id"] = t.trial_id;
    j["enroll"] = t.enroll_ids;
    j["verify"] = t.verify_ids;
    j["label"] = TrialLabelName(t.label);
    out << j.dump() << '\n';
  }
  if (!out) throw IoError("failed writing trials");
}

namespace {

std::vector<std::string> IdList(const nlohmann::json& j, const char* key,
                                std::size_t line_no) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_array()) {
    throw FormatError("trials line " + std::to_string(line_no) + ": '" + key +
                      "' must be an array of strings");
  }
  std::vector<std::string> ids;
  for (const auto& v : *it) {
    if (!v.is_string()) {
      throw FormatError("trials line " + std::to_string(line_no) + ": '" +
                        key + "' must be an array of strings");
    }
    ids.push_back(v.get<std::string>());
  }
  return ids;
}

}  // namespace

std::vector<TrialPair> ReadTrials(std::istream& in) {
  std::vector<TrialPair> trials;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::string where = "trials line " + std::to_string(line_no) + ": ";
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(where + "malformed JSON: " + e.what());
    }
    if (!j.is_object()) throw FormatError(where + "expected a JSON object");
    if (!j.contains("trial_id") || !j["trial_id"].is_string()) {
      throw FormatError(where + "'trial_id' must be a string");
    }
    if (!j.contains("label") || !j["label"].is_string()) {
      throw FormatError(where + "'label' must be a string");
    }
    TrialPair t;
    t.trial_id = j["trial_id"].get<std::string>();
    const auto label_text = j["label"].get<std::string>();
    const auto label = ParseTrialLabel(label_text);
    if (!label) {
      throw FormatError(where + "label must be \"same\" or \"different\", got \"" +
                        label_text + "\"");
    }
    t.label = *label;
    t.enroll_ids = IdList(j, "enroll", line_no);
    t.verify_ids = IdList(j, "verify", line_no);
    try {
      ValidateTrial(t);
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
    if (!seen.insert(t.trial_id).second) {
      throw ValidationError(where + "duplicate trial_id '" + t.trial_id + "'");
    }
    trials.push_back(std::move(t));
  }
  if (in.bad()) throw IoError("failed reading trials");
  return trials;
}

void WriteTrialsFile(std::span<const TrialPair> trials,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  WriteTrials(trials, out);
}

std::vector<TrialPair> ReadTrialsFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trials file '" + path.string() + "'");
  return ReadTrials(in);
}

}  // namespace advtrace
