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

#include "advtrace/manifest.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "advtrace/error.h"
#include "json.hpp"

namespace advtrace {

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kValidation:
      return "validation";
    case Split::kTest:
      return "test";
  }
  return "unknown";
}

std::optional<Split> ParseSplit(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "validation") return Split::kValidation;
  if (name == "test") return Split::kTest;
  return std::nullopt;
}

namespace {

using nlohmann::json;

std::string LineError(std::size_t line_no, const std::string& msg) {
  return "manifest line " + std::to_string(line_no) + ": " + msg;
}

const json& Require(const json& obj, const char* key, std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw FormatError(LineError(line_no, std::string("missing key '") + key +
                                             "'"));
  }
  return *it;
}

std::string RequireString(const json& obj, const char* key,
                          std::size_t line_no) {
  const json& v = Require(obj, key, line_no);
  if (!v.is_string()) {
    throw FormatError(
        LineError(line_no, std::string("'") + key + "' must be a string"));
  }
  return v.get<std::string>();
}

UtteranceRecord ParseRecord(const std::string& line, std::size_t line_no) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw FormatError(LineError(line_no, std::string("malformed JSON: ") +
                                             e.what()));
  }
  if (!obj.is_object()) {
    throw FormatError(LineError(line_no, "expected a JSON object"));
  }

  UtteranceRecord rec;
  rec.utt_id = RequireString(obj, "utt_id", line_no);
  rec.label.name = RequireString(obj, "label", line_no);
  const json& bonafide = Require(obj, "is_bonafide", line_no);
  if (!bonafide.is_boolean()) {
    throw FormatError(LineError(line_no, "'is_bonafide' must be a boolean"));
  }
  rec.label.is_bonafide = bonafide.get<bool>();
  const std::string split = RequireString(obj, "split", line_no);
  auto parsed = ParseSplit(split);
  if (!parsed) {
    throw ValidationError(LineError(line_no, "unknown split '" + split + "'"));
  }
  rec.split = *parsed;
  if (auto it = obj.find("source_path"); it != obj.end() && !it->is_null()) {
    if (!it->is_string()) {
      throw FormatError(LineError(line_no, "'source_path' must be a string"));
    }
    rec.source_path = it->get<std::string>();
  }
  return rec;
}

// Per-record checks; returns an empty string when the record is valid.
std::string RecordProblem(const UtteranceRecord& rec) {
  if (rec.utt_id.empty()) return "empty utt_id";
  if (rec.label.name.empty()) return "empty label";
  if (rec.label.name.find_first_of("\n\t") != std::string::npos) {
    return "label contains a tab or newline";
  }
  return {};
}

class CorpusChecker {
 public:
  // Returns an error message or an empty string.
  std::string Add(const UtteranceRecord& rec) {
    if (auto problem = RecordProblem(rec); !problem.empty()) return problem;
    if (!ids_.insert(rec.utt_id).second) {
      return "duplicate utt_id '" + rec.utt_id + "'";
    }
    auto [it, inserted] =
        bonafide_by_label_.emplace(rec.label.name, rec.label.is_bonafide);
    if (!inserted && it->second != rec.label.is_bonafide) {
      return "label '" + rec.label.name +
             "' has inconsistent is_bonafide flags";
    }
    if (rec.label.is_bonafide) {
      if (!bonafide_label_.empty() && bonafide_label_ != rec.label.name) {
        return "more than one bonafide label ('" + bonafide_label_ +
               "' and '" + rec.label.name + "')";
      }
      bonafide_label_ = rec.label.name;
    }
    return {};
  }

 private:
  std::unordered_set<std::string> ids_;
  std::unordered_map<std::string, bool> bonafide_by_label_;
  std::string bonafide_label_;
};

}  // namespace

void ValidateManifest(std::span<const UtteranceRecord> records) {
  CorpusChecker checker;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (auto err = checker.Add(records[i]); !err.empty()) {
      throw ValidationError("manifest record " + std::to_string(i + 1) +
                            ": " + err);
    }
  }
}

std::vector<UtteranceRecord> ReadManifest(std::istream& in) {
  std::vector<UtteranceRecord> records;
  CorpusChecker checker;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    UtteranceRecord rec = ParseRecord(line, line_no);
    if (auto err = checker.Add(rec); !err.empty()) {
      throw ValidationError(LineError(line_no, err));
    }
    records.push_back(std::move(rec));
  }
  if (in.bad()) throw IoError("failed reading manifest");
  return records;
}

void WriteManifest(std::span<const UtteranceRecord> records,
                   std::ostream& out) {
  ValidateManifest(records);
  for (const auto& rec : records) {
    nlohmann::ordered_json obj;
    obj["utt_id"] = rec.utt_id;
    obj["label"] = rec.label.name;
    obj["is_bonafide"] = rec.label.is_bonafide;
    obj["split"] = SplitName(rec.split);
    if (rec.source_path) obj["source_path"] = *rec.source_path;
    out << obj.dump() << '\n';
  }
  if (!out) throw IoError("failed writing manifest");
}

std::vector<UtteranceRecord> ReadManifestFile(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest '" + path.string() + "'");
  return ReadManifest(in);
}

void WriteManifestFile(std::span<const UtteranceRecord> records,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  WriteManifest(records, out);
}

std::vector<UtteranceRecord> FilterSplit(std::span<const UtteranceRecord> records,
                                         Split split) {
  std::vector<UtteranceRecord> out;
  for (const auto& rec : records) {
    if (rec.split == split) out.push_back(rec);
  }
  return out;
}

}  // namespace advtrace
