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

#include "advtrace/embedding_store.h"

#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>
#include <unordered_set>

#include "advtrace/error.h"

namespace advtrace {

std::string_view BranchName(Branch branch) {
  switch (branch) {
    case Branch::kStructural:
      return "structural";
    case Branch::kArtifact:
      return "artifact";
    case Branch::kFused:
      return "fused";
  }
  return "unknown";
}

namespace {

void CheckConsistent(std::span<const Embedding> records) {
  const Branch branch = records.front().branch;
  const std::size_t dim = records.front().vector.size();
  if (dim == 0) throw FormatError("embedding dimension must be >= 1");
  if (dim > std::numeric_limits<std::uint32_t>::max()) {
    throw FormatError("embedding dimension does not fit in 32 bits");
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& rec : records) {
    if (rec.branch != branch) {
      throw FormatError("mixed branches in one store ('" + rec.utt_id + "')");
    }
    if (rec.vector.size() != dim) {
      throw FormatError("mixed dimensions in one store: '" + rec.utt_id +
                        "' has " + std::to_string(rec.vector.size()) +
                        ", expected " + std::to_string(dim));
    }
    if (rec.utt_id.empty()) throw ValidationError("empty utt_id in store");
    if (!seen.insert(rec.utt_id).second) {
      throw ValidationError("duplicate utt_id '" + rec.utt_id + "'");
    }
    for (double v : rec.vector) {
      if (!std::isfinite(v)) {
        throw ValidationError("non-finite entry in embedding '" + rec.utt_id +
                              "'");
      }
    }
  }
}

template <typename T>
void PutLe(std::vector<std::uint8_t>& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
  }
}

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const { return offset_; }
  std::size_t remaining() const { return bytes_.size() - offset_; }

  void Need(std::size_t n, const char* what) const {
    if (remaining() < n) {
      throw FormatError("truncated store at byte offset " +
                        std::to_string(offset_) + ": need " +
                        std::to_string(n) + " bytes for " + what + ", have " +
                        std::to_string(remaining()));
    }
  }

  template <typename T>
  T GetLe(const char* what) {
    Need(sizeof(T), what);
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      value |= static_cast<T>(static_cast<T>(bytes_[offset_ + i]) << (8 * i));
    }
    offset_ += sizeof(T);
    return value;
  }

  std::string GetString(std::size_t n, const char* what) {
    Need(n, what);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + offset_), n);
    offset_ += n;
    return s;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t offset_ = 0;
};

}  // namespace

EmbeddingStore::EmbeddingStore(std::vector<Embedding> records)
    : records_(std::move(records)) {
  if (records_.empty()) return;
  CheckConsistent(records_);
  branch_ = records_.front().branch;
  dim_ = records_.front().vector.size();
  index_.reserve(records_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    index_.emplace(records_[i].utt_id, i);
  }
}

const Embedding* EmbeddingStore::Find(std::string_view utt_id) const {
  auto it = index_.find(std::string(utt_id));
  return it == index_.end() ? nullptr : &records_[it->second];
}

std::vector<std::uint8_t> EncodeStore(std::span<const Embedding> records) {
  if (records.empty()) throw ValidationError("cannot write an empty store");
  CheckConsistent(records);
  const std::size_t dim = records.front().vector.size();

  std::vector<std::uint8_t> out;
  out.insert(out.end(), std::begin(kStoreMagic), std::end(kStoreMagic));
  PutLe<std::uint16_t>(out, kStoreVersion);
  PutLe<std::uint8_t>(out, static_cast<std::uint8_t>(records.front().branch));
  PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(dim));
  PutLe<std::uint64_t>(out, records.size());

  for (const auto& rec : records) {
    if (rec.utt_id.size() > std::numeric_limits<std::uint16_t>::max()) {
      throw ValidationError("utt_id longer than 65535 bytes");
    }
    PutLe<std::uint16_t>(out, static_cast<std::uint16_t>(rec.utt_id.size()));
    out.insert(out.end(), rec.utt_id.begin(), rec.utt_id.end());
    for (double v : rec.vector) {
      const auto f = static_cast<float>(v);
      if (!std::isfinite(f)) {
        throw ValidationError("entry of '" + rec.utt_id +
                              "' overflows 32-bit float");
      }
      PutLe<std::uint32_t>(out, std::bit_cast<std::uint32_t>(f));
    }
  }
  return out;
}

std::size_t WriteStore(std::span<const Embedding> records, std::ostream& out) {
  const auto bytes = EncodeStore(records);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing embedding store");
  return bytes.size();
}

std::vector<Embedding> DecodeStore(std::span<const std::uint8_t> bytes) {
  ByteReader reader(bytes);
  const std::string magic = reader.GetString(4, "magic");
  if (magic != std::string_view(kStoreMagic, 4)) {
    throw FormatError("bad magic: not an ADVE store");
  }
  const auto version = reader.GetLe<std::uint16_t>("version");
  if (version != kStoreVersion) {
    throw FormatError("unsupported ADVE version " + std::to_string(version));
  }
  const auto tag = reader.GetLe<std::uint8_t>("branch tag");
  if (tag > static_cast<std::uint8_t>(Branch::kFused)) {
    throw FormatError("unknown branch tag " + std::to_string(tag));
  }
  const auto dim = reader.GetLe<std::uint32_t>("dim");
  if (dim == 0) throw FormatError("header dim must be >= 1");
  const auto count = reader.GetLe<std::uint64_t>("count");

  const std::size_t min_record = 2 + 1 + std::size_t{dim} * 4;
  std::vector<Embedding> records;
  records.reserve(static_cast<std::size_t>(
      std::min<std::uint64_t>(count, reader.remaining() / min_record + 1)));
  std::unordered_set<std::string> seen;
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::size_t record_offset = reader.offset();
    const auto len = reader.GetLe<std::uint16_t>("utt_id length");
    if (len == 0) {
      throw FormatError("empty utt_id at byte offset " +
                        std::to_string(record_offset));
    }
    Embedding rec;
    rec.branch = static_cast<Branch>(tag);
    rec.utt_id = reader.GetString(len, "utt_id");
    reader.Need(std::size_t{dim} * 4, "vector");
    rec.vector.resize(dim);
    for (auto& v : rec.vector) {
      const auto f = std::bit_cast<float>(reader.GetLe<std::uint32_t>("float"));
      if (!std::isfinite(f)) {
        throw FormatError("non-finite value in '" + rec.utt_id +
                          "' at byte offset " +
                          std::to_string(reader.offset() - 4));
      }
      v = f;
    }
    if (!seen.insert(rec.utt_id).second) {
      throw FormatError("duplicate utt_id '" + rec.utt_id +
                        "' at byte offset " + std::to_string(record_offset));
    }
    records.push_back(std::move(rec));
  }
  if (reader.remaining() != 0) {
    throw FormatError("trailing bytes after " + std::to_string(count) +
                      " records at byte offset " +
                      std::to_string(reader.offset()) +
                      " (header dim or count does not match the data)");
  }
  return records;
}

std::vector<Embedding> ReadStore(std::istream& in) {
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("failed reading embedding store");
  return DecodeStore(bytes);
}

std::size_t WriteStoreFile(std::span<const Embedding> records,
                           const std::filesystem::path& path) {
  const auto bytes = EncodeStore(records);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
  return bytes.size();
}

EmbeddingStore ReadStoreFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open embedding store '" + path.string() + "'");
  try {
    return EmbeddingStore(ReadStore(in));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace advtrace
