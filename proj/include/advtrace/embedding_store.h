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

#ifndef ADVTRACE_EMBEDDING_STORE_H_
#define ADVTRACE_EMBEDDING_STORE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "advtrace/types.h"

namespace advtrace {

// "ADVE" v1 layout, all integers little-endian:
//
//   magic "ADVE" | u16 version=1 | u8 branch | u32 dim | u64 count
//   count x ( u16 id_len | id bytes | dim x f32 )
inline constexpr char kStoreMagic[4] = {'A', 'D', 'V', 'E'};
inline constexpr std::uint16_t kStoreVersion = 1;
inline constexpr std::size_t kStoreHeaderBytes = 19;

/// An in-memory embedding store: one branch, one dimension, unique ids.
///
/// Construction validates every record, so holders of an EmbeddingStore can
/// rely on the invariants without re-checking.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;
  explicit EmbeddingStore(std::vector<Embedding> records);

  Branch branch() const { return branch_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  const std::vector<Embedding>& records() const { return records_; }
  const Embedding& operator[](std::size_t i) const { return records_[i]; }

  // nullptr when the id is absent.
  const Embedding* Find(std::string_view utt_id) const;

 private:
  Branch branch_ = Branch::kFused;
  std::size_t dim_ = 0;
  std::vector<Embedding> records_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Validates `records` and appends the ADVE v1 encoding to `out`. Returns the
// number of bytes written.
std::size_t WriteStore(std::span<const Embedding> records, std::ostream& out);

std::vector<std::uint8_t> EncodeStore(std::span<const Embedding> records);

std::vector<Embedding> ReadStore(std::istream& in);

std::vector<Embedding> DecodeStore(std::span<const std::uint8_t> bytes);

std::size_t WriteStoreFile(std::span<const Embedding> records,
                           const std::filesystem::path& path);
EmbeddingStore ReadStoreFile(const std::filesystem::path& path);

}  // namespace advtrace

#endif  // ADVTRACE_EMBEDDING_STORE_H_
