// Copyright 2026 The asdpool Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ASDPOOL_EMBEDDING_H_
#define ASDPOOL_EMBEDDING_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace asdpool {

// A T x D matrix of frame-level embeddings for one clip, stored frame-major.
// Values are held in double precision; the on-disk container is float32.
class EmbeddingSequence {
 public:
  EmbeddingSequence() = default;

  // Zero-filled sequence. Throws ValidationError unless frames, dim >= 1.
  EmbeddingSequence(std::size_t frames, std::size_t dim);

  // Takes ownership of `values` (row-major, frames * dim entries).
  EmbeddingSequence(std::size_t frames, std::size_t dim,
                    std::vector<double> values);

  // Builds from nested rows; every row must have the same length.
  static EmbeddingSequence FromRows(
      const std::vector<std::vector<double>>& rows);

  std::size_t NumFrames() const { return frames_; }
  std::size_t Dim() const { return dim_; }

  std::span<const double> Frame(std::size_t t) const {
    return {values_.data() + t * dim_, dim_};
  }
  std::span<double> Frame(std::size_t t) {
    return {values_.data() + t * dim_, dim_};
  }

  double operator()(std::size_t t, std::size_t j) const {
    return values_[t * dim_ + j];
  }
  double& operator()(std::size_t t, std::size_t j) {
    return values_[t * dim_ + j];
  }

  std::span<const double> Values() const { return values_; }

  // Throws ValidationError("non-finite entry ...") on NaN or Inf.
  void CheckFinite() const;

  bool operator==(const EmbeddingSequence&) const = default;

 private:
  std::size_t frames_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> values_;
};

// Container layout (little-endian):
//   0..3   magic "ASDE"
//   4..5   version (u16) = 1
//   6..7   reserved (u16) = 0
//   8..11  T (u32)
//   12..15 D (u32)
//   16..   T*D float32, frame-major
inline constexpr char kContainerMagic[4] = {'A', 'S', 'D', 'E'};
inline constexpr std::uint16_t kContainerVersion = 1;
inline constexpr std::size_t kContainerHeaderBytes = 16;

// Serializes to the container byte layout. Entries are rounded to float32;
// anything that is non-finite after rounding is rejected.
std::vector<std::uint8_t> EncodeEmbedding(const EmbeddingSequence& seq);

// Parses a container image. Errors: bad magic, unsupported version,
// truncated payload, trailing bytes, non-finite entry.
EmbeddingSequence DecodeEmbedding(std::span<const std::uint8_t> bytes);

void WriteEmbeddingFile(const EmbeddingSequence& seq,
                        const std::filesystem::path& destination);
EmbeddingSequence ReadEmbeddingFile(const std::filesystem::path& source);

}  // namespace asdpool

#endif  // ASDPOOL_EMBEDDING_H_
