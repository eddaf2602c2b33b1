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

#include "asdpool/embedding.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "asdpool/error.h"

namespace asdpool {

namespace {

void PutU16(std::vector<std::uint8_t>* out, std::uint16_t v) {
  out->push_back(static_cast<std::uint8_t>(v & 0xff));
  out->push_back(static_cast<std::uint8_t>(v >> 8));
}

void PutU32(std::vector<std::uint8_t>* out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8)
    out->push_back(static_cast<std::uint8_t>((v >> shift) & 0xff));
}

std::uint16_t GetU16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t GetU32(std::span<const std::uint8_t> b, std::size_t at) {
  std::uint32_t v = 0;
  for (int k = 3; k >= 0; --k) v = (v << 8) | b[at + k];
  return v;
}

void CheckShape(std::size_t frames, std::size_t dim) {
  if (frames < 1 || dim < 1)
    throw ValidationError("embedding sequence needs T >= 1 and D >= 1, got " +
                          std::to_string(frames) + "x" + std::to_string(dim));
}

}  // namespace

EmbeddingSequence::EmbeddingSequence(std::size_t frames, std::size_t dim)
    : frames_(frames), dim_(dim) {
  CheckShape(frames, dim);
  values_.assign(frames * dim, 0.0);
}

EmbeddingSequence::EmbeddingSequence(std::size_t frames, std::size_t dim,
                                     std::vector<double> values)
    : frames_(frames), dim_(dim), values_(std::move(values)) {
  CheckShape(frames, dim);
  if (values_.size() != frames * dim)
    throw ValidationError("embedding sequence has " +
                          std::to_string(values_.size()) +
                          " values, expected " +
                          std::to_string(frames * dim));
}

EmbeddingSequence EmbeddingSequence::FromRows(
    const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw ValidationError("embedding sequence has no frames");
  const std::size_t dim = rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * dim);
  for (const auto& row : rows) {
    if (row.size() != dim)
      throw ValidationError("ragged rows in embedding sequence");
    values.insert(values.end(), row.begin(), row.end());
  }
  return EmbeddingSequence(rows.size(), dim, std::move(values));
}

void EmbeddingSequence::CheckFinite() const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]))
      throw ValidationError("non-finite entry at frame " +
                            std::to_string(i / dim_) + ", dim " +
                            std::to_string(i % dim_));
  }
}

std::vector<std::uint8_t> EncodeEmbedding(const EmbeddingSequence& seq) {
  seq.CheckFinite();
  if (seq.NumFrames() > std::numeric_limits<std::uint32_t>::max() ||
      seq.Dim() > std::numeric_limits<std::uint32_t>::max())
    throw ValidationError("embedding shape exceeds u32 header fields");

  std::vector<std::uint8_t> out;
  out.reserve(kContainerHeaderBytes + seq.Values().size() * 4);
  out.insert(out.end(), std::begin(kContainerMagic), std::end(kContainerMagic));
  PutU16(&out, kContainerVersion);
  PutU16(&out, 0);
  PutU32(&out, static_cast<std::uint32_t>(seq.NumFrames()));
  PutU32(&out, static_cast<std::uint32_t>(seq.Dim()));
  std::size_t index = 0;
  for (double v : seq.Values()) {
    const float f = static_cast<float>(v);
    if (!std::isfinite(f))
      throw ValidationError("non-finite entry after float32 rounding at frame " +
                            std::to_string(index / seq.Dim()));
    PutU32(&out, std::bit_cast<std::uint32_t>(f));
    ++index;
  }
  return out;
}

EmbeddingSequence DecodeEmbedding(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kContainerHeaderBytes)
    throw ValidationError("truncated header: " + std::to_string(bytes.size()) +
                          " bytes");
  if (std::memcmp(bytes.data(), kContainerMagic, 4) != 0)
    throw ValidationError("bad magic");
  const std::uint16_t version = GetU16(bytes, 4);
  if (version != kContainerVersion)
    throw ValidationError("unsupported version " + std::to_string(version));
  const std::size_t frames = GetU32(bytes, 8);
  const std::size_t dim = GetU32(bytes, 12);
  if (frames < 1 || dim < 1)
    throw ValidationError("invalid dims " + std::to_string(frames) + "x" +
                          std::to_string(dim));
  const std::size_t payload = bytes.size() - kContainerHeaderBytes;
  const std::size_t expected = frames * dim * 4;
  if (payload < expected)
    throw ValidationError("truncated payload: " + std::to_string(payload) +
                          " bytes, header declares " +
                          std::to_string(expected));
  if (payload > expected)
    throw ValidationError("trailing bytes after payload");

  std::vector<double> values(frames * dim);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const float f = std::bit_cast<float>(
        GetU32(bytes, kContainerHeaderBytes + 4 * i));
    if (!std::isfinite(f))
      throw ValidationError("non-finite entry at frame " +
                            std::to_string(i / dim));
    values[i] = f;
  }
  return EmbeddingSequence(frames, dim, std::move(values));
}

void WriteEmbeddingFile(const EmbeddingSequence& seq,
                        const std::filesystem::path& destination) {
  const auto bytes = EncodeEmbedding(seq);
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + destination.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + destination.string());
}

EmbeddingSequence ReadEmbeddingFile(const std::filesystem::path& source) {
  std::ifstream in(source, std::ios::binary);
  if (!in) throw IoError("cannot open: " + source.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + source.string());
  try {
    return DecodeEmbedding(bytes);
  } catch (const ValidationError& e) {
    throw ValidationError(source.string() + ": " + e.what());
  }
}

}  // namespace asdpool
