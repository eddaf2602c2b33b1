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

#ifndef ASDPOOL_SYNTHETIC_H_
#define ASDPOOL_SYNTHETIC_H_

#include <cstdint>
#include <filesystem>
#include <string_view>

namespace asdpool {

enum class AnomalyMode { kTransientSpike, kGlobalShift, kDrift };

std::string_view ToString(AnomalyMode mode);
AnomalyMode ParseAnomalyMode(std::string_view s);

// Parameters of a seeded synthetic dataset.
//
// Normal clips: x_t = mu + e_t with e_t ~ N(0, I), mu ~ N(0, I) drawn once per
// dataset. Anomalous clips start as normal clips and are then modified:
//   transient_spike: +strength on every entry of `spike_frames` random frames
//   global_shift:    +strength / sqrt(D) on every entry
//   drift:           +strength * t / T on every entry of frame t (t = 1..T)
struct SyntheticSpec {
  std::uint64_t seed = 7;
  std::size_t n_train = 64;
  std::size_t n_test_normal = 32;
  std::size_t n_test_anomalous = 32;
  std::size_t frames = 32;
  std::size_t dim = 8;
  AnomalyMode anomaly_mode = AnomalyMode::kTransientSpike;
  double anomaly_strength = 6.0;
  std::size_t spike_frames = 2;
};

// Throws ValidationError on out-of-range fields.
void ValidateSyntheticSpec(const SyntheticSpec& spec);

// Writes train/, test/ and manifest.jsonl under `destination` (created if
// needed) and returns the manifest path. Output is a pure function of `spec`.
std::filesystem::path GenerateSynthetic(
    const SyntheticSpec& spec, const std::filesystem::path& destination);

}  // namespace asdpool

#endif  // ASDPOOL_SYNTHETIC_H_
