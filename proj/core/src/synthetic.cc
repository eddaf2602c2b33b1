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

#include "asdpool/synthetic.h"

#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include "asdpool/embedding.h"
#include "asdpool/error.h"
#include "asdpool/manifest.h"
#include "random.h"

namespace asdpool {

namespace {

constexpr std::array<std::string_view, 3> kModeNames = {
    "transient_spike", "global_shift", "drift"};

std::string ClipName(std::string_view stem, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "_%04zu.asde", i);
  return std::string(stem) + buf;
}

EmbeddingSequence DrawNormal(const SyntheticSpec& spec,
                             const std::vector<double>& mu,
                             internal::Rng& rng) {
  EmbeddingSequence seq(spec.frames, spec.dim);
  for (std::size_t t = 0; t < spec.frames; ++t)
    for (std::size_t j = 0; j < spec.dim; ++j) seq(t, j) = mu[j] + rng.Normal();
  return seq;
}

void Corrupt(const SyntheticSpec& spec, EmbeddingSequence& seq,
             internal::Rng& rng) {
  // Every mode perturbs a frame by a vector of Euclidean norm at most s.
  const double s =
      spec.anomaly_strength / std::sqrt(static_cast<double>(spec.dim));
  switch (spec.anomaly_mode) {
    case AnomalyMode::kTransientSpike: {
      // Partial Fisher-Yates picks spike_frames distinct frames.
      std::vector<std::size_t> order(spec.frames);
      std::iota(order.begin(), order.end(), 0);
      for (std::size_t k = 0; k < spec.spike_frames; ++k) {
        const std::size_t pick = k + rng.Below(spec.frames - k);
        std::swap(order[k], order[pick]);
        for (double& v : seq.Frame(order[k])) v += s;
      }
      break;
    }
    case AnomalyMode::kGlobalShift: {
      for (std::size_t t = 0; t < spec.frames; ++t)
        for (double& v : seq.Frame(t)) v += s;
      break;
    }
    case AnomalyMode::kDrift: {
      for (std::size_t t = 0; t < spec.frames; ++t) {
        const double ramp = s * static_cast<double>(t + 1) /
                            static_cast<double>(spec.frames);
        for (double& v : seq.Frame(t)) v += ramp;
      }
      break;
    }
  }
}

}  // namespace

std::string_view ToString(AnomalyMode mode) {
  return kModeNames[static_cast<int>(mode)];
}

AnomalyMode ParseAnomalyMode(std::string_view s) {
  for (std::size_t i = 0; i < kModeNames.size(); ++i)
    if (kModeNames[i] == s) return static_cast<AnomalyMode>(i);
  throw ValidationError("unknown anomaly mode '" + std::string(s) +
                        "' (expected transient_spike, global_shift or drift)");
}

void ValidateSyntheticSpec(const SyntheticSpec& spec) {
  if (spec.frames < 1 || spec.dim < 1)
    throw ValidationError("synthetic spec needs T >= 1 and D >= 1");
  if (!(spec.anomaly_strength >= 0.0) || !std::isfinite(spec.anomaly_strength))
    throw ValidationError("anomaly_strength must be a finite value >= 0");
  if (spec.anomaly_mode == AnomalyMode::kTransientSpike &&
      spec.spike_frames > spec.frames)
    throw ValidationError("spike_frames exceeds frame count");
}

std::filesystem::path GenerateSynthetic(
    const SyntheticSpec& spec, const std::filesystem::path& destination) {
  ValidateSyntheticSpec(spec);
  std::error_code ec;
  std::filesystem::create_directories(destination / "train", ec);
  if (!ec) std::filesystem::create_directories(destination / "test", ec);
  if (ec)
    throw IoError("cannot create output directory " + destination.string() +
                  ": " + ec.message());

  internal::Rng rng(spec.seed);
  std::vector<double> mu(spec.dim);
  for (double& m : mu) m = rng.Normal();

  std::vector<ClipRecord> records;
  auto emit = [&](const EmbeddingSequence& seq, std::string rel, Split split,
                  Label label) {
    WriteEmbeddingFile(seq, destination / rel);
    records.push_back({.path = std::move(rel),
                       .dataset = "synthetic",
                       .subset = Subset::kDev,
                       .machine_type = "synth",
                       .section = "00",
                       .domain = Domain::kSource,
                       .split = split,
                       .label = label});
  };

  for (std::size_t i = 0; i < spec.n_train; ++i)
    emit(DrawNormal(spec, mu, rng), "train/" + ClipName("normal", i),
         Split::kTrain, Label::kNormal);
  for (std::size_t i = 0; i < spec.n_test_normal; ++i)
    emit(DrawNormal(spec, mu, rng), "test/" + ClipName("normal", i),
         Split::kTest, Label::kNormal);
  for (std::size_t i = 0; i < spec.n_test_anomalous; ++i) {
    auto seq = DrawNormal(spec, mu, rng);
    Corrupt(spec, seq, rng);
    emit(seq, "test/" + ClipName("anomaly", i), Split::kTest, Label::kAnomaly);
  }

  const auto manifest_path = destination / "manifest.jsonl";
  WriteManifest(records, manifest_path);
  return manifest_path;
}

}  // namespace asdpool
