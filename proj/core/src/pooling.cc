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

#include "asdpool/pooling.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>

#include "asdpool/error.h"
#include "stable_sum.h"

namespace asdpool {

namespace {

constexpr std::array<std::string_view, 6> kStrategyNames = {
    "mean", "max", "gwrp", "gem", "rdp", "rdp_gem"};

// Above this exponent the power mean is evaluated relative to the column
// maximum so that v^p cannot overflow.
constexpr double kScaledPowerThreshold = 16.0;

void CheckR(double r) {
  if (!(r >= 0.0 && r <= 1.0))
    throw ValidationError("GWRP decay r must lie in [0, 1], got " +
                          std::to_string(r));
}

void CheckP(double p) {
  if (!(p > 0.0) || !std::isfinite(p))
    throw ValidationError("GeM exponent p must be > 0, got " +
                          std::to_string(p));
}

void CheckGamma(double gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw ValidationError("RDP exponent gamma must be >= 0, got " +
                          std::to_string(gamma));
}

// sum_t u_t x_tj / sum_t u_t for every column j.
std::vector<double> WeightedMean(const EmbeddingSequence& seq,
                                 std::span<const double> u) {
  const std::size_t frames = seq.NumFrames();
  std::vector<double> scratch(u.begin(), u.end());
  const double total = internal::OrderFreeSum(scratch);
  std::vector<double> out(seq.Dim());
  for (std::size_t j = 0; j < seq.Dim(); ++j) {
    for (std::size_t t = 0; t < frames; ++t) scratch[t] = u[t] * seq(t, j);
    out[j] = internal::OrderFreeSum(scratch) / total;
  }
  return out;
}

// (sum_t u_t max(0, x_tj)^p / sum_t u_t)^(1/p) for every column j.
std::vector<double> WeightedPowerMean(const EmbeddingSequence& seq,
                                      std::span<const double> u, double p) {
  const std::size_t frames = seq.NumFrames();
  std::vector<double> scratch(u.begin(), u.end());
  const double total = internal::OrderFreeSum(scratch);
  std::vector<double> out(seq.Dim());
  for (std::size_t j = 0; j < seq.Dim(); ++j) {
    double scale = 1.0;
    if (p > kScaledPowerThreshold) {
      scale = 0.0;
      for (std::size_t t = 0; t < frames; ++t)
        scale = std::max(scale, seq(t, j));
      if (scale == 0.0) {
        out[j] = 0.0;
        continue;
      }
    }
    for (std::size_t t = 0; t < frames; ++t) {
      const double v = std::max(0.0, seq(t, j)) / scale;
      scratch[t] = u[t] * std::pow(v, p);
    }
    out[j] = scale * std::pow(internal::OrderFreeSum(scratch) / total, 1.0 / p);
  }
  return out;
}

// Unnormalized RDP weights ((1 + d^_t) / 2)^gamma. The 1/2 keeps the largest
// weight at 1 so large gamma cannot overflow; it cancels on normalization.
std::vector<double> RawRdpWeights(const EmbeddingSequence& seq, double gamma,
                                  std::vector<double>* deviation,
                                  std::vector<double>* normalized) {
  CheckGamma(gamma);
  const std::size_t frames = seq.NumFrames();
  const auto mean = MeanPool(seq);
  deviation->assign(frames, 0.0);
  for (std::size_t t = 0; t < frames; ++t) {
    double sq = 0.0;
    for (std::size_t j = 0; j < seq.Dim(); ++j) {
      const double diff = seq(t, j) - mean[j];
      sq += diff * diff;
    }
    (*deviation)[t] = std::sqrt(sq);
  }
  const double max_dev = *std::max_element(deviation->begin(), deviation->end());

  normalized->assign(frames, 0.0);
  std::vector<double> u(frames, 1.0);
  if (max_dev > 0.0) {
    for (std::size_t t = 0; t < frames; ++t) {
      (*normalized)[t] = (*deviation)[t] / max_dev;
      u[t] = std::pow(0.5 * (1.0 + (*normalized)[t]), gamma);
    }
  }
  return u;
}

}  // namespace

std::string_view ToString(PoolingStrategy s) {
  return kStrategyNames[static_cast<int>(s)];
}

PoolingStrategy ParsePoolingStrategy(std::string_view s) {
  for (std::size_t i = 0; i < kStrategyNames.size(); ++i)
    if (kStrategyNames[i] == s) return static_cast<PoolingStrategy>(i);
  throw ValidationError("unknown pooling strategy '" + std::string(s) +
                        "' (expected mean, max, gwrp, gem, rdp or rdp_gem)");
}

void ValidatePoolingSpec(const PoolingSpec& spec) {
  CheckR(spec.r);
  CheckP(spec.p);
  CheckGamma(spec.gamma);
}

void ValidatePreprocessSpec(const PreprocessSpec& spec) {
  if (!spec.enabled) return;
  if (!(spec.low_threshold >= 0.0) || !std::isfinite(spec.low_threshold))
    throw ValidationError("low_threshold must be a finite value >= 0");
  if (!std::isfinite(spec.spike_threshold))
    throw ValidationError("spike_threshold must be finite");
  if (spec.low_threshold > spec.spike_threshold)
    throw ValidationError("low_threshold must not exceed spike_threshold");
}

EmbeddingSequence Preprocess(const EmbeddingSequence& seq,
                             const PreprocessSpec& spec) {
  if (!spec.enabled) return seq;
  ValidatePreprocessSpec(spec);
  EmbeddingSequence out = seq;
  for (std::size_t t = 0; t < out.NumFrames(); ++t) {
    for (double& v : out.Frame(t)) {
      if (std::fabs(v) < spec.low_threshold)
        v = 0.0;
      else if (v > spec.spike_threshold)
        v = spec.spike_threshold + std::tanh(v - spec.spike_threshold);
    }
  }
  return out;
}

std::vector<double> MeanPool(const EmbeddingSequence& seq) {
  const std::size_t frames = seq.NumFrames();
  std::vector<double> column(frames);
  std::vector<double> out(seq.Dim());
  for (std::size_t j = 0; j < seq.Dim(); ++j) {
    for (std::size_t t = 0; t < frames; ++t) column[t] = seq(t, j);
    out[j] = internal::OrderFreeSum(column) / static_cast<double>(frames);
  }
  return out;
}

std::vector<double> MaxPool(const EmbeddingSequence& seq) {
  std::vector<double> out(seq.Frame(0).begin(), seq.Frame(0).end());
  for (std::size_t t = 1; t < seq.NumFrames(); ++t)
    for (std::size_t j = 0; j < seq.Dim(); ++j)
      out[j] = std::max(out[j], seq(t, j));
  return out;
}

std::vector<double> GwrpPool(const EmbeddingSequence& seq, double r) {
  CheckR(r);
  const std::size_t frames = seq.NumFrames();
  // std::pow(0, 0) == 1, so r = 0 puts all weight on the top rank.
  std::vector<double> rank_weight(frames);
  for (std::size_t k = 0; k < frames; ++k)
    rank_weight[k] = std::pow(r, static_cast<double>(k));
  std::vector<double> scratch = rank_weight;
  const double total = internal::OrderFreeSum(scratch);

  std::vector<double> column(frames);
  std::vector<double> out(seq.Dim());
  for (std::size_t j = 0; j < seq.Dim(); ++j) {
    for (std::size_t t = 0; t < frames; ++t) column[t] = seq(t, j);
    std::stable_sort(column.begin(), column.end(), std::greater<>());
    for (std::size_t k = 0; k < frames; ++k)
      scratch[k] = column[k] * rank_weight[k];
    out[j] = internal::OrderFreeSum(scratch) / total;
  }
  return out;
}

std::vector<double> GemPool(const EmbeddingSequence& seq, double p) {
  CheckP(p);
  const std::vector<double> uniform(seq.NumFrames(), 1.0);
  return WeightedPowerMean(seq, uniform, p);
}

RdpWeights ComputeRdpWeights(const EmbeddingSequence& seq, double gamma) {
  RdpWeights out;
  auto u = RawRdpWeights(seq, gamma, &out.deviation, &out.normalized);
  std::vector<double> scratch = u;
  const double total = internal::OrderFreeSum(scratch);
  out.weights.resize(u.size());
  for (std::size_t t = 0; t < u.size(); ++t) out.weights[t] = u[t] / total;
  return out;
}

std::vector<double> RdpPool(const EmbeddingSequence& seq, double gamma) {
  std::vector<double> deviation, normalized;
  const auto u = RawRdpWeights(seq, gamma, &deviation, &normalized);
  return WeightedMean(seq, u);
}

std::vector<double> WeightedGemPool(const EmbeddingSequence& seq, double gamma,
                                    double p) {
  CheckP(p);
  std::vector<double> deviation, normalized;
  const auto u = RawRdpWeights(seq, gamma, &deviation, &normalized);
  return WeightedPowerMean(seq, u, p);
}

std::vector<double> Pool(const EmbeddingSequence& seq,
                         const PoolingSpec& spec) {
  ValidatePoolingSpec(spec);
  switch (spec.strategy) {
    case PoolingStrategy::kMean:
      return MeanPool(seq);
    case PoolingStrategy::kMax:
      return MaxPool(seq);
    case PoolingStrategy::kGwrp:
      return GwrpPool(seq, spec.r);
    case PoolingStrategy::kGem:
      return GemPool(seq, spec.p);
    case PoolingStrategy::kRdp:
      return RdpPool(seq, spec.gamma);
    case PoolingStrategy::kRdpGem:
      return WeightedGemPool(seq, spec.gamma, spec.p);
  }
  throw ValidationError("unhandled pooling strategy");
}

}  // namespace asdpool
