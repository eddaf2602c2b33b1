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

// Temporal pooling: every operator maps a T x D EmbeddingSequence to a
// D-vector. All are pure functions and safe to call concurrently.
//
// Reductions over frames use an order-independent summation (sort, then
// compensated add), so every operator is exactly invariant to frame
// permutations. The mean-pooling limits of the parametric operators also
// reproduce MeanPool bit for bit.

#ifndef ASDPOOL_POOLING_H_
#define ASDPOOL_POOLING_H_

#include <string_view>
#include <vector>

#include "asdpool/embedding.h"

namespace asdpool {

enum class PoolingStrategy { kMean, kMax, kGwrp, kGem, kRdp, kRdpGem };

std::string_view ToString(PoolingStrategy s);
PoolingStrategy ParsePoolingStrategy(std::string_view s);

struct PoolingSpec {
  PoolingStrategy strategy = PoolingStrategy::kMean;
  double r = 0.7;       // GWRP decay, in [0, 1]
  double p = 6.0;       // GeM exponent, > 0 (also used by rdp_gem)
  double gamma = 10.0;  // RDP exponent, >= 0

  bool operator==(const PoolingSpec&) const = default;
};

// Range checks apply to all three hyperparameters regardless of strategy.
void ValidatePoolingSpec(const PoolingSpec& spec);

// Embedding clean-up applied per entry before pooling:
//   |v| < low_threshold      -> 0
//   v > spike_threshold      -> spike_threshold + tanh(v - spike_threshold)
//   otherwise                -> v
struct PreprocessSpec {
  bool enabled = false;
  double low_threshold = 0.1;
  double spike_threshold = 0.5;

  bool operator==(const PreprocessSpec&) const = default;
};

void ValidatePreprocessSpec(const PreprocessSpec& spec);

EmbeddingSequence Preprocess(const EmbeddingSequence& seq,
                             const PreprocessSpec& spec);

// Per-frame deviation weights used by RDP and weighted GeM.
struct RdpWeights {
  std::vector<double> deviation;   // d_t = ||x_t - mean||_2
  std::vector<double> normalized;  // d_t / max d, or 0 when max d == 0
  std::vector<double> weights;     // (1 + d^_t)^gamma, normalized to sum 1
};

std::vector<double> MeanPool(const EmbeddingSequence& seq);
std::vector<double> MaxPool(const EmbeddingSequence& seq);

// Generalized weighted rank pooling; r = 0 is max pooling (0^0 = 1), r = 1 is
// mean pooling.
std::vector<double> GwrpPool(const EmbeddingSequence& seq, double r);

// Generalized mean of max(0, x); output is componentwise >= 0.
std::vector<double> GemPool(const EmbeddingSequence& seq, double p);

RdpWeights ComputeRdpWeights(const EmbeddingSequence& seq, double gamma);

// Deviation-weighted temporal mean.
std::vector<double> RdpPool(const EmbeddingSequence& seq, double gamma);

// GeM with the RDP weights (the rdp_gem hybrid).
std::vector<double> WeightedGemPool(const EmbeddingSequence& seq, double gamma,
                                    double p);

// Dispatches on spec.strategy after validating the spec.
std::vector<double> Pool(const EmbeddingSequence& seq, const PoolingSpec& spec);

}  // namespace asdpool

#endif  // ASDPOOL_POOLING_H_
