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

#ifndef ASDPOOL_METRICS_H_
#define ASDPOOL_METRICS_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asdpool/manifest.h"

namespace asdpool {

struct ScoredClip {
  double score = 0.0;
  Label label = Label::kNormal;  // normal or anomaly
  std::string machine_type;
  std::string section;
  Domain domain = Domain::kSource;
};

// Mann-Whitney AUC: fraction of (anomaly, normal) pairs ranked correctly,
// ties counting 1/2. Throws ValidationError if either class is empty.
double Auc(std::span<const double> normal, std::span<const double> anomaly);
double Auc(std::span<const ScoredClip> clips);

// McClish-standardized partial AUC over FPR in [0, p]. Equal scores form a
// single ROC threshold (a diagonal segment). p = 1 gives the plain AUC.
double PartialAuc(std::span<const double> normal,
                  std::span<const double> anomaly, double p);
double PartialAuc(std::span<const ScoredClip> clips, double p);

inline constexpr double kDefaultPaucP = 0.1;

struct SectionResult {
  double auc_source = 0.0;
  double auc_target = 0.0;
  double pauc = 0.0;
  double auc_all = 0.0;
  // False when the section lacks source or target normals; the two domain
  // AUCs then equal auc_all.
  bool domain_split = false;
};

// Domain AUCs use that domain's normals against all anomalies of the section;
// pauc and auc_all use every clip.
SectionResult ComputeSectionResult(std::span<const ScoredClip> clips,
                                   double pauc_p = kDefaultPaucP);

enum class AggregationRule { kDcase2020Arithmetic, kDcaseHarmonic };

std::string_view ToString(AggregationRule rule);
AggregationRule ParseAggregationRule(std::string_view s);

// Harmonic mean; 0 if any value is 0. Throws on empty input.
double HarmonicMean(std::span<const double> values);

// dcase2020_arithmetic: mean over sections of (auc_all + pauc) / 2.
// dcase_harmonic: harmonic mean over {auc_source, auc_target, pauc} of all
// sections pooled together.
double Aggregate(std::span<const SectionResult> sections, AggregationRule rule);

struct BootstrapCi {
  double delta_mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

inline constexpr std::size_t kDefaultResamples = 10000;
inline constexpr double kDefaultConfidence = 0.95;

// Paired bootstrap on per-unit differences d_i = candidate_i - baseline_i.
//
// Resample b (0-based) draws n unit indices from a std::mt19937_64 seeded with
// SplitMix64(seed + b * 0x9e3779b97f4a7c15); each index is
// (u64 * n) >> 64. Means are evaluated as d_0 + sum(d_k - d_0) / n with the
// sum in draw order, so identical differences give exactly d_0. The bounds
// are nearest-rank quantiles (rank ceil(q * B), 1-based) of the sorted
// resample means at q = (1 - confidence) / 2 and 1 - (1 - confidence) / 2.
// Results do not depend on `workers`.
BootstrapCi PairedBootstrapCi(std::span<const double> baseline,
                              std::span<const double> candidate,
                              std::size_t resamples = kDefaultResamples,
                              double confidence = kDefaultConfidence,
                              std::uint64_t seed = 0, int workers = 1);

}  // namespace asdpool

#endif  // ASDPOOL_METRICS_H_
