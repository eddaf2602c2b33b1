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

#include "asdpool/metrics.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "asdpool/error.h"
#include "parallel.h"
#include "random.h"

namespace asdpool {

namespace {

void RequireBothClasses(std::size_t normal, std::size_t anomaly) {
  if (normal == 0 || anomaly == 0)
    throw ValidationError("metric needs at least one normal and one anomalous "
                          "clip (got " + std::to_string(normal) + " normal, " +
                          std::to_string(anomaly) + " anomalous)");
}

void SplitByLabel(std::span<const ScoredClip> clips, std::vector<double>* normal,
                  std::vector<double>* anomaly) {
  for (const auto& c : clips) {
    if (c.label == Label::kNormal)
      normal->push_back(c.score);
    else if (c.label == Label::kAnomaly)
      anomaly->push_back(c.score);
    else
      throw ValidationError("scored clip without a normal/anomaly label");
  }
}

}  // namespace

double Auc(std::span<const double> normal, std::span<const double> anomaly) {
  RequireBothClasses(normal.size(), anomaly.size());
  // Rank-sum form of the Mann-Whitney statistic with mid-ranks for ties.
  std::vector<std::pair<double, bool>> all;
  all.reserve(normal.size() + anomaly.size());
  for (double s : normal) all.emplace_back(s, false);
  for (double s : anomaly) all.emplace_back(s, true);
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  double anomaly_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i;
    std::size_t anomalies_in_group = 0;
    while (j < all.size() && all[j].first == all[i].first) {
      anomalies_in_group += all[j].second ? 1 : 0;
      ++j;
    }
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);
    anomaly_rank_sum += mid_rank * static_cast<double>(anomalies_in_group);
    i = j;
  }
  const double na = static_cast<double>(anomaly.size());
  const double nn = static_cast<double>(normal.size());
  return (anomaly_rank_sum - na * (na + 1.0) / 2.0) / (na * nn);
}

double Auc(std::span<const ScoredClip> clips) {
  std::vector<double> normal, anomaly;
  SplitByLabel(clips, &normal, &anomaly);
  return Auc(normal, anomaly);
}

double PartialAuc(std::span<const double> normal,
                  std::span<const double> anomaly, double p) {
  RequireBothClasses(normal.size(), anomaly.size());
  if (!(p > 0.0 && p <= 1.0))
    throw ValidationError("pAUC range p must lie in (0, 1], got " +
                          std::to_string(p));

  std::vector<double> neg(normal.begin(), normal.end());
  std::vector<double> pos(anomaly.begin(), anomaly.end());
  std::sort(neg.begin(), neg.end(), std::greater<>());
  std::sort(pos.begin(), pos.end(), std::greater<>());
  const double nn = static_cast<double>(neg.size());
  const double na = static_cast<double>(pos.size());

  // Walk thresholds from high to low; each distinct score is one ROC vertex.
  double area = 0.0;
  double x0 = 0.0, y0 = 0.0;
  std::size_t in = 0, ia = 0;
  while (in < neg.size() || ia < pos.size()) {
    double threshold;
    if (in == neg.size())
      threshold = pos[ia];
    else if (ia == pos.size())
      threshold = neg[in];
    else
      threshold = std::max(neg[in], pos[ia]);
    while (in < neg.size() && neg[in] == threshold) ++in;
    while (ia < pos.size() && pos[ia] == threshold) ++ia;
    const double x1 = static_cast<double>(in) / nn;
    const double y1 = static_cast<double>(ia) / na;
    if (x1 <= p) {
      area += (x1 - x0) * (y0 + y1) / 2.0;
    } else {
      const double y_at_p = y0 + (y1 - y0) * (p - x0) / (x1 - x0);
      area += (p - x0) * (y0 + y_at_p) / 2.0;
      x0 = p;
      break;
    }
    x0 = x1;
    y0 = y1;
  }

  const double min_area = p * p / 2.0;
  const double max_area = p;
  return 0.5 * (1.0 + (area - min_area) / (max_area - min_area));
}

double PartialAuc(std::span<const ScoredClip> clips, double p) {
  std::vector<double> normal, anomaly;
  SplitByLabel(clips, &normal, &anomaly);
  return PartialAuc(normal, anomaly, p);
}

SectionResult ComputeSectionResult(std::span<const ScoredClip> clips,
                                   double pauc_p) {
  std::vector<double> normal, anomaly, source_normal, target_normal;
  SplitByLabel(clips, &normal, &anomaly);
  for (const auto& c : clips) {
    if (c.label != Label::kNormal) continue;
    if (c.domain == Domain::kSource) source_normal.push_back(c.score);
    if (c.domain == Domain::kTarget) target_normal.push_back(c.score);
  }

  SectionResult result;
  result.auc_all = Auc(normal, anomaly);
  result.pauc = PartialAuc(normal, anomaly, pauc_p);
  result.domain_split = !source_normal.empty() && !target_normal.empty();
  if (result.domain_split) {
    result.auc_source = Auc(source_normal, anomaly);
    result.auc_target = Auc(target_normal, anomaly);
  } else {
    result.auc_source = result.auc_all;
    result.auc_target = result.auc_all;
  }
  return result;
}

std::string_view ToString(AggregationRule rule) {
  return rule == AggregationRule::kDcase2020Arithmetic ? "dcase2020_arithmetic"
                                                       : "dcase_harmonic";
}

AggregationRule ParseAggregationRule(std::string_view s) {
  if (s == "dcase2020_arithmetic") return AggregationRule::kDcase2020Arithmetic;
  if (s == "dcase_harmonic") return AggregationRule::kDcaseHarmonic;
  throw ValidationError("unknown metric rule '" + std::string(s) +
                        "' (expected dcase2020_arithmetic or dcase_harmonic)");
}

double HarmonicMean(std::span<const double> values) {
  if (values.empty()) throw ValidationError("harmonic mean of nothing");
  double inverse_sum = 0.0;
  for (double v : values) {
    if (v == 0.0) return 0.0;
    inverse_sum += 1.0 / v;
  }
  return static_cast<double>(values.size()) / inverse_sum;
}

double Aggregate(std::span<const SectionResult> sections,
                 AggregationRule rule) {
  if (sections.empty()) throw ValidationError("nothing to aggregate");
  if (rule == AggregationRule::kDcase2020Arithmetic) {
    double sum = 0.0;
    for (const auto& s : sections) sum += (s.auc_all + s.pauc) / 2.0;
    return sum / static_cast<double>(sections.size());
  }
  std::vector<double> pooled;
  pooled.reserve(3 * sections.size());
  for (const auto& s : sections) {
    pooled.push_back(s.auc_source);
    pooled.push_back(s.auc_target);
    pooled.push_back(s.pauc);
  }
  return HarmonicMean(pooled);
}

BootstrapCi PairedBootstrapCi(std::span<const double> baseline,
                              std::span<const double> candidate,
                              std::size_t resamples, double confidence,
                              std::uint64_t seed, int workers) {
  if (baseline.size() != candidate.size())
    throw ValidationError("paired bootstrap needs equal lengths, got " +
                          std::to_string(baseline.size()) + " and " +
                          std::to_string(candidate.size()));
  if (baseline.size() < 2)
    throw ValidationError("paired bootstrap needs at least 2 paired units");
  if (resamples < 1) throw ValidationError("resamples must be >= 1");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw ValidationError("confidence must lie in (0, 1)");

  const std::size_t n = baseline.size();
  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = candidate[i] - baseline[i];
  const double shift = diff[0];
  const double nd = static_cast<double>(n);

  BootstrapCi ci;
  double total = 0.0;
  for (double d : diff) total += d - shift;
  ci.delta_mean = shift + total / nd;

  std::vector<double> means(resamples);
  internal::ParallelFor(resamples, workers, [&](std::size_t b) {
    internal::Rng rng(internal::Mix64(seed + b * 0x9e3779b97f4a7c15ULL));
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) sum += diff[rng.Below(n)] - shift;
    means[b] = shift + sum / nd;
  });
  std::sort(means.begin(), means.end());

  auto nearest_rank = [&](double q) {
    const double exact = q * static_cast<double>(resamples);
    auto rank = static_cast<std::size_t>(std::ceil(exact - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, resamples);
    return means[rank - 1];
  };
  const double tail = (1.0 - confidence) / 2.0;
  ci.lo = nearest_rank(tail);
  ci.hi = nearest_rank(1.0 - tail);
  return ci;
}

}  // namespace asdpool
