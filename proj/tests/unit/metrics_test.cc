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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "asdpool/error.h"
#include "asdpool/metrics.h"
#include "oracles/oracles.h"

namespace asdpool {
namespace {

using V = std::vector<double>;

// Normal-clip counts dividing 10^4 keep every ROC vertex on the oracle grid.
constexpr std::size_t kGridFriendly[] = {1, 2, 4, 5, 8, 10, 16, 20, 25};

struct Instance {
  V normal, anomaly;
};

Instance RandomInstance(std::mt19937_64& g, bool coarse) {
  Instance in;
  const std::size_t nn = kGridFriendly[g() % std::size(kGridFriendly)];
  const std::size_t na = 1 + g() % 25;
  auto draw = [&](double shift) {
    // Coarse values create ties within and across classes.
    const double u = (g() >> 11) * 0x1.0p-53;
    return coarse ? std::floor(6 * u + shift) : u + shift;
  };
  for (std::size_t i = 0; i < nn; ++i) in.normal.push_back(draw(0.0));
  for (std::size_t i = 0; i < na; ++i) in.anomaly.push_back(draw(0.3));
  return in;
}

TEST(Auc, HandExamples) {
  EXPECT_EQ(Auc(V{1, 2}, V{3, 4}), 1.0);
  EXPECT_EQ(Auc(V{2, 2, 2}, V{2, 2}), 0.5);
  EXPECT_EQ(Auc(V{1, 3}, V{2, 4}), 0.75);
  EXPECT_THROW(Auc(V{}, V{1}), ValidationError);
}

TEST(Auc, MatchesPairEnumeration) {
  std::mt19937_64 g(71);
  for (int rep = 0; rep < 200; ++rep) {
    const auto in = RandomInstance(g, rep % 2 == 0);
    EXPECT_NEAR(Auc(in.normal, in.anomaly), oracle::Auc(in.normal, in.anomaly),
                1e-12);
  }
}

TEST(Auc, InvariantUnderMonotoneTransformAndLabelSwap) {
  std::mt19937_64 g(73);
  for (int rep = 0; rep < 50; ++rep) {
    const auto in = RandomInstance(g, false);
    V n2, a2;
    for (double x : in.normal) n2.push_back(std::exp(3 * x) - 7);
    for (double x : in.anomaly) a2.push_back(std::exp(3 * x) - 7);
    EXPECT_NEAR(Auc(n2, a2), Auc(in.normal, in.anomaly), 1e-12);
    EXPECT_NEAR(Auc(in.anomaly, in.normal), 1 - Auc(in.normal, in.anomaly),
                1e-12);
  }
}

TEST(Pauc, PerfectAndChance) {
  for (double p : {0.01, 0.1, 0.5, 1.0}) {
    EXPECT_DOUBLE_EQ(PartialAuc(V{1, 2, 3}, V{4, 5}, p), 1.0);
    EXPECT_DOUBLE_EQ(PartialAuc(V{1, 1, 1}, V{1, 1}, p), 0.5);
  }
  EXPECT_THROW(PartialAuc(V{1}, V{2}, 0.0), ValidationError);
  EXPECT_THROW(PartialAuc(V{1}, V{2}, 1.5), ValidationError);
}

TEST(Pauc, MatchesDenseRocOracle) {
  std::mt19937_64 g(79);
  for (int rep = 0; rep < 100; ++rep) {
    const auto in = RandomInstance(g, rep % 2 == 0);
    for (double p : {0.1, 0.25, 1.0})
      EXPECT_NEAR(PartialAuc(in.normal, in.anomaly, p),
                  oracle::DensePauc(in.normal, in.anomaly, p), 1e-6)
          << "rep " << rep << " p " << p;
  }
}

TEST(Pauc, FullRangeEqualsAuc) {
  std::mt19937_64 g(83);
  for (int rep = 0; rep < 100; ++rep) {
    V normal(1 + g() % 30), anomaly(1 + g() % 30);
    for (auto& x : normal) x = static_cast<double>(g() % 10);
    for (auto& x : anomaly) x = static_cast<double>(g() % 12);
    EXPECT_NEAR(PartialAuc(normal, anomaly, 1.0), Auc(normal, anomaly), 1e-9);
  }
}

ScoredClip Clip(double score, Label label, Domain domain = Domain::kSource) {
  return {.score = score, .label = label, .domain = domain};
}

TEST(SectionResult, SingleDomainCollapses) {
  const std::vector<ScoredClip> clips = {
      Clip(1, Label::kNormal), Clip(3, Label::kNormal),
      Clip(2, Label::kAnomaly), Clip(4, Label::kAnomaly)};
  const auto r = ComputeSectionResult(clips);
  EXPECT_FALSE(r.domain_split);
  EXPECT_EQ(r.auc_source, 0.75);
  EXPECT_EQ(r.auc_target, 0.75);
  EXPECT_EQ(r.auc_all, 0.75);
}

TEST(SectionResult, PerfectScorer) {
  const std::vector<ScoredClip> clips = {
      Clip(0.1, Label::kNormal, Domain::kSource),
      Clip(0.2, Label::kNormal, Domain::kTarget),
      Clip(0.9, Label::kAnomaly, Domain::kSource),
      Clip(0.8, Label::kAnomaly, Domain::kTarget)};
  const auto r = ComputeSectionResult(clips);
  EXPECT_TRUE(r.domain_split);
  EXPECT_EQ(r.auc_source, 1.0);
  EXPECT_EQ(r.auc_target, 1.0);
  EXPECT_EQ(r.auc_all, 1.0);
  EXPECT_EQ(r.pauc, 1.0);
}

TEST(SectionResult, HighTargetNormalsLowerTargetAuc) {
  std::vector<ScoredClip> clips;
  for (double s : {0.1, 0.2, 0.3, 0.4}) clips.push_back(Clip(s, Label::kNormal));
  for (double s : {0.6, 0.75, 0.9, 1.1})
    clips.push_back(Clip(s, Label::kNormal, Domain::kTarget));
  for (double s : {0.5, 0.7, 0.8, 1.0})
    clips.push_back(Clip(s, Label::kAnomaly, s > 0.75 ? Domain::kTarget
                                                      : Domain::kSource));
  const auto r = ComputeSectionResult(clips);
  EXPECT_EQ(r.auc_source, 1.0);
  EXPECT_LT(r.auc_target, r.auc_source);
  // Target normals against all anomalies.
  EXPECT_DOUBLE_EQ(r.auc_target,
                   oracle::Auc({0.6, 0.75, 0.9, 1.1}, {0.5, 0.7, 0.8, 1.0}));
}

TEST(Aggregate, HandExamples) {
  const SectionResult eq{.auc_source = 0.8, .auc_target = 0.8, .pauc = 0.8};
  EXPECT_DOUBLE_EQ(Aggregate(std::span(&eq, 1), AggregationRule::kDcaseHarmonic),
                   0.8);
  EXPECT_NEAR(HarmonicMean(V{1.0, 0.5}), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(HarmonicMean(V{0.9, 0.0, 0.7}), 0.0);
  const SectionResult d20{.pauc = 0.7, .auc_all = 0.9};
  EXPECT_DOUBLE_EQ(
      Aggregate(std::span(&d20, 1), AggregationRule::kDcase2020Arithmetic), 0.8);
  EXPECT_EQ(ParseAggregationRule("dcase_harmonic"),
            AggregationRule::kDcaseHarmonic);
  EXPECT_THROW(ParseAggregationRule("geometric"), ValidationError);
}

TEST(Aggregate, HarmonicPoolsAllSectionValues) {
  const std::vector<SectionResult> sections = {
      {.auc_source = 1.0, .auc_target = 0.5, .pauc = 0.5},
      {.auc_source = 0.25, .auc_target = 1.0, .pauc = 1.0}};
  const double expected = 6.0 / (1 + 2 + 2 + 4 + 1 + 1);
  EXPECT_NEAR(Aggregate(sections, AggregationRule::kDcaseHarmonic), expected,
              1e-15);
}

TEST(Aggregate, HarmonicNeverExceedsArithmetic) {
  std::mt19937_64 g(89);
  for (int rep = 0; rep < 200; ++rep) {
    V v(1 + g() % 20);
    for (auto& x : v) x = 0.01 + 0.99 * ((g() >> 11) * 0x1.0p-53);
    double am = 0;
    for (double x : v) am += x;
    am /= v.size();
    EXPECT_LE(HarmonicMean(v), am * (1 + 1e-15));
  }
}

TEST(Bootstrap, IdenticalAndShifted) {
  const V base = {0.7, 0.65, 0.81, 0.9, 0.55};
  auto ci = PairedBootstrapCi(base, base, 2000, 0.95, 3);
  EXPECT_EQ(ci.delta_mean, 0.0);
  EXPECT_EQ(ci.lo, 0.0);
  EXPECT_EQ(ci.hi, 0.0);

  // Dyadic values make every difference exactly 1.
  const V exact = {0.5, 0.25, 0.75, 0.125, 0.875};
  V plus_one;
  for (double x : exact) plus_one.push_back(x + 1.0);
  ci = PairedBootstrapCi(exact, plus_one, 2000, 0.95, 3);
  EXPECT_EQ(ci.delta_mean, 1.0);
  EXPECT_EQ(ci.lo, 1.0);
  EXPECT_EQ(ci.hi, 1.0);

  // Otherwise the differences agree only up to rounding.
  V shifted;
  for (double x : base) shifted.push_back(x + 0.3);
  ci = PairedBootstrapCi(base, shifted, 2000, 0.95, 3);
  EXPECT_NEAR(ci.delta_mean, 0.3, 1e-15);
  EXPECT_NEAR(ci.lo, 0.3, 1e-15);
  EXPECT_NEAR(ci.hi, 0.3, 1e-15);
}

TEST(Bootstrap, MatchesIndependentResampler) {
  std::mt19937_64 g(97);
  for (std::uint64_t seed : {0ULL, 1ULL, 12345ULL}) {
    V base(10), cand(10);
    for (int i = 0; i < 10; ++i) {
      base[i] = 0.5 + 0.4 * ((g() >> 11) * 0x1.0p-53);
      cand[i] = base[i] + 0.1 * ((g() >> 11) * 0x1.0p-53) - 0.03;
    }
    for (double conf : {0.9, 0.95}) {
      const auto got = PairedBootstrapCi(base, cand, 10000, conf, seed, 3);
      const auto want = oracle::Bootstrap(base, cand, 10000, conf, seed);
      EXPECT_EQ(got.delta_mean, want.delta);
      EXPECT_EQ(got.lo, want.lo);
      EXPECT_EQ(got.hi, want.hi);
      EXPECT_LE(got.lo, got.hi);
    }
  }
}

TEST(Bootstrap, DeterministicAcrossWorkers) {
  const V base = {0.1, 0.4, 0.3, 0.8}, cand = {0.2, 0.35, 0.5, 0.9};
  const auto a = PairedBootstrapCi(base, cand, 5000, 0.95, 9, 1);
  const auto b = PairedBootstrapCi(base, cand, 5000, 0.95, 9, 4);
  EXPECT_EQ(a.lo, b.lo);
  EXPECT_EQ(a.hi, b.hi);
  EXPECT_THROW(PairedBootstrapCi(V{1}, V{1}), ValidationError);
  EXPECT_THROW(PairedBootstrapCi(V{1, 2}, V{1}), ValidationError);
}

}  // namespace
}  // namespace asdpool
