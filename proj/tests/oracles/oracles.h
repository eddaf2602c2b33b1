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

// Slow reference implementations written straight from the defining formulas.
// They share nothing with the library beyond the container type.

#ifndef ASDPOOL_TESTS_ORACLES_H_
#define ASDPOOL_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "asdpool/embedding.h"

namespace asdpool::oracle {

using Vec = std::vector<double>;

inline Vec Mean(const EmbeddingSequence& s) {
  Vec out(s.Dim());
  for (std::size_t j = 0; j < s.Dim(); ++j) {
    long double acc = 0;
    for (std::size_t t = 0; t < s.NumFrames(); ++t) acc += s(t, j);
    out[j] = static_cast<double>(acc / s.NumFrames());
  }
  return out;
}

inline Vec Max(const EmbeddingSequence& s) {
  Vec out(s.Dim(), -std::numeric_limits<double>::infinity());
  for (std::size_t t = 0; t < s.NumFrames(); ++t)
    for (std::size_t j = 0; j < s.Dim(); ++j) out[j] = std::max(out[j], s(t, j));
  return out;
}

inline Vec Gwrp(const EmbeddingSequence& s, double r) {
  Vec out(s.Dim());
  for (std::size_t j = 0; j < s.Dim(); ++j) {
    Vec col;
    for (std::size_t t = 0; t < s.NumFrames(); ++t) col.push_back(s(t, j));
    std::sort(col.begin(), col.end(), std::greater<>());
    long double num = 0, den = 0, w = 1;
    for (double v : col) {
      num += w * v;
      den += w;
      w *= r;
    }
    out[j] = static_cast<double>(num / den);
  }
  return out;
}

// Frame weights before normalization, from deviations around the mean frame.
inline Vec RdpRawWeights(const EmbeddingSequence& s, double gamma) {
  const Vec mu = Mean(s);
  Vec d(s.NumFrames());
  double dmax = 0;
  for (std::size_t t = 0; t < s.NumFrames(); ++t) {
    long double acc = 0;
    for (std::size_t j = 0; j < s.Dim(); ++j) {
      const long double e = s(t, j) - mu[j];
      acc += e * e;
    }
    d[t] = static_cast<double>(std::sqrt(acc));
    dmax = std::max(dmax, d[t]);
  }
  Vec w(s.NumFrames());
  for (std::size_t t = 0; t < w.size(); ++t)
    w[t] = std::pow(1.0 + (dmax > 0 ? d[t] / dmax : 0.0), gamma);
  return w;
}

inline Vec WeightedPowerMean(const EmbeddingSequence& s, const Vec& w,
                             double p) {
  Vec out(s.Dim());
  long double den = 0;
  for (double x : w) den += x;
  for (std::size_t j = 0; j < s.Dim(); ++j) {
    long double num = 0;
    for (std::size_t t = 0; t < s.NumFrames(); ++t)
      num += w[t] * std::pow(static_cast<long double>(std::max(0.0, s(t, j))),
                             static_cast<long double>(p));
    out[j] = static_cast<double>(std::pow(num / den, 1.0L / p));
  }
  return out;
}

inline Vec Gem(const EmbeddingSequence& s, double p) {
  return WeightedPowerMean(s, Vec(s.NumFrames(), 1.0), p);
}

inline Vec Rdp(const EmbeddingSequence& s, double gamma) {
  const Vec w = RdpRawWeights(s, gamma);
  long double den = 0;
  for (double x : w) den += x;
  Vec out(s.Dim());
  for (std::size_t j = 0; j < s.Dim(); ++j) {
    long double num = 0;
    for (std::size_t t = 0; t < s.NumFrames(); ++t) num += w[t] * s(t, j);
    out[j] = static_cast<double>(num / den);
  }
  return out;
}

inline Vec WGem(const EmbeddingSequence& s, double gamma, double p) {
  return WeightedPowerMean(s, RdpRawWeights(s, gamma), p);
}

inline double Distance(const Vec& a, const Vec& b) {
  long double acc = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const long double e = a[j] - b[j];
    acc += e * e;
  }
  return static_cast<double>(std::sqrt(acc));
}

inline double FlooredLog(double d) { return std::log(std::max(d, 1e-12)); }

// log distance from each reference to its nearest other reference.
inline Vec LocalLogDensity(const std::vector<Vec>& refs) {
  Vec out(refs.size());
  for (std::size_t i = 0; i < refs.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < refs.size(); ++k)
      if (k != i) best = std::min(best, Distance(refs[i], refs[k]));
    out[i] = FlooredLog(best);
  }
  return out;
}

inline double RawScore(const Vec& x, const std::vector<Vec>& refs) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& y : refs) best = std::min(best, Distance(x, y));
  return best;
}

// min over Y != skip of log D(x, Y) - alpha * lld[Y].
inline double NormalizedScore(const Vec& x, const std::vector<Vec>& refs,
                              const Vec& lld, double alpha,
                              std::size_t skip = SIZE_MAX) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < refs.size(); ++k)
    if (k != skip)
      best = std::min(best, FlooredLog(Distance(x, refs[k])) - alpha * lld[k]);
  return best;
}

inline double Variance(const Vec& v) {
  long double m = 0;
  for (double x : v) m += x;
  m /= v.size();
  long double acc = 0;
  for (double x : v) acc += (x - m) * (x - m);
  return static_cast<double>(acc / v.size());
}

// Fraction of (anomaly, normal) pairs ranked correctly; ties count half.
inline double Auc(const Vec& normal, const Vec& anomaly) {
  double wins = 0;
  for (double a : anomaly)
    for (double n : normal) wins += a > n ? 1.0 : (a == n ? 0.5 : 0.0);
  return wins / (static_cast<double>(normal.size()) * anomaly.size());
}

// ROC vertices (fpr, tpr) over every distinct threshold, from (0, 0).
inline std::vector<std::pair<double, double>> RocVertices(const Vec& normal,
                                                          const Vec& anomaly) {
  Vec thresholds = normal;
  thresholds.insert(thresholds.end(), anomaly.begin(), anomaly.end());
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());
  std::vector<std::pair<double, double>> roc{{0.0, 0.0}};
  for (double th : thresholds) {
    double fp = 0, tp = 0;
    for (double n : normal) fp += n >= th;
    for (double a : anomaly) tp += a >= th;
    roc.emplace_back(fp / normal.size(), tp / anomaly.size());
  }
  return roc;
}

// Samples the ROC at FPR steps of 1e-4 and integrates over [0, p]. At a
// vertical jump the sample takes the top of the jump, so the step function is
// exact whenever every vertex FPR lies on the grid.
inline double DensePauc(const Vec& normal, const Vec& anomaly, double p) {
  const auto roc = RocVertices(normal, anomaly);
  auto tpr_at = [&](double f) {
    double best = 0.0;
    for (std::size_t i = 1; i < roc.size(); ++i) {
      const auto [x0, y0] = roc[i - 1];
      const auto [x1, y1] = roc[i];
      if (f < x0 - 1e-15 || f > x1 + 1e-15) continue;
      const double y = x1 - x0 < 1e-15 ? y1 : y0 + (y1 - y0) * (f - x0) / (x1 - x0);
      best = std::max(best, y);
    }
    return best;
  };
  const long steps = std::lround(p * 1e4);
  const double h = p / steps;
  long double area = 0;
  for (long k = 0; k < steps; ++k) {
    const double a = k * h, b = (k + 1) * h;
    // The curve is linear inside a grid cell. Reading both ends just inside
    // the cell keeps vertical jumps at the cell edges out of the sum.
    area += h * 0.5 * (tpr_at(a + 1e-12) + tpr_at(b - 1e-12));
  }
  const double amin = p * p / 2, amax = p;
  return 0.5 * (1.0 + (static_cast<double>(area) - amin) / (amax - amin));
}

inline std::uint64_t SplitMix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Ci {
  double delta, lo, hi;
};

// Resampler written from the documented protocol: resample b draws n indices
// from mt19937_64 seeded with SplitMix(seed + b * golden), index = hi64(u * n);
// bounds are nearest-rank order statistics.
inline Ci Bootstrap(const Vec& base, const Vec& cand, std::size_t resamples,
                    double confidence, std::uint64_t seed) {
  const std::size_t n = base.size();
  Vec d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = cand[i] - base[i];
  auto mean_of = [&](const std::vector<std::size_t>& idx) {
    double s = 0;
    for (std::size_t i : idx) s += d[i] - d[0];
    return d[0] + s / static_cast<double>(n);
  };
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  Ci ci{mean_of(all), 0, 0};
  Vec stats;
  for (std::size_t b = 0; b < resamples; ++b) {
    std::mt19937_64 eng(SplitMix(seed + b * 0x9e3779b97f4a7c15ULL));
    std::vector<std::size_t> idx(n);
    for (auto& i : idx) {
      __extension__ using U128 = unsigned __int128;
      i = static_cast<std::size_t>((static_cast<U128>(eng()) * n) >> 64);
    }
    stats.push_back(mean_of(idx));
  }
  auto order_stat = [&](double q) {
    long rank = static_cast<long>(std::ceil(q * resamples - 1e-9));
    rank = std::clamp<long>(rank, 1, static_cast<long>(resamples));
    Vec copy = stats;
    std::nth_element(copy.begin(), copy.begin() + (rank - 1), copy.end());
    return copy[rank - 1];
  };
  ci.lo = order_stat((1 - confidence) / 2);
  ci.hi = order_stat(1 - (1 - confidence) / 2);
  return ci;
}

// Seeded uniform sequences for property tests.
inline EmbeddingSequence RandomSequence(std::mt19937_64& g, std::size_t t,
                                        std::size_t d, double lo = -3.0,
                                        double hi = 3.0) {
  EmbeddingSequence s(t, d);
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = 0; j < d; ++j)
      s(i, j) = lo + (hi - lo) * ((g() >> 11) * 0x1.0p-53);
  return s;
}

inline double MaxRelError(const Vec& a, const Vec& b) {
  double worst = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double scale = std::max({std::abs(a[j]), std::abs(b[j]), 1e-300});
    worst = std::max(worst, std::abs(a[j] - b[j]) / scale);
  }
  return worst;
}

}  // namespace asdpool::oracle

#endif  // ASDPOOL_TESTS_ORACLES_H_
