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

#include "asdpool/scoring.h"

#include <cmath>
#include <limits>
#include <string>

#include "asdpool/error.h"
#include "parallel.h"
#include "stable_sum.h"

namespace asdpool {

namespace {

double FlooredLog(double distance) {
  return std::log(std::max(distance, kDistanceFloor));
}

}  // namespace

std::vector<double> AlphaGrid() {
  const int steps = static_cast<int>(
      std::lround((kAlphaGridMax - kAlphaGridMin) / kAlphaGridStep));
  const int offset = static_cast<int>(std::lround(-kAlphaGridMin / kAlphaGridStep));
  std::vector<double> grid(steps + 1);
  for (int k = 0; k <= steps; ++k)
    grid[k] = static_cast<double>(k - offset) / 100.0;
  return grid;
}

double EuclideanDistance(std::span<const double> a, std::span<const double> b) {
  double sq = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    sq += d * d;
  }
  return std::sqrt(sq);
}

double PopulationVariance(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double shift = values.front();
  std::vector<double> dev(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) dev[i] = values[i] - shift;
  const double n = static_cast<double>(values.size());
  const double mean = internal::CompensatedSum(dev) / n;
  for (double& d : dev) d = (d - mean) * (d - mean);
  return internal::CompensatedSum(dev) / n;
}

ReferenceIndex ReferenceIndex::Build(
    std::span<const EmbeddingSequence> train_clips, const PoolingSpec& pooling,
    const PreprocessSpec& preprocess, int workers) {
  if (train_clips.size() < 2)
    throw ValidationError("reference index needs at least 2 clips, got " +
                          std::to_string(train_clips.size()));
  ValidatePoolingSpec(pooling);
  ValidatePreprocessSpec(preprocess);
  const std::size_t dim = train_clips.front().Dim();
  for (const auto& clip : train_clips)
    if (clip.Dim() != dim)
      throw ValidationError("dimension mismatch among reference clips: " +
                            std::to_string(clip.Dim()) + " vs " +
                            std::to_string(dim));

  ReferenceIndex index;
  index.pooling_ = pooling;
  index.preprocess_ = preprocess;
  index.vectors_.resize(train_clips.size());
  internal::ParallelFor(train_clips.size(), workers, [&](std::size_t i) {
    index.vectors_[i] = index.PoolClip(train_clips[i]);
  });
  index.Finalize(workers);
  return index;
}

ReferenceIndex ReferenceIndex::FromPooled(
    std::vector<std::vector<double>> vectors, const PoolingSpec& pooling,
    const PreprocessSpec& preprocess, int workers) {
  if (vectors.size() < 2)
    throw ValidationError("reference index needs at least 2 clips, got " +
                          std::to_string(vectors.size()));
  for (const auto& v : vectors)
    if (v.size() != vectors.front().size() || v.empty())
      throw ValidationError("dimension mismatch among pooled references");
  ReferenceIndex index;
  index.pooling_ = pooling;
  index.preprocess_ = preprocess;
  index.vectors_ = std::move(vectors);
  index.Finalize(workers);
  return index;
}

void ReferenceIndex::Finalize(int workers) {
  const std::size_t n = Size();
  log_distance_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    log_distance_[i * n + i] = FlooredLog(0.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double ld = FlooredLog(EuclideanDistance(vectors_[i], vectors_[j]));
      log_distance_[i * n + j] = ld;
      log_distance_[j * n + i] = ld;
    }
  }
  local_log_density_.assign(n, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (j != i)
        local_log_density_[i] = std::min(local_log_density_[i], LogDistance(i, j));
  alpha_star_ = FitAlpha(*this, workers);
}

std::vector<double> ReferenceIndex::PoolClip(
    const EmbeddingSequence& clip) const {
  return Pool(Preprocess(clip, preprocess_), pooling_);
}

AnomalyScore ReferenceIndex::Score(const EmbeddingSequence& test) const {
  if (test.Dim() != Dim())
    throw ValidationError("test clip has D=" + std::to_string(test.Dim()) +
                          " but the reference index has D=" +
                          std::to_string(Dim()));
  return ScorePooled(PoolClip(test));
}

AnomalyScore ReferenceIndex::ScorePooled(std::span<const double> pooled) const {
  return ScorePooled(pooled, alpha_star_);
}

AnomalyScore ReferenceIndex::ScorePooled(std::span<const double> pooled,
                                         double alpha) const {
  if (pooled.size() != Dim())
    throw ValidationError("pooled test vector has D=" +
                          std::to_string(pooled.size()) + ", expected " +
                          std::to_string(Dim()));
  AnomalyScore score;
  score.raw = std::numeric_limits<double>::infinity();
  score.normalized = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < Size(); ++i) {
    const double d = EuclideanDistance(pooled, vectors_[i]);
    if (d < score.raw) {
      score.raw = d;
      score.argmin_ref = i;
    }
    const double s = FlooredLog(d) - alpha * local_log_density_[i];
    if (s < score.normalized) {
      score.normalized = s;
      score.normalized_argmin_ref = i;
    }
  }
  return score;
}

std::vector<double> ReferenceIndex::SelfExcludedScores(double alpha) const {
  const std::size_t n = Size();
  std::vector<double> scores(n, std::numeric_limits<double>::infinity());
  for (std::size_t z = 0; z < n; ++z)
    for (std::size_t y = 0; y < n; ++y)
      if (y != z)
        scores[z] = std::min(scores[z],
                             LogDistance(z, y) - alpha * local_log_density_[y]);
  return scores;
}

double ReferenceIndex::ReferenceScoreVariance(double alpha) const {
  return PopulationVariance(SelfExcludedScores(alpha));
}

double FitAlpha(const ReferenceIndex& index, int workers) {
  const auto grid = AlphaGrid();
  std::vector<double> variance(grid.size());
  internal::ParallelFor(grid.size(), workers, [&](std::size_t k) {
    variance[k] = index.ReferenceScoreVariance(grid[k]);
  });

  std::size_t best = 0;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (variance[k] < variance[best] ||
        (variance[k] == variance[best] &&
         std::fabs(grid[k]) < std::fabs(grid[best])))
      best = k;
  }

  // Golden-section search on [best - step, best + step].
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = grid[best] - kAlphaGridStep;
  double hi = grid[best] + kAlphaGridStep;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = index.ReferenceScoreVariance(x1);
  double f2 = index.ReferenceScoreVariance(x2);
  while (hi - lo > kAlphaRefineTolerance) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = index.ReferenceScoreVariance(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = index.ReferenceScoreVariance(x2);
    }
  }
  const double refined = 0.5 * (lo + hi);
  if (index.ReferenceScoreVariance(refined) < variance[best]) return refined;
  return grid[best];
}

}  // namespace asdpool
