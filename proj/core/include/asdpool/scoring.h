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

// Nearest-neighbour anomaly scoring against a set of pooled normal
// references, with local-density normalization in log space:
//
//   raw(X)        = min_Y ||pool(X) - pool(Y)||
//   normalized(X) = min_Y ( log D(X, Y) - alpha * log D(Y, Y1) )
//
// where Y1 is Y's nearest other reference and alpha is fitted so that the
// normalized scores of the references themselves (each scored against the
// others) have minimal variance. Every log distance is floored at
// kDistanceFloor first.

#ifndef ASDPOOL_SCORING_H_
#define ASDPOOL_SCORING_H_

#include <cstddef>
#include <span>
#include <vector>

#include "asdpool/embedding.h"
#include "asdpool/pooling.h"

namespace asdpool {

inline constexpr double kDistanceFloor = 1e-12;

// Search grid for alpha: kAlphaGridMin + k * kAlphaGridStep, k = 0..600,
// followed by golden-section refinement within one step of the best point.
inline constexpr double kAlphaGridMin = -2.0;
inline constexpr double kAlphaGridMax = 4.0;
inline constexpr double kAlphaGridStep = 0.01;
inline constexpr double kAlphaRefineTolerance = 1e-6;

// The grid as exact decimal values (k - 200) / 100.
std::vector<double> AlphaGrid();

double EuclideanDistance(std::span<const double> a, std::span<const double> b);

struct AnomalyScore {
  double raw = 0.0;         // unfloored minimum distance
  double normalized = 0.0;  // density-normalized log score
  std::size_t argmin_ref = 0;             // reference attaining `raw`
  std::size_t normalized_argmin_ref = 0;  // reference attaining `normalized`
};

class ReferenceIndex {
 public:
  // Preprocesses and pools every clip, then precomputes log nearest-other
  // distances and fits alpha. Needs >= 2 clips with a shared D.
  static ReferenceIndex Build(std::span<const EmbeddingSequence> train_clips,
                              const PoolingSpec& pooling,
                              const PreprocessSpec& preprocess,
                              int workers = 1);

  // Same, from already pooled vectors.
  static ReferenceIndex FromPooled(std::vector<std::vector<double>> vectors,
                                   const PoolingSpec& pooling = {},
                                   const PreprocessSpec& preprocess = {},
                                   int workers = 1);

  std::size_t Size() const { return vectors_.size(); }
  std::size_t Dim() const { return vectors_.front().size(); }
  const std::vector<std::vector<double>>& Vectors() const { return vectors_; }
  const std::vector<double>& LocalLogDensity() const { return local_log_density_; }
  double AlphaStar() const { return alpha_star_; }
  const PoolingSpec& Pooling() const { return pooling_; }
  const PreprocessSpec& Preprocessing() const { return preprocess_; }

  // Floored log distance between references i and j.
  double LogDistance(std::size_t i, std::size_t j) const {
    return log_distance_[i * Size() + j];
  }

  // Preprocess + pool with this index's settings.
  std::vector<double> PoolClip(const EmbeddingSequence& clip) const;

  AnomalyScore Score(const EmbeddingSequence& test) const;
  AnomalyScore ScorePooled(std::span<const double> pooled) const;
  AnomalyScore ScorePooled(std::span<const double> pooled, double alpha) const;

  // Normalized score of every reference Z against the others (Z excluded).
  std::vector<double> SelfExcludedScores(double alpha) const;

  // Population variance of SelfExcludedScores(alpha).
  double ReferenceScoreVariance(double alpha) const;

 private:
  ReferenceIndex() = default;
  void Finalize(int workers);

  std::vector<std::vector<double>> vectors_;
  std::vector<double> log_distance_;  // N x N, floored
  std::vector<double> local_log_density_;
  double alpha_star_ = 0.0;
  PoolingSpec pooling_;
  PreprocessSpec preprocess_;
};

// Variance-minimizing alpha over the grid, refined by golden-section search.
// Grid ties go to the smaller |alpha|; the refined point replaces the grid
// point only if its variance is strictly lower.
double FitAlpha(const ReferenceIndex& index, int workers = 1);

// Population variance with a shift by the first element, so a constant input
// yields exactly 0.
double PopulationVariance(std::span<const double> values);

}  // namespace asdpool

#endif  // ASDPOOL_SCORING_H_
