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

// End-to-end runs. Each machine section gets its own reference index; test
// clips are scored against it and the results are written as reports.

#ifndef ASDPOOL_PIPELINE_H_
#define ASDPOOL_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asdpool/embedding.h"
#include "asdpool/manifest.h"
#include "asdpool/metrics.h"
#include "asdpool/pooling.h"
#include "asdpool/scoring.h"

namespace asdpool {

inline constexpr std::string_view kAlphaGroupingPerSection = "per_section";

struct RunConfig {
  std::filesystem::path manifest;
  PoolingSpec pooling;
  PreprocessSpec preprocess;
  std::string alpha_grouping = std::string(kAlphaGroupingPerSection);
  AggregationRule metric_rule = AggregationRule::kDcaseHarmonic;
  double pauc_p = kDefaultPaucP;
  std::filesystem::path output_dir;
  std::uint64_t seed = 0;
};

// Checks value ranges; `check_paths` additionally requires the manifest to
// exist.
void ValidateRunConfig(const RunConfig& config, bool check_paths = true);

// A manifest with every clip loaded. All clips share one D.
struct Dataset {
  Manifest manifest;
  std::vector<EmbeddingSequence> clips;  // parallel to manifest.records
};

Dataset LoadDataset(const std::filesystem::path& manifest_path,
                    int workers = 1);

struct SectionKey {
  std::string dataset;
  Subset subset = Subset::kDev;
  std::string machine_type;
  std::string section;

  auto operator<=>(const SectionKey&) const = default;
  bool operator==(const SectionKey&) const = default;
};

struct SectionReport {
  SectionKey key;
  std::size_t n_reference = 0;
  std::size_t n_test = 0;
  double alpha_star = 0.0;
  std::optional<SectionResult> result;  // empty if no labeled test clips
};

struct UnitAggregate {
  std::string dataset;
  Subset subset = Subset::kDev;
  double aggregate = 0.0;
};

struct ClipScoreRow {
  ClipRecord record;
  AnomalyScore score;
};

struct EvalReport {
  RunConfig config;
  std::vector<SectionReport> sections;  // sorted by key
  std::vector<UnitAggregate> units;     // one per (dataset, subset)
  // Arithmetic mean of the unit aggregates; empty if nothing was labeled.
  std::optional<double> aggregate;
  std::vector<ClipScoreRow> clip_scores;  // test clips, manifest order
};

EvalReport Evaluate(const Dataset& dataset, const RunConfig& config,
                    int workers = 1);

std::string ReportToJson(const EvalReport& report);
std::string ScoresToCsv(const EvalReport& report);

// Loads, evaluates and writes report.json and scores.csv to
// config.output_dir.
EvalReport RunEval(const RunConfig& config, int workers = 1);

enum class SweepParameter { kR, kP, kGamma };

std::string_view ToString(SweepParameter p);
SweepParameter ParseSweepParameter(std::string_view s);

// r in {0.0, 0.1, ..., 1.0}; p and gamma in {1, ..., 20}.
std::vector<double> DefaultSweepValues(SweepParameter parameter);

// The strategy a sweep varies: r -> gwrp, p -> gem, gamma -> rdp; p and
// gamma vary rdp_gem instead when that is the base strategy.
PoolingStrategy SweepStrategy(SweepParameter parameter,
                              PoolingStrategy base_strategy);

struct SweepConfig {
  RunConfig base;
  SweepParameter parameter = SweepParameter::kGamma;
  std::vector<double> values;  // empty means DefaultSweepValues
};

struct SweepRow {
  SweepParameter parameter = SweepParameter::kGamma;
  double value = 0.0;
  double aggregate = 0.0;
  double ratio_vs_mean = 0.0;
};

std::string SweepHeader();
std::string SweepRowToCsv(const SweepRow& row);

// Evaluates mean pooling once, then each value. Rows are appended to
// base.output_dir/sweep.csv as they complete, so a failure keeps earlier rows.
std::vector<SweepRow> RunSweep(const SweepConfig& config, int workers = 1);

// Same, on an already loaded dataset and without touching the filesystem.
std::vector<SweepRow> Sweep(const Dataset& dataset, const SweepConfig& config,
                            int workers = 1);

struct UnitValue {
  std::string unit;  // "dataset/subset"
  double value = 0.0;
};

// Reads the per-(dataset, subset) aggregates from a report.json.
std::vector<UnitValue> ReadUnitAggregates(const std::filesystem::path& report);
std::vector<UnitValue> UnitAggregatesFromJson(std::string_view report_json);

struct CompareResult {
  std::vector<std::string> units;
  std::vector<double> baseline;
  std::vector<double> candidate;
  BootstrapCi ci;
  std::size_t resamples = kDefaultResamples;
  double confidence = kDefaultConfidence;
  std::uint64_t seed = 0;
  // With a single unit there is nothing to resample; the interval collapses
  // to [delta, delta].
  bool degenerate = false;
};

// Pairs units by name (order-insensitive). Throws ValidationError listing the
// units present in only one report.
CompareResult CompareUnits(const std::vector<UnitValue>& baseline,
                           const std::vector<UnitValue>& candidate,
                           std::uint64_t seed,
                           std::size_t resamples = kDefaultResamples,
                           double confidence = kDefaultConfidence,
                           int workers = 1);

std::string CompareToJson(const CompareResult& result);

// Best hyperparameters per embedding model, plus an embedding-agnostic set.
struct PoolingPreset {
  std::string name;
  double gwrp_r = 0.0;
  double gem_p = 0.0;
  double rdp_gamma = 0.0;
  double rdp_gem_gamma = 0.0;
  double rdp_gem_p = 3.0;
};

// name in {openl3, beats, eat, dasheng, agnostic}.
PoolingPreset GetPreset(std::string_view name);
std::vector<std::string> PresetNames();

// Spec for `strategy` with that strategy's hyperparameters from the preset.
PoolingSpec PresetSpec(std::string_view name, PoolingStrategy strategy);

std::string PresetToJson(const PoolingPreset& preset);

}  // namespace asdpool

#endif  // ASDPOOL_PIPELINE_H_
