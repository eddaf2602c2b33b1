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

#include "asdpool/pipeline.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "asdpool/error.h"
#include "json.hpp"
#include "parallel.h"

namespace asdpool {

namespace {

using nlohmann::json;

// Shortest representation that round-trips.
std::string FormatDouble(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string CsvField(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string UnitName(const std::string& dataset, Subset subset) {
  return dataset + "/" + std::string(ToString(subset));
}

void WriteTextFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

void EnsureDirectory(const std::filesystem::path& dir) {
  if (dir.empty()) throw ValidationError("no output directory given");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw IoError("cannot create output directory " + dir.string() +
                  (ec ? ": " + ec.message() : ""));
}

json ConfigToJson(const RunConfig& c) {
  return json{
      {"manifest", c.manifest.generic_string()},
      {"pooling",
       {{"strategy", ToString(c.pooling.strategy)},
        {"r", c.pooling.r},
        {"p", c.pooling.p},
        {"gamma", c.pooling.gamma}}},
      {"preprocess",
       {{"enabled", c.preprocess.enabled},
        {"low_threshold", c.preprocess.low_threshold},
        {"spike_threshold", c.preprocess.spike_threshold}}},
      {"alpha_grouping", c.alpha_grouping},
      {"metric_rule", ToString(c.metric_rule)},
      {"pauc_p", c.pauc_p},
      {"output_dir", c.output_dir.generic_string()},
      {"seed", c.seed},
  };
}

}  // namespace

void ValidateRunConfig(const RunConfig& config, bool check_paths) {
  ValidatePoolingSpec(config.pooling);
  ValidatePreprocessSpec(config.preprocess);
  if (config.alpha_grouping != kAlphaGroupingPerSection)
    throw ValidationError("unsupported alpha grouping '" +
                          config.alpha_grouping + "' (only per_section)");
  if (!(config.pauc_p > 0.0 && config.pauc_p <= 1.0))
    throw ValidationError("pauc_p must lie in (0, 1]");
  if (check_paths && !std::filesystem::is_regular_file(config.manifest))
    throw IoError("manifest not found: " + config.manifest.string());
}

Dataset LoadDataset(const std::filesystem::path& manifest_path, int workers) {
  Dataset dataset;
  dataset.manifest = LoadManifest(manifest_path);
  const auto& records = dataset.manifest.records;
  dataset.clips.resize(records.size());
  internal::ParallelFor(records.size(), workers, [&](std::size_t i) {
    dataset.clips[i] = ReadEmbeddingFile(dataset.manifest.Resolve(records[i]));
  });
  for (std::size_t i = 1; i < dataset.clips.size(); ++i) {
    if (dataset.clips[i].Dim() != dataset.clips[0].Dim())
      throw ValidationError(records[i].path + ": D=" +
                            std::to_string(dataset.clips[i].Dim()) +
                            " differs from D=" +
                            std::to_string(dataset.clips[0].Dim()) +
                            " of " + records[0].path);
  }
  return dataset;
}

EvalReport Evaluate(const Dataset& dataset, const RunConfig& config,
                    int workers) {
  ValidateRunConfig(config, /*check_paths=*/false);
  const auto& records = dataset.manifest.records;

  struct Members {
    std::vector<std::size_t> train, test;
  };
  std::map<SectionKey, Members> sections;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    auto& m = sections[{r.dataset, r.subset, r.machine_type, r.section}];
    (r.split == Split::kTrain ? m.train : m.test).push_back(i);
  }

  EvalReport report;
  report.config = config;
  std::vector<AnomalyScore> scores(records.size());
  std::map<std::pair<std::string, Subset>, std::vector<SectionResult>> units;

  for (const auto& [key, members] : sections) {
    const std::string where = key.dataset + "/" +
                              std::string(ToString(key.subset)) + "/" +
                              key.machine_type + "/" + key.section + ": ";
    SectionReport section{.key = key,
                          .n_reference = members.train.size(),
                          .n_test = members.test.size(),
                          .result = std::nullopt};
    try {
      std::vector<EmbeddingSequence> train;
      train.reserve(members.train.size());
      for (auto i : members.train) train.push_back(dataset.clips[i]);
      const auto index = ReferenceIndex::Build(train, config.pooling,
                                               config.preprocess, workers);
      section.alpha_star = index.AlphaStar();

      internal::ParallelFor(members.test.size(), workers, [&](std::size_t k) {
        const auto i = members.test[k];
        scores[i] = index.Score(dataset.clips[i]);
      });

      std::vector<ScoredClip> labeled;
      for (auto i : members.test) {
        if (records[i].label == Label::kUnknown) continue;
        labeled.push_back({scores[i].normalized, records[i].label,
                           records[i].machine_type, records[i].section,
                           records[i].domain});
      }
      if (!labeled.empty()) {
        section.result = ComputeSectionResult(labeled, config.pauc_p);
        units[{key.dataset, key.subset}].push_back(*section.result);
      }
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
    report.sections.push_back(std::move(section));
  }

  double unit_sum = 0.0;
  for (const auto& [unit, results] : units) {
    const double value = Aggregate(results, config.metric_rule);
    report.units.push_back({unit.first, unit.second, value});
    unit_sum += value;
  }
  if (!report.units.empty())
    report.aggregate = unit_sum / static_cast<double>(report.units.size());

  for (std::size_t i = 0; i < records.size(); ++i)
    if (records[i].split == Split::kTest)
      report.clip_scores.push_back({records[i], scores[i]});
  return report;
}

std::string ReportToJson(const EvalReport& report) {
  json sections = json::array();
  for (const auto& s : report.sections) {
    json entry = {
        {"dataset", s.key.dataset},
        {"subset", ToString(s.key.subset)},
        {"machine_type", s.key.machine_type},
        {"section", s.key.section},
        {"n_reference", s.n_reference},
        {"n_test", s.n_test},
        {"alpha_star", s.alpha_star},
    };
    if (s.result) {
      entry["auc_source"] = s.result->auc_source;
      entry["auc_target"] = s.result->auc_target;
      entry["auc_all"] = s.result->auc_all;
      entry["pauc"] = s.result->pauc;
      entry["domain_split"] = s.result->domain_split;
    }
    sections.push_back(std::move(entry));
  }
  json units = json::array();
  for (const auto& u : report.units)
    units.push_back({{"unit", UnitName(u.dataset, u.subset)},
                     {"dataset", u.dataset},
                     {"subset", ToString(u.subset)},
                     {"aggregate", u.aggregate}});

  json doc = {
      {"config", ConfigToJson(report.config)},
      {"sections", std::move(sections)},
      {"units", std::move(units)},
      {"aggregate", report.aggregate ? json(*report.aggregate) : json(nullptr)},
      {"aggregate_over_units", "arithmetic_mean"},
      {"bootstrap_protocol",
       {{"resample_unit", "dataset/subset aggregate"},
        {"resamples", kDefaultResamples},
        {"confidence", kDefaultConfidence},
        {"quantile", "nearest_rank"}}},
  };
  return doc.dump(2) + "\n";
}

std::string ScoresToCsv(const EvalReport& report) {
  std::ostringstream out;
  out << "path,section,domain,label,raw_score,normalized_score,argmin_ref\n";
  for (const auto& row : report.clip_scores) {
    out << CsvField(row.record.path) << ',' << CsvField(row.record.section)
        << ',' << ToString(row.record.domain) << ','
        << ToString(row.record.label) << ',' << FormatDouble(row.score.raw)
        << ',' << FormatDouble(row.score.normalized) << ','
        << row.score.argmin_ref << '\n';
  }
  return out.str();
}

EvalReport RunEval(const RunConfig& config, int workers) {
  ValidateRunConfig(config);
  const auto dataset = LoadDataset(config.manifest, workers);
  auto report = Evaluate(dataset, config, workers);
  EnsureDirectory(config.output_dir);
  WriteTextFile(config.output_dir / "report.json", ReportToJson(report));
  WriteTextFile(config.output_dir / "scores.csv", ScoresToCsv(report));
  return report;
}

std::string_view ToString(SweepParameter p) {
  switch (p) {
    case SweepParameter::kR:
      return "r";
    case SweepParameter::kP:
      return "p";
    case SweepParameter::kGamma:
      return "gamma";
  }
  return "?";
}

SweepParameter ParseSweepParameter(std::string_view s) {
  if (s == "r") return SweepParameter::kR;
  if (s == "p") return SweepParameter::kP;
  if (s == "gamma") return SweepParameter::kGamma;
  throw ValidationError("unknown sweep parameter '" + std::string(s) +
                        "' (expected r, p or gamma)");
}

std::vector<double> DefaultSweepValues(SweepParameter parameter) {
  std::vector<double> values;
  if (parameter == SweepParameter::kR) {
    for (int k = 0; k <= 10; ++k) values.push_back(k / 10.0);
  } else {
    for (int k = 1; k <= 20; ++k) values.push_back(k);
  }
  return values;
}

PoolingStrategy SweepStrategy(SweepParameter parameter,
                              PoolingStrategy base_strategy) {
  switch (parameter) {
    case SweepParameter::kR:
      return PoolingStrategy::kGwrp;
    case SweepParameter::kP:
      return base_strategy == PoolingStrategy::kRdpGem ? PoolingStrategy::kRdpGem
                                                       : PoolingStrategy::kGem;
    case SweepParameter::kGamma:
      return base_strategy == PoolingStrategy::kRdpGem ? PoolingStrategy::kRdpGem
                                                       : PoolingStrategy::kRdp;
  }
  return base_strategy;
}

std::string SweepHeader() { return "parameter,value,aggregate,ratio_vs_mean\n"; }

std::string SweepRowToCsv(const SweepRow& row) {
  return std::string(ToString(row.parameter)) + "," + FormatDouble(row.value) +
         "," + FormatDouble(row.aggregate) + "," +
         FormatDouble(row.ratio_vs_mean) + "\n";
}

namespace {

PoolingSpec SweepPoint(const SweepConfig& config, double value) {
  PoolingSpec spec = config.base.pooling;
  spec.strategy = SweepStrategy(config.parameter, spec.strategy);
  switch (config.parameter) {
    case SweepParameter::kR:
      spec.r = value;
      break;
    case SweepParameter::kP:
      spec.p = value;
      break;
    case SweepParameter::kGamma:
      spec.gamma = value;
      break;
  }
  return spec;
}

double RequireAggregate(const EvalReport& report) {
  if (!report.aggregate)
    throw ValidationError("sweep needs labeled test clips to aggregate");
  return *report.aggregate;
}

template <typename OnRow>
std::vector<SweepRow> SweepImpl(const Dataset& dataset,
                                const SweepConfig& config, int workers,
                                OnRow&& on_row) {
  const auto values = config.values.empty()
                          ? DefaultSweepValues(config.parameter)
                          : config.values;
  for (double v : values) ValidatePoolingSpec(SweepPoint(config, v));

  RunConfig mean_config = config.base;
  mean_config.pooling.strategy = PoolingStrategy::kMean;
  const double mean_aggregate =
      RequireAggregate(Evaluate(dataset, mean_config, workers));

  std::vector<SweepRow> rows;
  for (double v : values) {
    RunConfig point = config.base;
    point.pooling = SweepPoint(config, v);
    SweepRow row{.parameter = config.parameter, .value = v};
    row.aggregate = RequireAggregate(Evaluate(dataset, point, workers));
    row.ratio_vs_mean = row.aggregate / mean_aggregate;
    on_row(row);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::vector<SweepRow> Sweep(const Dataset& dataset, const SweepConfig& config,
                            int workers) {
  return SweepImpl(dataset, config, workers, [](const SweepRow&) {});
}

std::vector<SweepRow> RunSweep(const SweepConfig& config, int workers) {
  ValidateRunConfig(config.base);
  const auto dataset = LoadDataset(config.base.manifest, workers);
  EnsureDirectory(config.base.output_dir);
  const auto path = config.base.output_dir / "sweep.csv";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << SweepHeader() << std::flush;
  return SweepImpl(dataset, config, workers, [&](const SweepRow& row) {
    out << SweepRowToCsv(row) << std::flush;
    if (!out) throw IoError("write failed: " + path.string());
  });
}

std::vector<UnitValue> UnitAggregatesFromJson(std::string_view report_json) {
  json doc;
  try {
    doc = json::parse(report_json);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed report: ") + e.what());
  }
  if (!doc.contains("units") || !doc["units"].is_array())
    throw ValidationError("report has no 'units' array");
  std::vector<UnitValue> out;
  for (const auto& u : doc["units"]) {
    if (!u.contains("unit") || !u.contains("aggregate") ||
        !u["unit"].is_string() || !u["aggregate"].is_number())
      throw ValidationError("report unit entry lacks 'unit' or 'aggregate'");
    out.push_back({u["unit"].get<std::string>(), u["aggregate"].get<double>()});
  }
  return out;
}

std::vector<UnitValue> ReadUnitAggregates(const std::filesystem::path& report) {
  std::ifstream in(report, std::ios::binary);
  if (!in) throw IoError("cannot open report: " + report.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return UnitAggregatesFromJson(buf.str());
  } catch (const ValidationError& e) {
    throw ValidationError(report.string() + ": " + e.what());
  }
}

CompareResult CompareUnits(const std::vector<UnitValue>& baseline,
                           const std::vector<UnitValue>& candidate,
                           std::uint64_t seed, std::size_t resamples,
                           double confidence, int workers) {
  std::map<std::string, double> a, b;
  for (const auto& u : baseline)
    if (!a.emplace(u.unit, u.value).second)
      throw ValidationError("duplicate unit '" + u.unit + "' in baseline");
  for (const auto& u : candidate)
    if (!b.emplace(u.unit, u.value).second)
      throw ValidationError("duplicate unit '" + u.unit + "' in candidate");

  std::string only_a, only_b;
  for (const auto& [name, v] : a)
    if (!b.count(name)) only_a += (only_a.empty() ? "" : ", ") + name;
  for (const auto& [name, v] : b)
    if (!a.count(name)) only_b += (only_b.empty() ? "" : ", ") + name;
  if (!only_a.empty() || !only_b.empty())
    throw ValidationError("reports cover different units; only in baseline: [" +
                          only_a + "], only in candidate: [" + only_b + "]");
  if (a.empty()) throw ValidationError("reports contain no units");

  CompareResult result;
  result.seed = seed;
  result.resamples = resamples;
  result.confidence = confidence;
  for (const auto& [name, v] : a) {
    result.units.push_back(name);
    result.baseline.push_back(v);
    result.candidate.push_back(b.at(name));
  }
  if (result.units.size() == 1) {
    result.degenerate = true;
    const double delta = result.candidate[0] - result.baseline[0];
    result.ci = {delta, delta, delta};
  } else {
    result.ci = PairedBootstrapCi(result.baseline, result.candidate, resamples,
                                  confidence, seed, workers);
  }
  return result;
}

std::string CompareToJson(const CompareResult& r) {
  json units = json::array();
  for (std::size_t i = 0; i < r.units.size(); ++i)
    units.push_back({{"unit", r.units[i]},
                     {"baseline", r.baseline[i]},
                     {"candidate", r.candidate[i]},
                     {"delta", r.candidate[i] - r.baseline[i]}});
  json doc = {
      {"delta_mean", r.ci.delta_mean},
      {"ci_lo", r.ci.lo},
      {"ci_hi", r.ci.hi},
      {"confidence", r.confidence},
      {"resamples", r.resamples},
      {"seed", r.seed},
      {"resample_unit", "dataset/subset aggregate"},
      {"degenerate", r.degenerate},
      {"units", std::move(units)},
  };
  return doc.dump(2) + "\n";
}

namespace {

const std::vector<PoolingPreset>& PresetTable() {
  static const std::vector<PoolingPreset> table = {
      {"openl3", 0.9, 9, 10, 8, 3},
      {"beats", 0.4, 10, 19, 16, 3},
      {"eat", 0.9, 3, 1, 1, 3},
      {"dasheng", 0.6, 6, 20, 20, 3},
      {"agnostic", 0.7, 6, 10, 9, 3},
  };
  return table;
}

}  // namespace

std::vector<std::string> PresetNames() {
  std::vector<std::string> names;
  for (const auto& p : PresetTable()) names.push_back(p.name);
  return names;
}

PoolingPreset GetPreset(std::string_view name) {
  for (const auto& p : PresetTable())
    if (p.name == name) return p;
  std::string known;
  for (const auto& p : PresetTable())
    known += (known.empty() ? "" : ", ") + p.name;
  throw ValidationError("unknown preset '" + std::string(name) +
                        "' (expected one of: " + known + ")");
}

PoolingSpec PresetSpec(std::string_view name, PoolingStrategy strategy) {
  const auto preset = GetPreset(name);
  const bool hybrid = strategy == PoolingStrategy::kRdpGem;
  return PoolingSpec{
      .strategy = strategy,
      .r = preset.gwrp_r,
      .p = hybrid ? preset.rdp_gem_p : preset.gem_p,
      .gamma = hybrid ? preset.rdp_gem_gamma : preset.rdp_gamma,
  };
}

std::string PresetToJson(const PoolingPreset& preset) {
  json doc = {
      {"name", preset.name},
      {"gwrp_r", preset.gwrp_r},
      {"gem_p", preset.gem_p},
      {"rdp_gamma", preset.rdp_gamma},
      {"rdp_gem_gamma", preset.rdp_gem_gamma},
      {"rdp_gem_p", preset.rdp_gem_p},
  };
  return doc.dump(2) + "\n";
}

}  // namespace asdpool
