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

#include "cli.h"

#include <filesystem>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "asdpool/error.h"
#include "asdpool/pipeline.h"
#include "asdpool/synthetic.h"
#include "flat_config.h"

namespace asdpool::cli {

namespace {

struct RunOptions {
  std::string manifest;
  std::string output_dir;
  std::string strategy = "mean";
  std::string preset;
  double r = 0.7;
  double p = 6.0;
  double gamma = 10.0;
  bool preprocess = false;
  double low_threshold = 0.1;
  double spike_threshold = 0.5;
  std::string alpha_grouping = std::string(kAlphaGroupingPerSection);
  std::string metric_rule = "dcase_harmonic";
  double pauc_p = kDefaultPaucP;
  std::uint64_t seed = 0;
  int workers = 1;

  CLI::Option* r_opt = nullptr;
  CLI::Option* p_opt = nullptr;
  CLI::Option* gamma_opt = nullptr;
};

void AddRunOptions(CLI::App* sub, RunOptions& o) {
  sub->add_option("--manifest", o.manifest, "Dataset manifest (JSON lines)")
      ->required();
  sub->add_option("--output_dir", o.output_dir, "Directory for outputs")
      ->required();
  sub->add_option("--strategy", o.strategy,
                  "mean, max, gwrp, gem, rdp or rdp_gem");
  sub->add_option("--preset", o.preset,
                  "Hyperparameters from a preset: openl3, beats, eat, "
                  "dasheng, agnostic");
  o.r_opt = sub->add_option("--r", o.r, "GWRP decay in [0, 1]");
  o.p_opt = sub->add_option("--p", o.p, "GeM exponent > 0");
  o.gamma_opt = sub->add_option("--gamma", o.gamma, "RDP exponent >= 0");
  sub->add_flag("--preprocess", o.preprocess,
                "Clamp small values and squash spikes before pooling");
  sub->add_option("--low_threshold", o.low_threshold);
  sub->add_option("--spike_threshold", o.spike_threshold);
  sub->add_option("--alpha_grouping", o.alpha_grouping, "per_section");
  sub->add_option("--metric_rule", o.metric_rule,
                  "dcase2020_arithmetic or dcase_harmonic");
  sub->add_option("--pauc_p", o.pauc_p, "pAUC FPR limit in (0, 1]");
  sub->add_option("--seed", o.seed);
  sub->add_option("--workers", o.workers, "Worker threads")
      ->check(CLI::PositiveNumber);
}

RunConfig ToRunConfig(const RunOptions& o) {
  RunConfig c;
  c.manifest = o.manifest;
  c.output_dir = o.output_dir;
  const auto strategy = ParsePoolingStrategy(o.strategy);
  if (!o.preset.empty()) {
    c.pooling = PresetSpec(o.preset, strategy);
  } else {
    c.pooling.strategy = strategy;
  }
  if (o.preset.empty() || o.r_opt->count()) c.pooling.r = o.r;
  if (o.preset.empty() || o.p_opt->count()) c.pooling.p = o.p;
  if (o.preset.empty() || o.gamma_opt->count()) c.pooling.gamma = o.gamma;
  c.preprocess = {.enabled = o.preprocess,
                  .low_threshold = o.low_threshold,
                  .spike_threshold = o.spike_threshold};
  c.alpha_grouping = o.alpha_grouping;
  c.metric_rule = ParseAggregationRule(o.metric_rule);
  c.pauc_p = o.pauc_p;
  c.seed = o.seed;
  return c;
}

// Pulls `--config FILE` out of the arguments and splices the file's keys in
// as flags right after the subcommand name.
std::vector<std::string> ExpandConfig(std::vector<std::string> args) {
  std::optional<std::string> config_path;
  for (std::size_t i = 2; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
      args.erase(args.begin() + i);
      break;
    }
  }
  if (!config_path) return args;
  std::vector<std::string> injected;
  for (const auto& [key, value] : ReadFlatConfig(*config_path))
    injected.push_back("--" + key + "=" + value);
  args.insert(args.begin() + 2, injected.begin(), injected.end());
  return args;
}

}  // namespace

int RunCli(const std::vector<std::string>& raw_args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Training-free anomalous sound detection with temporal pooling"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  // synth
  SyntheticSpec synth;
  std::string synth_mode = "transient_spike";
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth_cmd->add_option("--out", synth_out, "Output directory")->required();
  synth_cmd->add_option("--seed", synth.seed);
  synth_cmd->add_option("--n_train", synth.n_train);
  synth_cmd->add_option("--n_test_normal", synth.n_test_normal);
  synth_cmd->add_option("--n_test_anomalous", synth.n_test_anomalous);
  synth_cmd->add_option("--frames", synth.frames);
  synth_cmd->add_option("--dim", synth.dim);
  synth_cmd->add_option("--anomaly_mode", synth_mode,
                        "transient_spike, global_shift or drift");
  synth_cmd->add_option("--anomaly_strength", synth.anomaly_strength);
  synth_cmd->add_option("--spike_frames", synth.spike_frames);

  // eval
  RunOptions eval_opts;
  auto* eval_cmd =
      app.add_subcommand("eval", "Score test clips and write report.json, "
                                 "scores.csv");
  AddRunOptions(eval_cmd, eval_opts);

  // sweep
  RunOptions sweep_opts;
  std::string sweep_param;
  std::vector<double> sweep_values;
  auto* sweep_cmd =
      app.add_subcommand("sweep", "Evaluate a range of one hyperparameter");
  AddRunOptions(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--parameter", sweep_param, "r, p or gamma")
      ->required();
  sweep_cmd->add_option("--values", sweep_values, "Comma-separated values")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  // compare
  std::string cmp_baseline, cmp_candidate, cmp_out;
  std::uint64_t cmp_seed = 0;
  std::size_t cmp_resamples = kDefaultResamples;
  double cmp_confidence = kDefaultConfidence;
  int cmp_workers = 1;
  auto* compare_cmd = app.add_subcommand(
      "compare", "Paired-bootstrap difference between two reports");
  compare_cmd->add_option("--baseline", cmp_baseline, "Baseline report.json")
      ->required();
  compare_cmd->add_option("--candidate", cmp_candidate, "Candidate report.json")
      ->required();
  compare_cmd->add_option("--seed", cmp_seed);
  compare_cmd->add_option("--resamples", cmp_resamples);
  compare_cmd->add_option("--confidence", cmp_confidence);
  compare_cmd->add_option("--workers", cmp_workers)->check(CLI::PositiveNumber);
  compare_cmd->add_option("--out", cmp_out, "Also write the JSON here");

  // preset
  std::string preset_name;
  auto* preset_cmd =
      app.add_subcommand("preset", "Print a pooling hyperparameter preset");
  preset_cmd->add_option("name", preset_name,
                         "openl3, beats, eat, dasheng or agnostic")
      ->required();

  try {
    auto args = ExpandConfig(raw_args);
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());

    if (synth_cmd->parsed()) {
      synth.anomaly_mode = ParseAnomalyMode(synth_mode);
      out << GenerateSynthetic(synth, synth_out).generic_string() << "\n";
    } else if (eval_cmd->parsed()) {
      const auto report = RunEval(ToRunConfig(eval_opts), eval_opts.workers);
      out << "aggregate: ";
      if (report.aggregate)
        out << *report.aggregate << "\n";
      else
        out << "n/a (no labeled test clips)\n";
    } else if (sweep_cmd->parsed()) {
      SweepConfig config{.base = ToRunConfig(sweep_opts),
                         .parameter = ParseSweepParameter(sweep_param),
                         .values = sweep_values};
      const auto rows = RunSweep(config, sweep_opts.workers);
      out << SweepHeader();
      for (const auto& row : rows) out << SweepRowToCsv(row);
    } else if (compare_cmd->parsed()) {
      const auto result = CompareUnits(
          ReadUnitAggregates(cmp_baseline), ReadUnitAggregates(cmp_candidate),
          cmp_seed, cmp_resamples, cmp_confidence, cmp_workers);
      const auto text = CompareToJson(result);
      out << text;
      if (!cmp_out.empty()) {
        std::ofstream f(cmp_out, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open for writing: " + cmp_out);
        f << text;
        if (!f) throw IoError("write failed: " + cmp_out);
      }
    } else if (preset_cmd->parsed()) {
      out << PresetToJson(GetPreset(preset_name));
    }
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    app.exit(e, out, err);
    return kExitValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace asdpool::cli
