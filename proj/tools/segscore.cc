/* Copyright 2026 The segscore Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// segscore: evaluate segmentation masks with mIoU and instance-aware mIoU,
// generate size-balanced loss weights, audit dataset balance and run the
// corner-case sweeps.
//
// Exit codes: 0 success, 2 usage error, 3 input/format error, 4 internal
// invariant violation.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "segscore/binary_io.h"
#include "segscore/distribution.h"
#include "segscore/errors.h"
#include "segscore/evaluate.h"
#include "segscore/manifest.h"
#include "segscore/mask_io.h"
#include "segscore/report_io.h"
#include "segscore/sensitivity.h"
#include "segscore/size_loss.h"

namespace {

namespace fs = std::filesystem;
using namespace segscore;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitInternal = 4;

struct CommonOptions {
  std::string connectivity = "4";
  int workers = 0;  // 0: SEGSCORE_WORKERS or hardware concurrency
  std::optional<int> num_classes;
  std::optional<int> ignore_id;
};

void AddConnectivity(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--connectivity", opts.connectivity,
                  "Pixel neighbourhood for blobs and components (4 or 8)")
      ->check(CLI::IsMember({"4", "8"}))
      ->capture_default_str();
}

void AddDatasetOptions(CLI::App* cmd, CommonOptions& opts) {
  AddConnectivity(cmd, opts);
  cmd->add_option("--workers", opts.workers,
                  "Worker threads (0: $SEGSCORE_WORKERS or all cores)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--num-classes", opts.num_classes,
                  "Override the manifest's num_classes")
      ->check(CLI::Range(2, 255));
  cmd->add_option("--ignore-id", opts.ignore_id,
                  "Override the manifest's ignore id (default 255)")
      ->check(CLI::Range(0, 255));
}

int Workers(const CommonOptions& opts) {
  return opts.workers > 0 ? opts.workers : DefaultWorkerCount();
}

DatasetManifest LoadManifestWith(const std::string& path,
                                 const CommonOptions& opts) {
  DatasetManifest manifest = LoadManifest(path);
  if (opts.num_classes) manifest.num_classes = *opts.num_classes;
  if (opts.ignore_id) manifest.ignore_id = static_cast<ClassId>(*opts.ignore_id);
  ValidateManifest(manifest);
  return manifest;
}

std::string Score(const std::optional<double>& v) {
  return v ? fmt::format("{:.4f}", *v) : std::string("n/a");
}

// --- evaluate -------------------------------------------------------------

struct EvaluateOptions {
  CommonOptions common;
  std::string manifest;
  std::string out;
  std::string format = "json";
};

int RunEvaluate(const EvaluateOptions& opts) {
  const DatasetManifest manifest = LoadManifestWith(opts.manifest, opts.common);
  const ReportFormat format = ParseReportFormat(opts.format);
  const DatasetStats stats = EvaluateManifest(
      manifest, ParseConnectivity(opts.common.connectivity), Workers(opts.common));
  const Report report = ComputeReport(stats);
  WriteReport(report, opts.out, format);
  fmt::print("mIoU {} IA-mIoU {} IA_S {} IA_M {} IA_L {}\n", Score(report.miou),
             Score(report.ia_miou), Score(report.ia_small),
             Score(report.ia_medium), Score(report.ia_large));
  return kExitOk;
}

// --- gen-weights ----------------------------------------------------------

struct WeightOptions {
  CommonOptions common;
  std::string manifest;
  std::string out_dir;
  double tau = kDefaultTau;
  std::string source = "gt";
  bool preview = false;
};

int RunGenWeights(const WeightOptions& opts) {
  const DatasetManifest manifest = LoadManifestWith(opts.manifest, opts.common);
  const Connectivity connectivity = ParseConnectivity(opts.common.connectivity);
  std::error_code ec;
  fs::create_directories(opts.out_dir, ec);
  if (ec) {
    throw IoError(fmt::format("cannot create '{}': {}", opts.out_dir, ec.message()));
  }
  std::vector<std::string> failures(manifest.entries.size());
  ParallelFor(manifest.entries.size(), Workers(opts.common), [&](std::size_t i) {
    const ManifestEntry& entry = manifest.entries[i];
    try {
      const fs::path& mask_path =
          opts.source == "pred" ? entry.pred_mask_path : entry.gt_mask_path;
      const LabelMap mask =
          LoadClassMask(mask_path, manifest.num_classes, manifest.ignore_id);
      const WeightMap weights = ComputeWeightMap(mask, opts.tau, connectivity);
      const fs::path base = fs::path(opts.out_dir) / entry.image_id;
      WriteWeightMap(base.string() + ".wmap", weights);
      if (opts.preview) WriteWeightPreview(base.string() + "_weights.png", weights);
    } catch (const InvariantViolation&) {
      throw;
    } catch (const Error& e) {
      failures[i] = fmt::format("{}: {}", entry.image_id, e.what());
    }
  });
  std::vector<std::string> messages;
  for (std::string& f : failures) {
    if (!f.empty()) messages.push_back(std::move(f));
  }
  if (!messages.empty()) throw DatasetError(std::move(messages));
  fmt::print("wrote {} weight maps to {}\n", manifest.entries.size(),
             opts.out_dir);
  return kExitOk;
}

// --- analyze-dist ---------------------------------------------------------

struct DistOptions {
  CommonOptions common;
  std::string manifest;
  std::string out;
  std::string format = "json";
};

int RunAnalyzeDist(const DistOptions& opts) {
  const DatasetManifest manifest = LoadManifestWith(opts.manifest, opts.common);
  const ReportFormat format = ParseReportFormat(opts.format);
  const DistributionReport report = DistributionHistogram(
      manifest, ParseConnectivity(opts.common.connectivity), Workers(opts.common));
  WriteTextFile(opts.out, format == ReportFormat::kJson
                              ? FormatDistributionJson(report)
                              : FormatDistributionCsv(report));
  const auto& t = report.totals();
  const auto pct = report.percentages();
  fmt::print("Large {} ({:.1f}%) Medium {} ({:.1f}%) Small {} ({:.1f}%) Total {}\n",
             t[2], pct[2], t[1], pct[1], t[0], pct[0], report.total());
  return kExitOk;
}

// --- corner-sim -----------------------------------------------------------

struct CornerOptions {
  CommonOptions common;
  std::string tag;
  int canvas = 200;
  int large = 100;
  int small = 10;
  int small_count = 1;
  int steps = 10;
  std::string out;
};

int RunCornerSim(const CornerOptions& opts) {
  const CornerScenario scenario =
      MakeCornerScenario(ParseCornerCase(opts.tag), opts.canvas, opts.large,
                         opts.small, opts.small_count, opts.steps);
  const auto rows =
      RunGrowthSweep(scenario, ParseConnectivity(opts.common.connectivity));
  WriteTextFile(opts.out, FormatSweepCsv(rows));
  fmt::print("case {}: {} rows written to {}\n", ToChar(scenario.tag),
             rows.size(), opts.out);
  return kExitOk;
}

// --- removal-sim ----------------------------------------------------------

struct RemovalOptions {
  CommonOptions common;
  std::string gt;
  std::string instances;
  std::vector<int> sides = {6, 12, 24, 40, 80, 110};
  int class_id = 1;
  int num_classes = 21;
  std::string out;
};

int RunRemovalSim(const RemovalOptions& opts) {
  const Connectivity connectivity = ParseConnectivity(opts.common.connectivity);
  const ClassId ignore_id = static_cast<ClassId>(
      opts.common.ignore_id.value_or(kDefaultIgnoreId));
  std::optional<LabelMap> gt;
  std::optional<InstanceMap> ids;
  if (!opts.gt.empty()) {
    gt = LoadClassMask(opts.gt, opts.num_classes, ignore_id);
    if (!opts.instances.empty()) ids = LoadInstanceMask(opts.instances);
  } else {
    RemovalScene scene =
        MakeRemovalScene(opts.sides, static_cast<ClassId>(opts.class_id));
    gt = std::move(scene.gt);
    ids = std::move(scene.instances);
  }
  const InstanceSet instances = BuildGtInstances(*gt, ids, connectivity);
  const auto rows = RunRemovalSweep(*gt, instances,
                                    static_cast<ClassId>(opts.class_id),
                                    connectivity);
  WriteTextFile(opts.out, FormatSweepCsv(rows));
  fmt::print("class {}: {} rows written to {}\n", opts.class_id, rows.size(),
             opts.out);
  return kExitOk;
}

// --- ewc-penalty ----------------------------------------------------------

struct EwcOptions {
  std::string theta;
  std::string theta_star;
  std::string fisher;
  double lambda = kDefaultLambda;
};

int RunEwcPenalty(const EwcOptions& opts) {
  const ParamVector theta = LoadParamVector(opts.theta);
  const ParamVector theta_star = LoadParamVector(opts.theta_star);
  const FisherDiagonal fisher = LoadFisherDiagonal(opts.fisher);
  fmt::print("{:.6f}\n", EwcPenalty(theta, theta_star, fisher, opts.lambda));
  return kExitOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"Segmentation scoring with mIoU and instance-aware mIoU"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  EvaluateOptions eval;
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions in a manifest");
  evaluate->add_option("--manifest", eval.manifest, "Dataset manifest (JSON)")
      ->required();
  evaluate->add_option("--out", eval.out, "Report output path")->required();
  evaluate->add_option("--format", eval.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}));
  AddDatasetOptions(evaluate, eval.common);

  WeightOptions weights;
  auto* gen_weights = app.add_subcommand(
      "gen-weights", "Write size-balanced loss weight maps for each entry");
  gen_weights->add_option("--manifest", weights.manifest, "Dataset manifest (JSON)")
      ->required();
  gen_weights->add_option("--out", weights.out_dir, "Output directory")->required();
  gen_weights->add_option("--tau", weights.tau, "Upper clamp on pixel weights")
      ->check(CLI::Range(1.0, std::numeric_limits<double>::max()));
  gen_weights->add_option("--source", weights.source,
                          "Mask used as the pseudo label (gt or pred)")
      ->check(CLI::IsMember({"gt", "pred"}));
  gen_weights->add_flag("--preview", weights.preview,
                        "Also write an 8-bit PNG preview per map");
  AddDatasetOptions(gen_weights, weights.common);

  DistOptions dist;
  auto* analyze = app.add_subcommand(
      "analyze-dist", "Count ground-truth instances per class and size");
  analyze->add_option("--manifest", dist.manifest, "Dataset manifest (JSON)")
      ->required();
  analyze->add_option("--out", dist.out, "Distribution output path")->required();
  analyze->add_option("--format", dist.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  AddDatasetOptions(analyze, dist.common);

  CornerOptions corner;
  auto* corner_sim = app.add_subcommand(
      "corner-sim", "Growth sweep over a synthetic corner case");
  corner_sim->add_option("--case", corner.tag, "Corner case")
      ->required()
      ->check(CLI::IsMember({"A", "B", "C", "D"}));
  corner_sim->add_option("--canvas", corner.canvas, "Canvas side in pixels")
      ->check(CLI::PositiveNumber);
  corner_sim->add_option("--large", corner.large, "Large square side")
      ->check(CLI::PositiveNumber);
  corner_sim->add_option("--small", corner.small, "Small square side")
      ->check(CLI::PositiveNumber);
  corner_sim->add_option("--small-count", corner.small_count,
                         "Number of small squares")
      ->check(CLI::NonNegativeNumber);
  corner_sim->add_option("--steps", corner.steps, "Growth steps")
      ->check(CLI::PositiveNumber);
  corner_sim->add_option("--out", corner.out, "CSV output path")->required();
  AddConnectivity(corner_sim, corner.common);

  RemovalOptions removal;
  auto* removal_sim = app.add_subcommand(
      "removal-sim", "Erase instances smallest first from a perfect prediction");
  removal_sim->add_option("--gt", removal.gt,
                          "Class mask (default: synthetic scene from --sides)");
  removal_sim->add_option("--instances", removal.instances,
                          "16-bit instance mask for --gt");
  removal_sim->add_option("--sides", removal.sides,
                          "Square sides of the synthetic scene")
      ->delimiter(',');
  removal_sim->add_option("--class", removal.class_id, "Class to erase")
      ->check(CLI::Range(1, 254));
  removal_sim->add_option("--num-classes", removal.num_classes,
                          "Number of classes in --gt")
      ->check(CLI::Range(2, 255));
  removal_sim->add_option("--ignore-id", removal.common.ignore_id,
                          "Ignore id of --gt (default 255)")
      ->check(CLI::Range(0, 255));
  removal_sim->add_option("--out", removal.out, "CSV output path")->required();
  AddConnectivity(removal_sim, removal.common);

  EwcOptions ewc;
  auto* ewc_penalty = app.add_subcommand(
      "ewc-penalty", "Print the EWC penalty for two parameter vectors");
  ewc_penalty->add_option("--theta", ewc.theta, "Current parameters")
      ->required();
  ewc_penalty->add_option("--theta-star", ewc.theta_star, "Anchor parameters")
      ->required();
  ewc_penalty->add_option("--fisher", ewc.fisher, "Fisher diagonal")
      ->required();
  ewc_penalty->add_option("--lambda", ewc.lambda, "Regularisation strength")
      ->check(CLI::Range(0.0, std::numeric_limits<double>::max()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*evaluate) return RunEvaluate(eval);
    if (*gen_weights) return RunGenWeights(weights);
    if (*analyze) return RunAnalyzeDist(dist);
    if (*corner_sim) return RunCornerSim(corner);
    if (*removal_sim) return RunRemovalSim(removal);
    if (*ewc_penalty) return RunEwcPenalty(ewc);
  } catch (const InvariantViolation& e) {
    fmt::print(stderr, "internal error: {}\n", e.what());
    return kExitInternal;
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    fmt::print(stderr, "internal error: {}\n", e.what());
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) { return Main(argc, argv); }
