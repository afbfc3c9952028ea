//
// Copyright 2026 The dpsurv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DPSURV_HARNESS_H_
#define DPSURV_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpsurv/dataset.h"
#include "json.hpp"

namespace dpsurv {

enum class Analysis { kKm, kMedian, kLogrank, kCumulativeIncidence, kHazard };

// "km", "median", "logrank", "cuminc", "hazard".
std::string_view AnalysisName(Analysis analysis);
absl::StatusOr<Analysis> ParseAnalysis(std::string_view name);

struct ExperimentConfig {
  std::vector<std::string> datasets;
  std::vector<double> epsilons = {3.0, 2.0, 1.0};
  int runs = 10;
  std::uint64_t base_seed = 0;
  double alpha = 0.05;
  std::set<Analysis> analyses = {Analysis::kMedian, Analysis::kLogrank};
  // Multiplies reported median times (e.g. days -> months).
  std::optional<double> time_scale;
  // Event type for the cumulative incidence analysis.
  int event_type = 1;
  int threads = 1;
  // Wall-clock timings make the report non-reproducible, so they are opt-in.
  bool record_timing = false;

  absl::Status Validate() const;
};

// Statistic name -> value. A missing name means the statistic is undefined
// for that run (say, a curve that never drops to 0.5 has no median).
//
//   median, median_lower, median_upper   time units, after time_scale
//   chi_square, p_value                  logrank
//   km_sup_error, hazard_sup_error,
//   cuminc_sup_error                     sup distance to the exact curve
using StatisticValues = std::map<std::string, double>;

struct RunRecord {
  int run = 0;
  std::uint64_t seed = 0;
  StatisticValues values;
};

struct StatisticSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
};

struct ExperimentCell {
  std::string dataset;
  double epsilon = 0.0;
  std::vector<RunRecord> runs;
  std::map<std::string, StatisticSummary> aggregates;
  // Runs whose logrank p-value falls on the other side of alpha than the
  // exact p-value.
  int significance_flips = 0;
  std::optional<double> wall_ms;
};

struct DatasetBaseline {
  std::string dataset;
  std::string time_unit;
  std::size_t subjects = 0;
  StatisticValues values;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<DatasetBaseline> baselines;
  std::vector<ExperimentCell> cells;
};

struct NamedDataset {
  std::string name;
  SurvivalDataset dataset;
};

// For every dataset, epsilon and run r (seed = base_seed + r): one private
// whole-cohort table feeds km/median/hazard/cuminc, and one private table per
// group feeds logrank. The exact baseline is computed once per dataset.
// Deterministic in the config, whatever the thread count.
absl::StatusOr<ExperimentReport> RunExperiment(
    const ExperimentConfig& config, std::span<const NamedDataset> datasets);
// Resolves config.datasets as bundled fixture names.
absl::StatusOr<ExperimentReport> RunExperiment(const ExperimentConfig& config);

std::map<std::string, StatisticSummary> Summarize(
    std::span<const RunRecord> runs);

int CountSignificanceFlips(std::span<const RunRecord> runs, double baseline_p,
                           double alpha);

nlohmann::ordered_json ReportToJson(const ExperimentReport& report);
// Aligned text; no stability guarantee.
std::string ReportToText(const ExperimentReport& report);

enum class CurveKind { kSurvival, kHazard, kIncidence };

// "3", "0.5", "1e+09": the epsilon as it appears in file names.
std::string EpsilonTag(double epsilon);

// Writes `<name>_exact.csv` and one `<name>_eps<e>.csv` per epsilon (seeded
// with base_seed), each with `t,estimate` columns. Returns the paths written.
absl::StatusOr<std::vector<std::filesystem::path>> ExportCurveBundle(
    const SurvivalDataset& dataset, std::string_view name,
    std::span<const double> epsilons, std::uint64_t base_seed,
    const std::filesystem::path& out_dir,
    CurveKind kind = CurveKind::kSurvival, int event_type = 1);

}  // namespace dpsurv

#endif  // DPSURV_HARNESS_H_
