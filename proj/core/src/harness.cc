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

#include "dpsurv/harness.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <system_error>
#include <thread>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "dpsurv/dp_mechanism.h"
#include "dpsurv/estimators.h"
#include "dpsurv/event_table.h"
#include "dpsurv/fixtures.h"
#include "dpsurv/numeric_format.h"
#include "dpsurv/status_macros.h"
#include "string_view_bridge.h"
#include "dpsurv/step_csv.h"

namespace dpsurv {
namespace {

constexpr std::pair<Analysis, std::string_view> kAnalysisNames[] = {
    {Analysis::kKm, "km"},
    {Analysis::kMedian, "median"},
    {Analysis::kLogrank, "logrank"},
    {Analysis::kCumulativeIncidence, "cuminc"},
    {Analysis::kHazard, "hazard"},
};

// Everything about one dataset that does not depend on the noise.
struct Prepared {
  const NamedDataset* source = nullptr;
  EventTable exact;
  SurvivalCurve exact_survival;
  HazardCurve exact_hazard;
  std::optional<IncidenceCurve> exact_incidence;
  std::optional<std::map<std::string, SurvivalDataset>> groups;
  DatasetBaseline baseline;
};

bool WantsWholeCohort(const ExperimentConfig& config) {
  return config.analyses.contains(Analysis::kKm) ||
         config.analyses.contains(Analysis::kMedian) ||
         config.analyses.contains(Analysis::kHazard) ||
         config.analyses.contains(Analysis::kCumulativeIncidence);
}

double Scale(const ExperimentConfig& config) {
  return config.time_scale.value_or(1.0);
}

absl::Status AddMedian(const SurvivalCurve& curve, const EventTable& table,
                       const ExperimentConfig& config,
                       StatisticValues& values) {
  DPSURV_ASSIGN_OR_RETURN(const SurvivalCurve banded,
                          GreenwoodBand(curve, table, config.alpha));
  DPSURV_ASSIGN_OR_RETURN(const MedianEstimate median,
                          MedianSurvival(banded));
  const double scale = Scale(config);
  if (median.median) values["median"] = *median.median * scale;
  if (median.lower) values["median_lower"] = *median.lower * scale;
  if (median.upper) values["median_upper"] = *median.upper * scale;
  return absl::OkStatus();
}

void AddLogrank(const LogrankResult& result, StatisticValues& values) {
  values["chi_square"] = result.chi_square;
  values["p_value"] = result.p_value;
}

absl::StatusOr<Prepared> Prepare(const NamedDataset& named,
                                 const ExperimentConfig& config) {
  Prepared prepared;
  prepared.source = &named;
  const SurvivalDataset& dataset = named.dataset;
  prepared.exact = BuildEventTable(dataset);
  prepared.exact_survival = KaplanMeier(prepared.exact);
  prepared.exact_hazard = NelsonAalen(prepared.exact);
  prepared.baseline.dataset = named.name;
  prepared.baseline.time_unit = dataset.time_unit();
  prepared.baseline.subjects = dataset.size();

  if (WantsWholeCohort(config) && prepared.exact.size() == 0) {
    return absl::FailedPreconditionError("dataset has no events");
  }
  if (config.analyses.contains(Analysis::kCumulativeIncidence)) {
    DPSURV_ASSIGN_OR_RETURN(
        prepared.exact_incidence,
        CumulativeIncidence(prepared.exact, config.event_type));
  }
  if (config.analyses.contains(Analysis::kMedian)) {
    DPSURV_RETURN_IF_ERROR(AddMedian(prepared.exact_survival, prepared.exact,
                                     config, prepared.baseline.values));
  }
  if (config.analyses.contains(Analysis::kLogrank)) {
    DPSURV_ASSIGN_OR_RETURN(prepared.groups, SplitByGroup(dataset));
    DPSURV_ASSIGN_OR_RETURN(const LogrankResult result,
                            ExactLogrank(*prepared.groups));
    AddLogrank(result, prepared.baseline.values);
  }
  return prepared;
}

absl::StatusOr<RunRecord> RunOnce(const Prepared& prepared,
                                  const ExperimentConfig& config,
                                  double epsilon, int run) {
  RunRecord record;
  record.run = run;
  record.seed = config.base_seed + static_cast<std::uint64_t>(run);
  PrivacyParams params;
  params.epsilon = epsilon;
  params.seed = record.seed;

  if (WantsWholeCohort(config)) {
    DPSURV_ASSIGN_OR_RETURN(const EventTable table,
                            DpEventTable(prepared.source->dataset, params));
    const SurvivalCurve curve = KaplanMeier(table);
    if (config.analyses.contains(Analysis::kKm)) {
      record.values["km_sup_error"] =
          SupDistance(curve, prepared.exact_survival);
    }
    if (config.analyses.contains(Analysis::kMedian)) {
      DPSURV_RETURN_IF_ERROR(AddMedian(curve, table, config, record.values));
    }
    if (config.analyses.contains(Analysis::kHazard)) {
      record.values["hazard_sup_error"] =
          SupDistance(NelsonAalen(table), prepared.exact_hazard);
    }
    if (config.analyses.contains(Analysis::kCumulativeIncidence)) {
      DPSURV_ASSIGN_OR_RETURN(const IncidenceCurve incidence,
                              CumulativeIncidence(table, config.event_type));
      record.values["cuminc_sup_error"] =
          SupDistance(incidence, *prepared.exact_incidence);
    }
  }
  if (config.analyses.contains(Analysis::kLogrank)) {
    const absl::StatusOr<LogrankResult> result =
        DpLogrank(*prepared.groups, params);
    if (result.ok()) {
      AddLogrank(*result, record.values);
    } else if (result.status().code() != absl::StatusCode::kFailedPrecondition) {
      // An undefined statistic is recorded as missing; anything else is a bug.
      return result.status();
    }
  }
  return record;
}

absl::StatusOr<ExperimentCell> RunCell(const Prepared& prepared,
                                       const ExperimentConfig& config,
                                       double epsilon) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentCell cell;
  cell.dataset = prepared.source->name;
  cell.epsilon = epsilon;
  const std::size_t runs = static_cast<std::size_t>(config.runs);
  std::vector<absl::StatusOr<RunRecord>> results(
      runs, absl::UnknownError("run did not execute"));

  const std::size_t workers = std::min<std::size_t>(
      static_cast<std::size_t>(std::max(1, config.threads)), runs);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t r = next.fetch_add(1); r < runs; r = next.fetch_add(1)) {
      results[r] = RunOnce(prepared, config, epsilon, static_cast<int>(r));
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  for (std::size_t r = 0; r < runs; ++r) {
    if (!results[r].ok()) {
      const absl::Status& status = results[r].status();
      return absl::Status(
          status.code(),
          absl::StrCat("dataset ", cell.dataset, ", epsilon ",
                       FormatDouble(epsilon), ", run ", r, ": ",
                       status.message()));
    }
    cell.runs.push_back(*std::move(results[r]));
  }
  cell.aggregates = Summarize(cell.runs);
  if (const auto it = prepared.baseline.values.find("p_value");
      it != prepared.baseline.values.end()) {
    cell.significance_flips =
        CountSignificanceFlips(cell.runs, it->second, config.alpha);
  }
  if (config.record_timing) {
    cell.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  }
  return cell;
}

nlohmann::ordered_json ValuesToJson(const StatisticValues& values) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& [name, value] : values) out[name] = value;
  return out;
}

std::string Pad(std::string text, std::size_t width) {
  if (text.size() < width) text.append(width - text.size(), ' ');
  return text;
}

std::string Fixed(double value, int digits) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << value;
  return out.str();
}

std::string MedianCell(const StatisticValues& values) {
  const auto get = [&](const char* key) -> std::string {
    const auto it = values.find(key);
    return it == values.end() ? "NA" : Fixed(it->second, 1);
  };
  return absl::StrCat(get("median"), " (", get("median_lower"), ", ",
                      get("median_upper"), ")");
}

}  // namespace

std::string_view AnalysisName(Analysis analysis) {
  for (const auto& [value, name] : kAnalysisNames) {
    if (value == analysis) return name;
  }
  return "unknown";
}

absl::StatusOr<Analysis> ParseAnalysis(std::string_view name) {
  for (const auto& [value, text] : kAnalysisNames) {
    if (text == name) return value;
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown analysis '", ToAbsl(name),
      "' (expected km, median, logrank, cuminc or hazard)"));
}

absl::Status ExperimentConfig::Validate() const {
  if (runs < 1) return absl::InvalidArgumentError("runs must be >= 1");
  if (epsilons.empty()) {
    return absl::InvalidArgumentError("at least one epsilon is required");
  }
  for (double epsilon : epsilons) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "epsilon must be positive and finite, got ", FormatDouble(epsilon)));
    }
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    return absl::InvalidArgumentError("alpha must lie in (0, 1)");
  }
  if (analyses.empty()) {
    return absl::InvalidArgumentError("no analyses requested");
  }
  if (time_scale.has_value() && !(*time_scale > 0.0)) {
    return absl::InvalidArgumentError("time_scale must be positive");
  }
  if (threads < 1) return absl::InvalidArgumentError("threads must be >= 1");
  if (event_type < 1) {
    return absl::InvalidArgumentError("event_type must be >= 1");
  }
  return absl::OkStatus();
}

std::map<std::string, StatisticSummary> Summarize(
    std::span<const RunRecord> runs) {
  std::map<std::string, std::vector<double>> columns;
  for (const RunRecord& run : runs) {
    for (const auto& [name, value] : run.values) columns[name].push_back(value);
  }
  std::map<std::string, StatisticSummary> out;
  for (auto& [name, values] : columns) {
    StatisticSummary summary;
    summary.count = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    summary.mean = sum / static_cast<double>(values.size());
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    summary.median = values.size() % 2 == 1
                         ? values[mid]
                         : 0.5 * (values[mid - 1] + values[mid]);
    out.emplace(name, summary);
  }
  return out;
}

int CountSignificanceFlips(std::span<const RunRecord> runs, double baseline_p,
                           double alpha) {
  const bool baseline_significant = baseline_p < alpha;
  int flips = 0;
  for (const RunRecord& run : runs) {
    const auto it = run.values.find("p_value");
    if (it == run.values.end()) continue;
    if ((it->second < alpha) != baseline_significant) ++flips;
  }
  return flips;
}

absl::StatusOr<ExperimentReport> RunExperiment(
    const ExperimentConfig& config, std::span<const NamedDataset> datasets) {
  DPSURV_RETURN_IF_ERROR(config.Validate());
  if (datasets.empty()) {
    return absl::InvalidArgumentError("no datasets to run");
  }
  ExperimentReport report;
  report.config = config;
  for (const NamedDataset& named : datasets) {
    absl::StatusOr<Prepared> prepared = Prepare(named, config);
    if (!prepared.ok()) {
      return absl::Status(prepared.status().code(),
                          absl::StrCat("dataset ", named.name, ": ",
                                       prepared.status().message()));
    }
    report.baselines.push_back(prepared->baseline);
    for (double epsilon : config.epsilons) {
      DPSURV_ASSIGN_OR_RETURN(ExperimentCell cell,
                              RunCell(*prepared, config, epsilon));
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

absl::StatusOr<ExperimentReport> RunExperiment(const ExperimentConfig& config) {
  if (config.datasets.empty()) {
    return absl::InvalidArgumentError("no datasets named");
  }
  std::vector<NamedDataset> datasets;
  for (const std::string& name : config.datasets) {
    DPSURV_ASSIGN_OR_RETURN(SurvivalDataset dataset, LoadFixture(name));
    datasets.push_back(NamedDataset{name, std::move(dataset)});
  }
  return RunExperiment(config, datasets);
}

nlohmann::ordered_json ReportToJson(const ExperimentReport& report) {
  const ExperimentConfig& config = report.config;
  nlohmann::ordered_json out;
  nlohmann::ordered_json analyses = nlohmann::ordered_json::array();
  for (Analysis a : config.analyses) analyses.push_back(AnalysisName(a));
  out["config"] = {
      {"datasets", config.datasets},
      {"epsilons", config.epsilons},
      {"runs", config.runs},
      {"base_seed", config.base_seed},
      {"alpha", config.alpha},
      {"analyses", analyses},
      {"time_scale", config.time_scale.has_value()
                         ? nlohmann::ordered_json(*config.time_scale)
                         : nlohmann::ordered_json(nullptr)},
      {"event_type", config.event_type},
  };
  out["privacy"] = {
      {"mechanism", "laplace"},
      {"sensitivity", kSensitivity},
      {"delta", PrivacyParams::kDelta},
      {"seed_rule", "seed = base_seed + run; logrank groups use "
                    "seed xor fnv1a(label)"},
  };
  nlohmann::ordered_json baselines = nlohmann::ordered_json::array();
  for (const DatasetBaseline& baseline : report.baselines) {
    baselines.push_back({{"dataset", baseline.dataset},
                         {"time_unit", baseline.time_unit},
                         {"subjects", baseline.subjects},
                         {"values", ValuesToJson(baseline.values)}});
  }
  out["baselines"] = std::move(baselines);
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const ExperimentCell& cell : report.cells) {
    nlohmann::ordered_json aggregates = nlohmann::ordered_json::object();
    for (const auto& [name, summary] : cell.aggregates) {
      aggregates[name] = {{"count", summary.count},
                          {"mean", summary.mean},
                          {"median", summary.median}};
    }
    nlohmann::ordered_json runs = nlohmann::ordered_json::array();
    for (const RunRecord& run : cell.runs) {
      runs.push_back({{"run", run.run},
                      {"seed", run.seed},
                      {"values", ValuesToJson(run.values)}});
    }
    nlohmann::ordered_json json_cell = {
        {"dataset", cell.dataset},
        {"epsilon", cell.epsilon},
        {"significance_flips", cell.significance_flips},
        {"aggregates", std::move(aggregates)},
        {"runs", std::move(runs)},
    };
    if (cell.wall_ms.has_value()) json_cell["wall_ms"] = *cell.wall_ms;
    cells.push_back(std::move(json_cell));
  }
  out["cells"] = std::move(cells);
  return out;
}

std::string ReportToText(const ExperimentReport& report) {
  const bool median = report.config.analyses.contains(Analysis::kMedian);
  const bool logrank = report.config.analyses.contains(Analysis::kLogrank);
  const std::vector<std::string> errors = {"km_sup_error", "hazard_sup_error",
                                           "cuminc_sup_error"};

  std::string header = Pad("dataset", 12) + Pad("epsilon", 10);
  if (median) header += Pad("median (CI)", 28);
  if (logrank) header += Pad("chi_square", 12) + Pad("p_value", 12) + "flips  ";
  for (const std::string& e : errors) {
    for (const auto& cell : report.cells) {
      if (cell.aggregates.contains(e)) {
        header += Pad(e, 18);
        break;
      }
    }
  }
  if (!report.cells.empty() && report.cells.front().wall_ms) {
    header += "wall_ms";
  }
  std::string out = header + "\n" + std::string(header.size(), '-') + "\n";

  for (const DatasetBaseline& baseline : report.baselines) {
    std::string row = Pad(baseline.dataset, 12) + Pad("exact", 10);
    if (median) row += Pad(MedianCell(baseline.values), 28);
    if (logrank) {
      const auto chi = baseline.values.find("chi_square");
      const auto p = baseline.values.find("p_value");
      row += Pad(chi == baseline.values.end() ? "NA" : Fixed(chi->second, 2),
                 12);
      row += Pad(p == baseline.values.end() ? "NA" : Fixed(p->second, 4), 12);
    }
    out += row + "\n";
    for (const ExperimentCell& cell : report.cells) {
      if (cell.dataset != baseline.dataset) continue;
      // Medians of the run-level values.
      StatisticValues medians;
      for (const auto& [name, summary] : cell.aggregates) {
        medians[name] = summary.median;
      }
      row = Pad("", 12) + Pad(FormatDouble(cell.epsilon), 10);
      if (median) row += Pad(MedianCell(medians), 28);
      if (logrank) {
        const auto get = [&](const char* key, int digits) {
          const auto it = cell.aggregates.find(key);
          return it == cell.aggregates.end() ? std::string("NA")
                                             : Fixed(it->second.mean, digits);
        };
        row += Pad(get("chi_square", 2), 12) + Pad(get("p_value", 4), 12) +
               Pad(absl::StrCat(cell.significance_flips), 7);
      }
      for (const std::string& e : errors) {
        const auto it = cell.aggregates.find(e);
        if (it != cell.aggregates.end()) row += Pad(Fixed(it->second.mean, 4), 18);
      }
      if (cell.wall_ms) row += Fixed(*cell.wall_ms, 1);
      out += row + "\n";
    }
  }
  out += absl::StrCat("\nruns per cell: ", report.config.runs,
                      "; medians: median over runs; other statistics: mean "
                      "over runs\n");
  return out;
}

std::string EpsilonTag(double epsilon) { return FormatDouble(epsilon); }

absl::StatusOr<std::vector<std::filesystem::path>> ExportCurveBundle(
    const SurvivalDataset& dataset, std::string_view name,
    std::span<const double> epsilons, std::uint64_t base_seed,
    const std::filesystem::path& out_dir, CurveKind kind, int event_type) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    return absl::InternalError(absl::StrCat("cannot create ", out_dir.string(),
                                            ": ", ec.message()));
  }
  const auto render = [&](const EventTable& table) -> absl::StatusOr<std::string> {
    switch (kind) {
      case CurveKind::kSurvival: {
        const SurvivalCurve curve = KaplanMeier(table);
        return StepFunctionCsv(curve.times, curve.survival, table.provenance);
      }
      case CurveKind::kHazard: {
        const HazardCurve curve = NelsonAalen(table);
        return StepFunctionCsv(curve.times, curve.cumulative_hazard,
                               table.provenance);
      }
      case CurveKind::kIncidence: {
        DPSURV_ASSIGN_OR_RETURN(const IncidenceCurve curve,
                                CumulativeIncidence(table, event_type));
        return StepFunctionCsv(curve.times, curve.incidence, table.provenance);
      }
    }
    return absl::InvalidArgumentError("unknown curve kind");
  };
  const auto write = [](const std::filesystem::path& path,
                        const std::string& text) -> absl::Status {
    std::ofstream file(path, std::ios::binary);
    file << text;
    if (!file) {
      return absl::InternalError(absl::StrCat("cannot write ", path.string()));
    }
    return absl::OkStatus();
  };

  std::vector<std::filesystem::path> written;
  const std::filesystem::path exact_path =
      out_dir / absl::StrCat(ToAbsl(name), "_exact.csv");
  DPSURV_ASSIGN_OR_RETURN(const std::string exact_text,
                          render(BuildEventTable(dataset)));
  DPSURV_RETURN_IF_ERROR(write(exact_path, exact_text));
  written.push_back(exact_path);
  for (double epsilon : epsilons) {
    PrivacyParams params;
    params.epsilon = epsilon;
    params.seed = base_seed;
    DPSURV_ASSIGN_OR_RETURN(const EventTable table,
                            DpEventTable(dataset, params));
    const std::filesystem::path path =
        out_dir / absl::StrCat(ToAbsl(name), "_eps", EpsilonTag(epsilon), ".csv");
    DPSURV_ASSIGN_OR_RETURN(const std::string text, render(table));
    DPSURV_RETURN_IF_ERROR(write(path, text));
    written.push_back(path);
  }
  return written;
}

}  // namespace dpsurv
