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

#include "cli.h"

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "dpsurv/dp_mechanism.h"
#include "dpsurv/estimators.h"
#include "dpsurv/event_table.h"
#include "dpsurv/fixtures.h"
#include "dpsurv/noise.h"
#include "dpsurv/numeric_format.h"
#include "dpsurv/status_macros.h"
#include "json.hpp"

namespace dpsurv::cli {
namespace {

using Json = nlohmann::ordered_json;

absl::Status Usage(const std::string& message) {
  return absl::InvalidArgumentError(message);
}

absl::StatusOr<OutputFormat> ParseFormat(const std::string& text) {
  if (text == "json") return OutputFormat::kJson;
  if (text == "csv") return OutputFormat::kCsv;
  if (text == "table") return OutputFormat::kTable;
  return Usage(absl::StrCat("unknown format '", text, "'"));
}

// "raw:code,raw:code"
absl::StatusOr<std::map<std::string, int>> ParseStatusMap(
    const std::string& text) {
  std::map<std::string, int> mapping;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const std::size_t colon = item.rfind(':');
    if (colon == std::string::npos || colon == 0) {
      return Usage(absl::StrCat("bad --status-map entry '", item,
                                "' (expected raw:code)"));
    }
    const absl::StatusOr<double> code = ParseDouble(item.substr(colon + 1));
    if (!code.ok() || *code != static_cast<int>(*code) || *code < 0) {
      return Usage(absl::StrCat("bad status code in '", item, "'"));
    }
    mapping[item.substr(0, colon)] = static_cast<int>(*code);
  }
  if (mapping.empty()) return Usage("--status-map is empty");
  return mapping;
}

std::uint64_t EntropySeed() {
  std::random_device device;
  return (static_cast<std::uint64_t>(device()) << 32) ^ device();
}

struct RawArgs {
  std::string input;
  std::string dataset;
  std::string time_col = "time";
  std::string status_col = "status";
  std::string group_col;
  int event_types = SchemaConfig::kInferEventTypes;
  std::string status_map;
  double epsilon = 0.0;
  std::string seed;
  double alpha = 0.05;
  std::string format = "json";
  int event_type = 0;
  double time_scale = 1.0;

  std::vector<std::string> bench_datasets;
  std::vector<double> epsilons = {3.0, 2.0, 1.0};
  int runs = 10;
  std::string base_seed = "0";
  std::vector<std::string> analyses = {"median", "logrank"};
  int threads = 1;
  bool timing = false;
  std::string export_dir;
  std::string curves = "km";

  std::string datasets_action;
};

struct Options {
  CLI::Option* input = nullptr;
  CLI::Option* dataset = nullptr;
  CLI::Option* group_col = nullptr;
  CLI::Option* event_types = nullptr;
  CLI::Option* status_map = nullptr;
  CLI::Option* epsilon = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* time_scale = nullptr;
};

void AddInputOptions(CLI::App* sub, RawArgs& raw, Options& opts) {
  opts.input = sub->add_option("--input", raw.input, "CSV file with a header row");
  opts.dataset = sub->add_option("--dataset", raw.dataset,
                                 "Bundled fixture name (see `datasets list`)");
  opts.input->excludes(opts.dataset);
  sub->add_option("--time-col", raw.time_col, "Time column")->capture_default_str();
  sub->add_option("--status-col", raw.status_col, "Status column")
      ->capture_default_str();
  opts.group_col = sub->add_option("--group-col", raw.group_col, "Group column");
  opts.event_types = sub->add_option(
      "--event-types", raw.event_types,
      "Number of event types K (default: largest status code)");
  opts.status_map = sub->add_option(
      "--status-map", raw.status_map,
      "Raw status to code, e.g. 'alive:0,dead:1' (default: integer codes)");
}

void AddPrivacyOptions(CLI::App* sub, RawArgs& raw, Options& opts) {
  opts.epsilon = sub->add_option(
      "--epsilon", raw.epsilon,
      "Privacy budget; omit for the exact (non-private) analysis");
  opts.seed = sub->add_option("--seed", raw.seed,
                              "Noise seed, decimal or 0x-hex (default: drawn "
                              "from system entropy and printed)");
  opts.seed->needs(opts.epsilon);
  sub->add_option("--alpha", raw.alpha, "Confidence level alpha")
      ->capture_default_str();
  sub->add_option("--format", raw.format, "json, csv or table")
      ->check(CLI::IsMember({"json", "csv", "table"}))
      ->capture_default_str();
}

absl::Status FillAnalysisPlan(const RawArgs& raw, const Options& opts,
                              CommandPlan& plan) {
  if (opts.input->count() == 0 && opts.dataset->count() == 0) {
    return Usage("one of --input or --dataset is required");
  }
  plan.input = raw.input;
  plan.dataset = raw.dataset;
  plan.schema.time_column = raw.time_col;
  plan.schema.status_column = raw.status_col;
  plan.schema.event_type_count = raw.event_types;
  if (opts.group_col->count() > 0) plan.schema.group_column = raw.group_col;
  if (opts.status_map->count() > 0) {
    DPSURV_ASSIGN_OR_RETURN(plan.schema.status_mapping,
                            ParseStatusMap(raw.status_map));
  }
  if (!plan.dataset.empty()) {
    const FixtureInfo* fixture = FindFixture(plan.dataset);
    if (fixture == nullptr) {
      return Usage(absl::StrCat("unknown fixture '", plan.dataset, "'"));
    }
    if (opts.group_col->count() == 0 && !fixture->group_column.empty()) {
      plan.schema.group_column = std::string(fixture->group_column);
    }
    if (opts.event_types->count() == 0) {
      plan.schema.event_type_count = fixture->event_type_count;
    }
  }
  const absl::Status schema_status = plan.schema.Validate();
  if (!schema_status.ok()) return Usage(std::string(schema_status.message()));

  if (opts.epsilon->count() > 0) {
    PrivacyParams params;
    params.epsilon = raw.epsilon;
    const absl::Status status = params.Validate();
    if (!status.ok()) return Usage(std::string(status.message()));
    plan.epsilon = raw.epsilon;
    if (opts.seed->count() > 0) {
      const absl::StatusOr<std::uint64_t> seed = ParseSeed(raw.seed);
      if (!seed.ok()) return Usage(std::string(seed.status().message()));
      plan.seed = *seed;
    } else {
      plan.seed = EntropySeed();
      plan.seed_from_entropy = true;
    }
  }
  if (!(raw.alpha > 0.0 && raw.alpha < 1.0)) {
    return Usage("--alpha must lie in (0, 1)");
  }
  plan.alpha = raw.alpha;
  DPSURV_ASSIGN_OR_RETURN(plan.format, ParseFormat(raw.format));
  if (opts.time_scale != nullptr && opts.time_scale->count() > 0) {
    if (!(raw.time_scale > 0.0)) return Usage("--time-scale must be positive");
    plan.time_scale = raw.time_scale;
  }
  return absl::OkStatus();
}

absl::Status FillBenchPlan(const RawArgs& raw, CommandPlan& plan) {
  ExperimentConfig& config = plan.experiment;
  for (const std::string& name : raw.bench_datasets) {
    if (FindFixture(name) == nullptr) {
      return Usage(absl::StrCat("unknown fixture '", name, "'"));
    }
  }
  config.datasets = raw.bench_datasets;
  config.epsilons = raw.epsilons;
  config.runs = raw.runs;
  const absl::StatusOr<std::uint64_t> seed = ParseSeed(raw.base_seed);
  if (!seed.ok()) return Usage(std::string(seed.status().message()));
  config.base_seed = *seed;
  config.alpha = raw.alpha;
  config.analyses.clear();
  for (const std::string& name : raw.analyses) {
    const absl::StatusOr<Analysis> analysis = ParseAnalysis(name);
    if (!analysis.ok()) return Usage(std::string(analysis.status().message()));
    config.analyses.insert(*analysis);
  }
  if (raw.time_scale != 1.0) config.time_scale = raw.time_scale;
  if (raw.event_type > 0) config.event_type = raw.event_type;
  config.threads = raw.threads;
  config.record_timing = raw.timing;
  const absl::Status status = config.Validate();
  if (!status.ok()) return Usage(std::string(status.message()));

  DPSURV_ASSIGN_OR_RETURN(plan.format, ParseFormat(raw.format));
  plan.export_dir = raw.export_dir;
  if (raw.curves == "km") {
    plan.export_kind = CurveKind::kSurvival;
  } else if (raw.curves == "hazard") {
    plan.export_kind = CurveKind::kHazard;
  } else {
    plan.export_kind = CurveKind::kIncidence;
  }
  return absl::OkStatus();
}

// ---------------------------------------------------------------------------
// Output

Json ProvenanceJson(const std::optional<DpProvenance>& provenance) {
  if (!provenance.has_value()) return Json{{"type", "exact"}};
  return Json{{"type", "dp"},
              {"mechanism", "laplace"},
              {"epsilon", provenance->epsilon},
              {"seed", provenance->seed},
              {"sensitivity", provenance->sensitivity},
              {"delta", PrivacyParams::kDelta},
              {"budget", "one-shot"}};
}

Json OptionalNumber(const std::optional<double>& value) {
  return value.has_value() ? Json(*value) : Json(nullptr);
}

std::string TextNumber(const std::optional<double>& value) {
  return value.has_value() ? FormatDouble(*value) : std::string("NA");
}

// Column-oriented result that renders as CSV or aligned text.
struct Rows {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string Csv(const std::optional<DpProvenance>& provenance) const {
    std::string out;
    if (provenance.has_value()) out += ProvenanceHeader(*provenance) + "\n";
    for (std::size_t c = 0; c < columns.size(); ++c) {
      out += (c ? "," : "") + columns[c];
    }
    out += "\n";
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        out += (c ? "," : "") + row[c];
      }
      out += "\n";
    }
    return out;
  }

  std::string Table(const std::optional<DpProvenance>& provenance) const {
    std::vector<std::size_t> width(columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) width[c] = columns[c].size();
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        width[c] = std::max(width[c], row[c].size());
      }
    }
    const auto line = [&](const std::vector<std::string>& cells) {
      std::string out;
      for (std::size_t c = 0; c < cells.size(); ++c) {
        out += cells[c];
        if (c + 1 < cells.size()) {
          out += std::string(width[c] - cells[c].size() + 2, ' ');
        }
      }
      return out + "\n";
    };
    std::string out;
    if (provenance.has_value()) out += ProvenanceHeader(*provenance) + "\n";
    out += line(columns);
    for (const auto& row : rows) out += line(row);
    return out;
  }
};

void Emit(const CommandPlan& plan, const Json& json, const Rows& rows,
          const std::optional<DpProvenance>& provenance, std::ostream& out) {
  switch (plan.format) {
    case OutputFormat::kJson:
      out << json.dump(2) << "\n";
      break;
    case OutputFormat::kCsv:
      out << rows.Csv(provenance);
      break;
    case OutputFormat::kTable:
      out << rows.Table(provenance);
      break;
  }
}

absl::StatusOr<SurvivalDataset> LoadInput(const CommandPlan& plan) {
  std::string path;
  std::string name;
  std::string unit;
  if (!plan.dataset.empty()) {
    const FixtureInfo* fixture = FindFixture(plan.dataset);
    if (fixture == nullptr) {
      return absl::NotFoundError(
          absl::StrCat("unknown fixture '", plan.dataset, "'"));
    }
    path = FixturePath(*fixture);
    name = plan.dataset;
    unit = std::string(fixture->time_unit);
  } else {
    path = plan.input;
    name = std::filesystem::path(path).stem().string();
  }
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  absl::StatusOr<SurvivalDataset> dataset =
      ParseDataset(in, plan.schema, name, unit);
  if (!dataset.ok()) {
    return absl::Status(dataset.status().code(),
                        absl::StrCat(path, ": ", dataset.status().message()));
  }
  return dataset;
}

std::optional<PrivacyParams> Params(const CommandPlan& plan) {
  if (!plan.epsilon.has_value()) return std::nullopt;
  PrivacyParams params;
  params.epsilon = *plan.epsilon;
  params.seed = plan.seed.value_or(0);
  return params;
}

// The one table every statistic of this invocation is computed from.
absl::StatusOr<EventTable> AnalysisTable(const CommandPlan& plan,
                                         const SurvivalDataset& dataset) {
  const std::optional<PrivacyParams> params = Params(plan);
  if (!params.has_value()) return BuildEventTable(dataset);
  return DpEventTable(dataset, *params);
}

Json Header(const CommandPlan& plan, const SurvivalDataset& dataset,
            std::string_view analysis,
            const std::optional<DpProvenance>& provenance) {
  Json json;
  json["analysis"] = analysis;
  json["dataset"] = dataset.name();
  json["time_unit"] = dataset.time_unit();
  json["subjects"] = dataset.size();
  json["provenance"] = ProvenanceJson(provenance);
  (void)plan;
  return json;
}

double TimeScale(const CommandPlan& plan) { return plan.time_scale.value_or(1.0); }

absl::Status RunSurvival(const CommandPlan& plan, std::ostream& out) {
  DPSURV_ASSIGN_OR_RETURN(const SurvivalDataset dataset, LoadInput(plan));
  DPSURV_ASSIGN_OR_RETURN(const EventTable table, AnalysisTable(plan, dataset));
  DPSURV_ASSIGN_OR_RETURN(const SurvivalCurve curve,
                          GreenwoodBand(KaplanMeier(table), table, plan.alpha));
  const double scale = TimeScale(plan);
  Json json = Header(plan, dataset, "km", table.provenance);
  json["alpha"] = plan.alpha;
  json["n_total"] = curve.n_total;
  Json points = Json::array();
  Rows rows{{"t", "estimate", "lower", "upper"}, {}};
  for (std::size_t j = 0; j < curve.size(); ++j) {
    const double t = curve.times[j] * scale;
    points.push_back({{"t", t},
                      {"estimate", curve.survival[j]},
                      {"lower", curve.band->lower[j]},
                      {"upper", curve.band->upper[j]}});
    rows.rows.push_back({FormatDouble(t), FormatDouble(curve.survival[j]),
                         FormatDouble(curve.band->lower[j]),
                         FormatDouble(curve.band->upper[j])});
  }
  json["points"] = std::move(points);
  Emit(plan, json, rows, table.provenance, out);
  return absl::OkStatus();
}

absl::Status RunMedian(const CommandPlan& plan, std::ostream& out) {
  DPSURV_ASSIGN_OR_RETURN(const SurvivalDataset dataset, LoadInput(plan));
  DPSURV_ASSIGN_OR_RETURN(const EventTable table, AnalysisTable(plan, dataset));
  DPSURV_ASSIGN_OR_RETURN(const SurvivalCurve curve,
                          GreenwoodBand(KaplanMeier(table), table, plan.alpha));
  DPSURV_ASSIGN_OR_RETURN(MedianEstimate median, MedianSurvival(curve));
  const double scale = TimeScale(plan);
  for (auto* value : {&median.median, &median.lower, &median.upper}) {
    if (value->has_value()) **value *= scale;
  }
  Json json = Header(plan, dataset, "median", table.provenance);
  json["alpha"] = plan.alpha;
  json["median"] = OptionalNumber(median.median);
  json["lower"] = OptionalNumber(median.lower);
  json["upper"] = OptionalNumber(median.upper);
  Rows rows{{"median", "lower", "upper"},
            {{TextNumber(median.median), TextNumber(median.lower),
              TextNumber(median.upper)}}};
  Emit(plan, json, rows, table.provenance, out);
  return absl::OkStatus();
}

absl::Status RunLogrank(const CommandPlan& plan, std::ostream& out) {
  if (!plan.schema.group_column.has_value()) {
    return absl::InvalidArgumentError("logrank needs --group-col");
  }
  DPSURV_ASSIGN_OR_RETURN(const SurvivalDataset dataset, LoadInput(plan));
  DPSURV_ASSIGN_OR_RETURN(const auto groups, SplitByGroup(dataset));
  if (groups.size() != 2) {
    return absl::FailedPreconditionError(absl::StrCat(
        "logrank compares exactly two groups, found ", groups.size()));
  }
  LogrankResult result;
  std::optional<DpProvenance> provenance;
  if (const std::optional<PrivacyParams> params = Params(plan)) {
    DPSURV_ASSIGN_OR_RETURN(result, DpLogrank(groups, *params));
    provenance = params->provenance();
  } else {
    DPSURV_ASSIGN_OR_RETURN(result, ExactLogrank(groups));
  }
  Json json = Header(plan, dataset, "logrank", provenance);
  json["group_column"] = *plan.schema.group_column;
  Json group_json = Json::array();
  std::size_t g = 0;
  for (const auto& [label, part] : groups) {
    group_json.push_back({{"label", label},
                          {"subjects", part.size()},
                          {"observed", result.groups[g].observed},
                          {"expected", result.groups[g].expected}});
    ++g;
  }
  json["groups"] = std::move(group_json);
  json["z"] = result.z;
  json["chi_square"] = result.chi_square;
  json["p_value"] = result.p_value;
  Rows rows{{"z", "chi_square", "p_value"},
            {{FormatDouble(result.z), FormatDouble(result.chi_square),
              FormatDouble(result.p_value)}}};
  Emit(plan, json, rows, provenance, out);
  return absl::OkStatus();
}

absl::Status RunStepCurve(const CommandPlan& plan, std::ostream& out) {
  DPSURV_ASSIGN_OR_RETURN(const SurvivalDataset dataset, LoadInput(plan));
  DPSURV_ASSIGN_OR_RETURN(const EventTable table, AnalysisTable(plan, dataset));
  std::vector<double> times;
  std::vector<double> values;
  std::string_view analysis;
  Json json;
  if (plan.subcommand == Subcommand::kHazard) {
    const HazardCurve curve = NelsonAalen(table);
    times = curve.times;
    values = curve.cumulative_hazard;
    analysis = "hazard";
    json = Header(plan, dataset, analysis, table.provenance);
  } else {
    DPSURV_ASSIGN_OR_RETURN(const IncidenceCurve curve,
                            CumulativeIncidence(table, *plan.event_type));
    times = curve.times;
    values = curve.incidence;
    analysis = "cuminc";
    json = Header(plan, dataset, analysis, table.provenance);
    json["event_type"] = curve.event_type;
  }
  const double scale = TimeScale(plan);
  Json points = Json::array();
  Rows rows{{"t", "estimate"}, {}};
  for (std::size_t j = 0; j < times.size(); ++j) {
    const double t = times[j] * scale;
    points.push_back({{"t", t}, {"estimate", values[j]}});
    rows.rows.push_back({FormatDouble(t), FormatDouble(values[j])});
  }
  json["points"] = std::move(points);
  Emit(plan, json, rows, table.provenance, out);
  return absl::OkStatus();
}

absl::Status RunBench(const CommandPlan& plan, std::ostream& out) {
  DPSURV_ASSIGN_OR_RETURN(const ExperimentReport report,
                          RunExperiment(plan.experiment));
  switch (plan.format) {
    case OutputFormat::kJson:
      out << ReportToJson(report).dump(2) << "\n";
      break;
    case OutputFormat::kTable:
      out << ReportToText(report);
      break;
    case OutputFormat::kCsv: {
      Rows rows{{"dataset", "epsilon", "run", "seed", "statistic", "value"}, {}};
      for (const DatasetBaseline& baseline : report.baselines) {
        for (const auto& [name, value] : baseline.values) {
          rows.rows.push_back(
              {baseline.dataset, "exact", "", "", name, FormatDouble(value)});
        }
      }
      for (const ExperimentCell& cell : report.cells) {
        for (const RunRecord& run : cell.runs) {
          for (const auto& [name, value] : run.values) {
            rows.rows.push_back({cell.dataset, FormatDouble(cell.epsilon),
                                 absl::StrCat(run.run), absl::StrCat(run.seed),
                                 name, FormatDouble(value)});
          }
        }
      }
      out << rows.Csv(std::nullopt);
      break;
    }
  }
  if (!plan.export_dir.empty()) {
    for (const std::string& name : plan.experiment.datasets) {
      DPSURV_ASSIGN_OR_RETURN(const SurvivalDataset dataset, LoadFixture(name));
      DPSURV_RETURN_IF_ERROR(
          ExportCurveBundle(dataset, name, plan.experiment.epsilons,
                            plan.experiment.base_seed, plan.export_dir,
                            plan.export_kind, plan.experiment.event_type)
              .status());
    }
  }
  return absl::OkStatus();
}

absl::Status RunDatasets(const CommandPlan& plan, std::ostream& out) {
  if (plan.datasets_action == "export") {
    const FixtureInfo* fixture = FindFixture(plan.dataset);
    if (fixture == nullptr) {
      return absl::NotFoundError(
          absl::StrCat("unknown fixture '", plan.dataset, "'"));
    }
    std::ifstream in(FixturePath(*fixture), std::ios::binary);
    if (!in) {
      return absl::NotFoundError(
          absl::StrCat("cannot open ", FixturePath(*fixture)));
    }
    out << in.rdbuf();
    return absl::OkStatus();
  }
  Json list = Json::array();
  Rows rows{{"name", "rows", "group_column", "event_types", "time_unit",
             "description"},
            {}};
  for (const FixtureInfo& fixture : Fixtures()) {
    list.push_back({{"name", fixture.name},
                    {"rows", fixture.rows},
                    {"group_column", fixture.group_column},
                    {"event_types", fixture.event_type_count},
                    {"time_unit", fixture.time_unit},
                    {"description", fixture.description}});
    rows.rows.push_back({std::string(fixture.name), absl::StrCat(fixture.rows),
                         std::string(fixture.group_column),
                         absl::StrCat(fixture.event_type_count),
                         std::string(fixture.time_unit),
                         plan.format == OutputFormat::kCsv
                             ? std::string("")
                             : std::string(fixture.description)});
  }
  if (plan.format == OutputFormat::kCsv) {
    rows.columns.pop_back();
    for (auto& row : rows.rows) row.pop_back();
  }
  Emit(plan, list, rows, std::nullopt, out);
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<CommandPlan> ParseArgs(std::span<const std::string> args) {
  CLI::App app{"Differentially private Kaplan-Meier survival analysis",
               "dpsurv"};
  app.require_subcommand(1);
  RawArgs raw;

  struct Analysis {
    Subcommand subcommand;
    const char* name;
    const char* description;
  };
  const Analysis analyses[] = {
      {Subcommand::kKm, "km", "Kaplan-Meier curve with Greenwood band"},
      {Subcommand::kMedian, "median", "Median survival with confidence interval"},
      {Subcommand::kLogrank, "logrank", "Two-group logrank test"},
      {Subcommand::kHazard, "hazard", "Nelson-Aalen cumulative hazard"},
      {Subcommand::kCumInc, "cuminc", "Competing-risk cumulative incidence"},
  };
  std::vector<std::pair<Subcommand, CLI::App*>> subs;
  std::map<CLI::App*, Options> options;
  for (const Analysis& a : analyses) {
    CLI::App* sub = app.add_subcommand(a.name, a.description);
    Options& opts = options[sub];
    AddInputOptions(sub, raw, opts);
    AddPrivacyOptions(sub, raw, opts);
    opts.time_scale = sub->add_option("--time-scale", raw.time_scale,
                                      "Multiply reported times by this factor");
    if (a.subcommand == Subcommand::kCumInc) {
      sub->add_option("--event-type", raw.event_type, "Event type of interest")
          ->required();
    }
    subs.emplace_back(a.subcommand, sub);
  }

  CLI::App* bench = app.add_subcommand(
      "bench", "Repeated seeded runs over fixtures, aggregated per epsilon");
  bench->add_option("--dataset", raw.bench_datasets, "Fixture names")
      ->delimiter(',')
      ->required();
  bench->add_option("--epsilons", raw.epsilons, "Privacy budgets")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--runs", raw.runs, "Runs per epsilon")->capture_default_str();
  bench->add_option("--base-seed", raw.base_seed, "Seed of run 0")
      ->capture_default_str();
  bench->add_option("--alpha", raw.alpha, "Significance / confidence level")
      ->capture_default_str();
  bench->add_option("--analyses", raw.analyses,
                    "Subset of km,median,logrank,cuminc,hazard")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--time-scale", raw.time_scale,
                    "Multiply reported median times by this factor");
  bench->add_option("--event-type", raw.event_type,
                    "Event type for the cuminc analysis");
  bench->add_option("--threads", raw.threads, "Worker threads")
      ->capture_default_str();
  bench->add_flag("--timing", raw.timing,
                  "Record wall-clock time per cell (output becomes "
                  "non-reproducible)");
  bench->add_option("--format", raw.format, "json, csv or table")
      ->check(CLI::IsMember({"json", "csv", "table"}))
      ->capture_default_str();
  bench->add_option("--export-dir", raw.export_dir,
                    "Also write <dataset>_exact.csv and <dataset>_eps<e>.csv "
                    "curve files here");
  bench->add_option("--curves", raw.curves, "Curve kind for --export-dir")
      ->check(CLI::IsMember({"km", "hazard", "cuminc"}))
      ->capture_default_str();

  CLI::App* datasets =
      app.add_subcommand("datasets", "List or print the bundled fixtures");
  datasets->add_option("action", raw.datasets_action, "list or export")
      ->check(CLI::IsMember({"list", "export"}))
      ->required();
  CLI::Option* datasets_name =
      datasets->add_option("--dataset", raw.dataset, "Fixture to export");
  datasets->add_option("--format", raw.format, "json, csv or table")
      ->check(CLI::IsMember({"json", "csv", "table"}))
      ->capture_default_str();

  CommandPlan plan;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto parsed = app.get_subcommands();
    plan.help_text = parsed.empty() ? app.help() : parsed.front()->help();
    return plan;
  } catch (const CLI::CallForAllHelp&) {
    plan.help_text = app.help("", CLI::AppFormatMode::All);
    return plan;
  } catch (const CLI::ParseError& e) {
    return Usage(e.what());
  }

  for (const auto& [subcommand, sub] : subs) {
    if (!sub->parsed()) continue;
    plan.subcommand = subcommand;
    if (subcommand == Subcommand::kCumInc) plan.event_type = raw.event_type;
    DPSURV_RETURN_IF_ERROR(FillAnalysisPlan(raw, options[sub], plan));
    if (subcommand == Subcommand::kLogrank &&
        !plan.schema.group_column.has_value()) {
      return Usage("logrank needs --group-col (or a two-group --dataset)");
    }
    if (subcommand == Subcommand::kCumInc && raw.event_type < 1) {
      return Usage("--event-type must be >= 1");
    }
    return plan;
  }
  if (bench->parsed()) {
    plan.subcommand = Subcommand::kBench;
    DPSURV_RETURN_IF_ERROR(FillBenchPlan(raw, plan));
    return plan;
  }
  plan.subcommand = Subcommand::kDatasets;
  plan.datasets_action = raw.datasets_action;
  DPSURV_ASSIGN_OR_RETURN(plan.format, ParseFormat(raw.format));
  if (plan.datasets_action == "export") {
    if (datasets_name->count() == 0) return Usage("export needs --dataset");
    if (FindFixture(raw.dataset) == nullptr) {
      return Usage(absl::StrCat("unknown fixture '", raw.dataset, "'"));
    }
    plan.dataset = raw.dataset;
  }
  return plan;
}

int Execute(const CommandPlan& plan, std::ostream& out, std::ostream& err) {
  if (plan.help_text.has_value()) {
    out << *plan.help_text;
    return kExitOk;
  }
  if (plan.epsilon.has_value()) {
    if (plan.seed_from_entropy) {
      err << "seed: " << *plan.seed << " (drawn from system entropy)\n";
    }
    err << "privacy: epsilon=" << FormatDouble(*plan.epsilon)
        << " (one-shot)\n";
  }
  if (plan.subcommand == Subcommand::kBench) {
    std::string budgets;
    for (double e : plan.experiment.epsilons) {
      budgets += (budgets.empty() ? "" : ",") + FormatDouble(e);
    }
    err << "privacy: experiment mode, every run is an independent release at "
           "epsilon in {"
        << budgets << "}\n";
  }

  absl::Status status;
  switch (plan.subcommand) {
    case Subcommand::kKm:
      status = RunSurvival(plan, out);
      break;
    case Subcommand::kMedian:
      status = RunMedian(plan, out);
      break;
    case Subcommand::kLogrank:
      status = RunLogrank(plan, out);
      break;
    case Subcommand::kHazard:
    case Subcommand::kCumInc:
      status = RunStepCurve(plan, out);
      break;
    case Subcommand::kBench:
      status = RunBench(plan, out);
      break;
    case Subcommand::kDatasets:
      status = RunDatasets(plan, out);
      break;
  }
  if (!status.ok()) {
    err << "error: " << status.message() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int RunCli(std::span<const std::string> args, std::ostream& out,
           std::ostream& err) {
  const absl::StatusOr<CommandPlan> plan = ParseArgs(args);
  if (!plan.ok()) {
    err << "usage error: " << plan.status().message() << "\n"
        << "run `dpsurv --help` for usage\n";
    return kExitUsage;
  }
  return Execute(*plan, out, err);
}

}  // namespace dpsurv::cli
