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

#include "dpsurv/dp_mechanism.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "dpsurv/numeric_format.h"
#include "dpsurv/status_macros.h"

namespace dpsurv {

double Sensitivity() { return kSensitivity; }

absl::Status PrivacyParams::Validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "epsilon must be positive and finite, got ", FormatDouble(epsilon)));
  }
  if (!(sensitivity > 0.0) || !std::isfinite(sensitivity)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sensitivity must be positive and finite, got ",
                     FormatDouble(sensitivity)));
  }
  return absl::OkStatus();
}

absl::StatusOr<PartialMatrix> ExtractPartialMatrix(const EventTable& table) {
  if (table.size() == 0) {
    return absl::FailedPreconditionError(
        "no event times: nothing to privatize");
  }
  PartialMatrix matrix;
  matrix.r1 = table.at_risk[0];
  matrix.event_types = table.event_type_count();
  matrix.rows = table.size();
  matrix.events.reserve(matrix.rows *
                        static_cast<std::size_t>(matrix.event_types));
  for (const auto& column : table.events_by_type) {
    if (column.size() != matrix.rows) {
      return absl::InvalidArgumentError("event-type column length differs");
    }
    matrix.events.insert(matrix.events.end(), column.begin(), column.end());
  }
  return matrix;
}

absl::StatusOr<PartialMatrix> Perturb(const PartialMatrix& matrix,
                                      const PrivacyParams& params,
                                      NoiseSource& source) {
  DPSURV_RETURN_IF_ERROR(params.Validate());
  const double scale = params.scale();
  PartialMatrix noisy = matrix;
  DPSURV_ASSIGN_OR_RETURN(const double r1_noise, LaplaceSample(scale, source));
  noisy.r1 += r1_noise;
  for (double& entry : noisy.events) {
    DPSURV_ASSIGN_OR_RETURN(const double noise, LaplaceSample(scale, source));
    entry += noise;
  }
  return noisy;
}

absl::StatusOr<PartialMatrix> Perturb(const PartialMatrix& matrix,
                                      const PrivacyParams& params) {
  NoiseSource source(params.seed);
  return Perturb(matrix, params, source);
}

absl::StatusOr<EventTable> Reconstruct(const PartialMatrix& noisy,
                                       std::span<const double> times,
                                       const PrivacyParams& params) {
  if (times.size() != noisy.rows ||
      noisy.events.size() !=
          noisy.rows * static_cast<std::size_t>(noisy.event_types)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "partial matrix has ", noisy.rows, " rows but ", times.size(),
        " event times were given"));
  }
  EventTable table;
  table.times.assign(times.begin(), times.end());
  table.n_total = noisy.r1;
  table.provenance = params.provenance();
  table.events_by_type.resize(static_cast<std::size_t>(noisy.event_types));
  for (int type = 1; type <= noisy.event_types; ++type) {
    auto& column = table.events_by_type[static_cast<std::size_t>(type - 1)];
    for (std::size_t j = 0; j < noisy.rows; ++j) {
      column.push_back(noisy.event(type, j));
    }
  }
  double at_risk = noisy.r1;
  for (std::size_t j = 0; j < noisy.rows; ++j) {
    double events = 0.0;
    for (const auto& column : table.events_by_type) events += column[j];
    table.events.push_back(events);
    table.at_risk.push_back(at_risk);
    at_risk -= events;
  }
  return table;
}

EventTable Repair(const EventTable& table) {
  EventTable out;
  out.n_total = std::max(0.0, table.n_total);
  out.provenance = table.provenance;
  out.events_by_type.resize(table.events_by_type.size());

  double previous_at_risk = 0.0;
  for (std::size_t j = 0; j < table.size(); ++j) {
    double at_risk = std::max(0.0, table.at_risk[j]);
    if (j > 0) at_risk = std::min(at_risk, previous_at_risk);
    if (at_risk == 0.0) break;

    std::vector<double> typed;
    double events = 0.0;
    for (const auto& column : table.events_by_type) {
      typed.push_back(std::max(0.0, column[j]));
      events += typed.back();
    }
    if (events > at_risk) {
      const double shrink = events > 0.0 ? at_risk / events : 0.0;
      for (double& d : typed) d *= shrink;
      events = at_risk;
    }

    out.times.push_back(table.times[j]);
    out.at_risk.push_back(at_risk);
    out.events.push_back(events);
    for (std::size_t k = 0; k < typed.size(); ++k) {
      out.events_by_type[k].push_back(typed[k]);
    }
    // K = 1 keeps the single column bit-identical to the total.
    if (typed.size() == 1) out.events_by_type[0].back() = events;

    previous_at_risk = at_risk;
  }
  return out;
}

absl::StatusOr<EventTable> DpEventTable(const SurvivalDataset& dataset,
                                        const PrivacyParams& params,
                                        NoiseSource& source) {
  DPSURV_RETURN_IF_ERROR(params.Validate());
  const EventTable exact = BuildEventTable(dataset);
  DPSURV_ASSIGN_OR_RETURN(const PartialMatrix matrix,
                          ExtractPartialMatrix(exact));
  DPSURV_ASSIGN_OR_RETURN(const PartialMatrix noisy,
                          Perturb(matrix, params, source));
  DPSURV_ASSIGN_OR_RETURN(const EventTable completed,
                          Reconstruct(noisy, exact.times, params));
  return Repair(completed);
}

absl::StatusOr<EventTable> DpEventTable(const SurvivalDataset& dataset,
                                        const PrivacyParams& params) {
  NoiseSource source(params.seed);
  return DpEventTable(dataset, params, source);
}

std::uint64_t GroupSeed(std::uint64_t seed, std::string_view label) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const unsigned char c : label) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return seed ^ hash;
}

absl::StatusOr<LogrankResult> LogrankFromPrivateTables(
    const EventTable& group1, const EventTable& group2) {
  const EventTable both[] = {group1, group2};
  const std::vector<double> grid = PooledEventTimes(both);
  DPSURV_ASSIGN_OR_RETURN(const EventTable aligned1, AlignToGrid(group1, grid));
  DPSURV_ASSIGN_OR_RETURN(const EventTable aligned2, AlignToGrid(group2, grid));
  return Logrank(aligned1, aligned2);
}

absl::StatusOr<LogrankResult> DpLogrank(
    const std::map<std::string, SurvivalDataset>& groups,
    const PrivacyParams& params, const NoiseSourceFactory& factory) {
  if (groups.size() != 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("logrank compares exactly two groups, got ",
                     groups.size()));
  }
  std::vector<EventTable> tables;
  for (const auto& [label, dataset] : groups) {
    PrivacyParams group_params = params;
    group_params.seed = GroupSeed(params.seed, label);
    std::unique_ptr<NoiseSource> source =
        factory ? factory(group_params.seed)
                : std::make_unique<NoiseSource>(group_params.seed);
    DPSURV_ASSIGN_OR_RETURN(EventTable table,
                            DpEventTable(dataset, group_params, *source));
    tables.push_back(std::move(table));
  }
  return LogrankFromPrivateTables(tables[0], tables[1]);
}

absl::StatusOr<SurvivalCurve> DpKaplanMeier(const SurvivalDataset& dataset,
                                            const PrivacyParams& params) {
  DPSURV_ASSIGN_OR_RETURN(const EventTable table,
                          DpEventTable(dataset, params));
  return KaplanMeier(table);
}

absl::StatusOr<SurvivalCurve> DpGreenwood(const SurvivalDataset& dataset,
                                          const PrivacyParams& params,
                                          double alpha) {
  DPSURV_ASSIGN_OR_RETURN(const EventTable table,
                          DpEventTable(dataset, params));
  return GreenwoodBand(KaplanMeier(table), table, alpha);
}

absl::StatusOr<HazardCurve> DpNelsonAalen(const SurvivalDataset& dataset,
                                          const PrivacyParams& params) {
  DPSURV_ASSIGN_OR_RETURN(const EventTable table,
                          DpEventTable(dataset, params));
  return NelsonAalen(table);
}

absl::StatusOr<IncidenceCurve> DpCumulativeIncidence(
    const SurvivalDataset& dataset, const PrivacyParams& params,
    int event_type) {
  if (event_type < 1 || event_type > dataset.event_type_count()) {
    return absl::InvalidArgumentError(
        absl::StrCat("event type ", event_type, " outside [1, ",
                     dataset.event_type_count(), "]"));
  }
  DPSURV_ASSIGN_OR_RETURN(const EventTable table,
                          DpEventTable(dataset, params));
  return CumulativeIncidence(table, event_type);
}

}  // namespace dpsurv
