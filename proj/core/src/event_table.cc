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

#include "dpsurv/event_table.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "dpsurv/numeric_format.h"
#include "dpsurv/status_macros.h"
#include "string_view_bridge.h"

namespace dpsurv {
namespace {

std::vector<double> SortedTimes(const SurvivalDataset& dataset) {
  std::vector<double> times;
  times.reserve(dataset.size());
  for (const SubjectRecord& r : dataset.records()) times.push_back(r.time);
  std::sort(times.begin(), times.end());
  return times;
}

absl::Status CheckStrictlyIncreasing(std::span<const double> values,
                                     absl::string_view what) {
  for (std::size_t j = 1; j < values.size(); ++j) {
    if (!(values[j - 1] < values[j])) {
      return absl::InvalidArgumentError(
          absl::StrCat(what, " must be strictly increasing (index ", j, ")"));
    }
  }
  return absl::OkStatus();
}

absl::Status CheckShape(const EventTable& table) {
  const std::size_t k = table.size();
  if (table.events.size() != k || table.at_risk.size() != k) {
    return absl::InvalidArgumentError("column lengths differ");
  }
  if (table.events_by_type.empty()) {
    return absl::InvalidArgumentError("table has no event-type columns");
  }
  for (const auto& column : table.events_by_type) {
    if (column.size() != k) {
      return absl::InvalidArgumentError("event-type column length differs");
    }
  }
  return CheckStrictlyIncreasing(table.times, "times");
}

bool IsIntegral(double x) { return std::isfinite(x) && std::floor(x) == x; }

EventTable EmptyTable(double n_total, int event_types) {
  EventTable table;
  table.n_total = n_total;
  table.events_by_type.assign(static_cast<std::size_t>(event_types), {});
  return table;
}

}  // namespace

EventTable BuildEventTable(const SurvivalDataset& dataset) {
  std::vector<const SubjectRecord*> sorted;
  sorted.reserve(dataset.size());
  for (const SubjectRecord& r : dataset.records()) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const SubjectRecord* a, const SubjectRecord* b) {
                     return a->time < b->time;
                   });

  const int types = dataset.event_type_count();
  const double n = static_cast<double>(dataset.size());
  EventTable table = EmptyTable(n, types);
  std::size_t i = 0;
  while (i < sorted.size()) {
    const double t = sorted[i]->time;
    const std::size_t first = i;
    std::vector<double> by_type(static_cast<std::size_t>(types), 0.0);
    double events = 0.0;
    for (; i < sorted.size() && sorted[i]->time == t; ++i) {
      if (sorted[i]->status != kCensored) {
        by_type[static_cast<std::size_t>(sorted[i]->status - 1)] += 1.0;
        events += 1.0;
      }
    }
    if (events == 0.0) continue;
    table.times.push_back(t);
    table.events.push_back(events);
    table.at_risk.push_back(n - static_cast<double>(first));
    for (int k = 0; k < types; ++k) {
      table.events_by_type[static_cast<std::size_t>(k)].push_back(
          by_type[static_cast<std::size_t>(k)]);
    }
  }
  return table;
}

absl::StatusOr<EventTable> BuildEventTableOnGrid(const SurvivalDataset& dataset,
                                                 std::span<const double> grid) {
  DPSURV_RETURN_IF_ERROR(CheckStrictlyIncreasing(grid, "grid"));
  const EventTable own = BuildEventTable(dataset);
  for (double t : own.times) {
    if (!std::binary_search(grid.begin(), grid.end(), t)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "grid is missing event time ", FormatDouble(t)));
    }
  }
  const std::vector<double> times = SortedTimes(dataset);
  const int types = dataset.event_type_count();
  EventTable table = EmptyTable(static_cast<double>(dataset.size()), types);
  std::size_t row = 0;
  for (double t : grid) {
    const auto first = std::lower_bound(times.begin(), times.end(), t);
    table.times.push_back(t);
    table.at_risk.push_back(static_cast<double>(times.end() - first));
    if (row < own.size() && own.times[row] == t) {
      table.events.push_back(own.events[row]);
      for (int k = 0; k < types; ++k) {
        table.events_by_type[static_cast<std::size_t>(k)].push_back(
            own.events_by_type[static_cast<std::size_t>(k)][row]);
      }
      ++row;
    } else {
      table.events.push_back(0.0);
      for (auto& column : table.events_by_type) column.push_back(0.0);
    }
  }
  return table;
}

std::vector<double> PooledEventTimes(std::span<const EventTable> tables) {
  std::vector<double> pooled;
  for (const EventTable& table : tables) {
    pooled.insert(pooled.end(), table.times.begin(), table.times.end());
  }
  std::sort(pooled.begin(), pooled.end());
  pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());
  return pooled;
}

absl::StatusOr<EventTable> AlignToGrid(const EventTable& table,
                                       std::span<const double> grid) {
  DPSURV_RETURN_IF_ERROR(CheckShape(table));
  DPSURV_RETURN_IF_ERROR(CheckStrictlyIncreasing(grid, "grid"));
  EventTable out = EmptyTable(table.n_total, table.event_type_count());
  out.provenance = table.provenance;

  const std::size_t k = table.size();
  double carried = k > 0 ? table.at_risk[0] : table.n_total;
  std::size_t row = 0;
  for (double t : grid) {
    if (row < k && table.times[row] < t) {
      return absl::InvalidArgumentError(absl::StrCat(
          "grid is missing table time ", FormatDouble(table.times[row])));
    }
    out.times.push_back(t);
    if (row < k && table.times[row] == t) {
      out.events.push_back(table.events[row]);
      out.at_risk.push_back(table.at_risk[row]);
      for (std::size_t type = 0; type < table.events_by_type.size(); ++type) {
        out.events_by_type[type].push_back(table.events_by_type[type][row]);
      }
      carried = std::max(0.0, table.at_risk[row] - table.events[row]);
      ++row;
    } else {
      out.events.push_back(0.0);
      out.at_risk.push_back(carried);
      for (auto& column : out.events_by_type) column.push_back(0.0);
    }
  }
  if (row < k) {
    return absl::InvalidArgumentError(absl::StrCat(
        "grid is missing table time ", FormatDouble(table.times[row])));
  }
  return out;
}

absl::Status CheckExactInvariants(const EventTable& table) {
  DPSURV_RETURN_IF_ERROR(CheckShape(table));
  if (table.is_private()) {
    return absl::InvalidArgumentError("table is private, not exact");
  }
  for (std::size_t j = 0; j < table.size(); ++j) {
    const double d = table.events[j];
    const double r = table.at_risk[j];
    if (!IsIntegral(d) || !IsIntegral(r)) {
      return absl::InvalidArgumentError(
          absl::StrCat("non-integral count at row ", j));
    }
    if (d < 1.0) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", j, " has no events"));
    }
    if (d > r) {
      return absl::InvalidArgumentError(
          absl::StrCat("events exceed at-risk at row ", j));
    }
    if (j > 0 && r > table.at_risk[j - 1]) {
      return absl::InvalidArgumentError(
          absl::StrCat("at-risk increases at row ", j));
    }
    double sum = 0.0;
    for (const auto& column : table.events_by_type) sum += column[j];
    if (sum != d) {
      return absl::InvalidArgumentError(
          absl::StrCat("per-type events do not sum to total at row ", j));
    }
  }
  if (table.size() > 0 && table.at_risk[0] > table.n_total) {
    return absl::InvalidArgumentError("r_1 exceeds n_total");
  }
  return absl::OkStatus();
}

absl::Status CheckRepairedInvariants(const EventTable& table) {
  DPSURV_RETURN_IF_ERROR(CheckShape(table));
  for (std::size_t j = 0; j < table.size(); ++j) {
    const double d = table.events[j];
    const double r = table.at_risk[j];
    if (!(d >= 0.0) || !(r >= 0.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("negative count at row ", j));
    }
    if (d > r) {
      return absl::InvalidArgumentError(
          absl::StrCat("events exceed at-risk at row ", j));
    }
    if (j > 0 && r > table.at_risk[j - 1]) {
      return absl::InvalidArgumentError(
          absl::StrCat("at-risk increases at row ", j));
    }
    if (r == 0.0 && j + 1 != table.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("rows continue after zero at-risk at row ", j));
    }
    for (const auto& column : table.events_by_type) {
      if (!(column[j] >= 0.0)) {
        return absl::InvalidArgumentError(
            absl::StrCat("negative per-type count at row ", j));
      }
    }
  }
  return absl::OkStatus();
}

std::string ProvenanceHeader(const DpProvenance& provenance) {
  return absl::StrCat("# dp epsilon=", FormatDouble(provenance.epsilon),
                      " seed=", provenance.seed,
                      " sensitivity=", FormatDouble(provenance.sensitivity));
}

std::string WriteEventTableCsv(const EventTable& table) {
  const int types = table.event_type_count();
  std::string out = table.provenance.has_value()
                        ? ProvenanceHeader(*table.provenance)
                        : std::string("# exact");
  absl::StrAppend(&out, "\n# n_total=", FormatDouble(table.n_total),
                  " event_types=", types, "\ntime,events,at_risk");
  if (types > 1) {
    for (int k = 1; k <= types; ++k) absl::StrAppend(&out, ",events_", k);
  }
  out += '\n';
  for (std::size_t j = 0; j < table.size(); ++j) {
    absl::StrAppend(&out, FormatDouble(table.times[j]), ",",
                    FormatDouble(table.events[j]), ",",
                    FormatDouble(table.at_risk[j]));
    if (types > 1) {
      for (const auto& column : table.events_by_type) {
        absl::StrAppend(&out, ",", FormatDouble(column[j]));
      }
    }
    out += '\n';
  }
  return out;
}

namespace {

// Parses "key=value" tokens following a fixed prefix.
absl::StatusOr<std::map<std::string, std::string>> ParseKeyValues(
    absl::string_view line) {
  std::map<std::string, std::string> out;
  for (absl::string_view token :
       absl::StrSplit(line, ' ', absl::SkipWhitespace())) {
    const std::vector<absl::string_view> kv = absl::StrSplit(token, '=');
    if (kv.size() != 2) {
      return absl::InvalidArgumentError(
          absl::StrCat("malformed header token '", token, "'"));
    }
    out[std::string(kv[0])] = std::string(kv[1]);
  }
  return out;
}

absl::StatusOr<std::string> Lookup(
    const std::map<std::string, std::string>& values, const std::string& key) {
  const auto it = values.find(key);
  if (it == values.end()) {
    return absl::InvalidArgumentError(
        absl::StrCat("header is missing '", key, "'"));
  }
  return it->second;
}

}  // namespace

absl::StatusOr<EventTable> ReadEventTableCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    return absl::InvalidArgumentError("missing provenance line");
  }
  EventTable table;
  absl::string_view provenance = absl::StripTrailingAsciiWhitespace(line);
  if (provenance == "# exact") {
    // exact table
  } else if (absl::ConsumePrefix(&provenance, "# dp ")) {
    DPSURV_ASSIGN_OR_RETURN(const auto values, ParseKeyValues(provenance));
    DpProvenance dp;
    DPSURV_ASSIGN_OR_RETURN(const std::string eps, Lookup(values, "epsilon"));
    DPSURV_ASSIGN_OR_RETURN(dp.epsilon, ParseDouble(eps));
    DPSURV_ASSIGN_OR_RETURN(const std::string seed, Lookup(values, "seed"));
    if (!absl::SimpleAtoi(seed, &dp.seed)) {
      return absl::InvalidArgumentError("bad seed in provenance line");
    }
    DPSURV_ASSIGN_OR_RETURN(const std::string sens,
                            Lookup(values, "sensitivity"));
    DPSURV_ASSIGN_OR_RETURN(dp.sensitivity, ParseDouble(sens));
    table.provenance = dp;
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat("unrecognized provenance line '", line, "'"));
  }

  if (!std::getline(in, line)) {
    return absl::InvalidArgumentError("missing n_total line");
  }
  absl::string_view meta = absl::StripTrailingAsciiWhitespace(line);
  if (!absl::ConsumePrefix(&meta, "# ")) {
    return absl::InvalidArgumentError("malformed n_total line");
  }
  DPSURV_ASSIGN_OR_RETURN(const auto values, ParseKeyValues(meta));
  DPSURV_ASSIGN_OR_RETURN(const std::string n_total, Lookup(values, "n_total"));
  DPSURV_ASSIGN_OR_RETURN(table.n_total, ParseDouble(n_total));
  DPSURV_ASSIGN_OR_RETURN(const std::string types_text,
                          Lookup(values, "event_types"));
  int types = 0;
  if (!absl::SimpleAtoi(types_text, &types) || types < 1) {
    return absl::InvalidArgumentError("bad event_types");
  }
  table.events_by_type.assign(static_cast<std::size_t>(types), {});

  if (!std::getline(in, line)) {
    return absl::InvalidArgumentError("missing column header");
  }
  std::string expected_header = "time,events,at_risk";
  if (types > 1) {
    for (int k = 1; k <= types; ++k) absl::StrAppend(&expected_header, ",events_", k);
  }
  if (absl::StripAsciiWhitespace(line) != expected_header) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected column header '", expected_header, "'"));
  }
  const std::size_t columns = types > 1 ? 3 + static_cast<std::size_t>(types)
                                        : 3;
  std::size_t line_number = 3;
  while (std::getline(in, line)) {
    ++line_number;
    const absl::string_view row = absl::StripAsciiWhitespace(line);
    if (row.empty()) continue;
    const std::vector<absl::string_view> fields = absl::StrSplit(row, ',');
    if (fields.size() != columns) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_number, ": expected ", columns,
                       " fields"));
    }
    std::vector<double> values_row;
    for (absl::string_view field : fields) {
      DPSURV_ASSIGN_OR_RETURN(const double v, ParseDouble(ToStd(field)));
      values_row.push_back(v);
    }
    table.times.push_back(values_row[0]);
    table.events.push_back(values_row[1]);
    table.at_risk.push_back(values_row[2]);
    if (types > 1) {
      for (int k = 0; k < types; ++k) {
        table.events_by_type[static_cast<std::size_t>(k)].push_back(
            values_row[3 + static_cast<std::size_t>(k)]);
      }
    } else {
      table.events_by_type[0].push_back(values_row[1]);
    }
  }
  DPSURV_RETURN_IF_ERROR(CheckShape(table));
  return table;
}

}  // namespace dpsurv
