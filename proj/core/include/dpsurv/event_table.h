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

#ifndef DPSURV_EVENT_TABLE_H_
#define DPSURV_EVENT_TABLE_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpsurv/dataset.h"

namespace dpsurv {

// Parameters of the Laplace release that produced a table.
struct DpProvenance {
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  double sensitivity = 0.0;

  bool operator==(const DpProvenance&) const = default;
};

// Distinct event times with their event and at-risk counts. Every estimator
// consumes this type and nothing else, so the same code serves exact tables
// and privatized ones.
//
// Exact tables hold integers; privatized tables hold reals. `events` is the
// all-cause count d_j and `events_by_type[k - 1][j]` the count of type k, with
// `events_by_type.size()` equal to the dataset's K (for K = 1 it mirrors
// `events`).
struct EventTable {
  std::vector<double> times;
  std::vector<double> events;
  std::vector<std::vector<double>> events_by_type;
  std::vector<double> at_risk;
  double n_total = 0.0;
  // Unset for exact tables.
  std::optional<DpProvenance> provenance;

  std::size_t size() const { return times.size(); }
  int event_type_count() const {
    return static_cast<int>(events_by_type.size());
  }
  bool is_private() const { return provenance.has_value(); }

  bool operator==(const EventTable&) const = default;
};

// Risk-set construction: one row per distinct time with at least one event;
// r_j counts records with time >= t_j, so a subject censored at an event time
// is still at risk there.
EventTable BuildEventTable(const SurvivalDataset& dataset);

// Same counting rule evaluated on a caller-supplied strictly increasing grid.
// Rows may carry zero events. Used to put two groups on a pooled grid.
absl::StatusOr<EventTable> BuildEventTableOnGrid(const SurvivalDataset& dataset,
                                                 std::span<const double> grid);

// Sorted union of the tables' event times.
std::vector<double> PooledEventTimes(std::span<const EventTable> tables);

// Re-expresses a table on `grid` (which must contain all of the table's
// times). At grid points the table has no row for, events are zero and the
// at-risk count is carried forward: r_1 before the first row, r_j - d_j after
// row j. Without the raw data this is the only risk set available, and it
// matches the exact one when there is no censoring.
absl::StatusOr<EventTable> AlignToGrid(const EventTable& table,
                                       std::span<const double> grid);

// Structural checks. Exact: integral counts, 1 <= d_j <= r_j, r
// non-increasing, r_1 <= n_total, strictly increasing times. Repaired:
// 0 <= d_j <= r_j, r_j >= 0, r non-increasing, nothing after the first zero.
absl::Status CheckExactInvariants(const EventTable& table);
absl::Status CheckRepairedInvariants(const EventTable& table);

// CSV form:
//   # exact                                  (or: # dp epsilon=<e> seed=<s> sensitivity=<S>)
//   # n_total=<n> event_types=<K>
//   time,events,at_risk[,events_1,...,events_K]   (per-type columns only when K > 1)
// Reals use the shortest round-trip representation.
std::string WriteEventTableCsv(const EventTable& table);
absl::StatusOr<EventTable> ReadEventTableCsv(std::istream& in);

// "# dp epsilon=<e> seed=<s> sensitivity=<S>"
std::string ProvenanceHeader(const DpProvenance& provenance);

}  // namespace dpsurv

#endif  // DPSURV_EVENT_TABLE_H_
