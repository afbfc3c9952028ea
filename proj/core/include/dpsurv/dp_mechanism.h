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

#ifndef DPSURV_DP_MECHANISM_H_
#define DPSURV_DP_MECHANISM_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpsurv/dataset.h"
#include "dpsurv/estimators.h"
#include "dpsurv/event_table.h"
#include "dpsurv/noise.h"

namespace dpsurv {

// L1 sensitivity of the partial matrix [r_1, d_1, ..., d_k]: one individual
// contributes at most one at-risk membership and one event.
inline constexpr double kSensitivity = 2.0;

double Sensitivity();

struct PrivacyParams {
  // Pure epsilon-DP; there is no delta knob.
  static constexpr double kDelta = 0.0;

  double epsilon = 1.0;
  std::uint64_t seed = 0;
  double sensitivity = kSensitivity;

  // Laplace scale sensitivity / epsilon.
  double scale() const { return sensitivity / epsilon; }
  DpProvenance provenance() const { return {epsilon, seed, sensitivity}; }

  absl::Status Validate() const;
};

// The quantities that get noised: the at-risk count at the first event time
// and every event count. With K event types the events are stored one column
// per type, column-major: type k, row j lives at (k - 1) * rows + j.
struct PartialMatrix {
  double r1 = 0.0;
  int event_types = 1;
  std::size_t rows = 0;
  std::vector<double> events;

  double event(int type, std::size_t row) const {
    return events[static_cast<std::size_t>(type - 1) * rows + row];
  }
  // r1 plus every event entry.
  std::size_t entry_count() const { return 1 + events.size(); }
};

// Fails for a table without rows (nothing to privatize).
absl::StatusOr<PartialMatrix> ExtractPartialMatrix(const EventTable& table);

// Adds independent Laplace(sensitivity / epsilon) noise to every entry, drawn
// in the order r1, then events in storage order.
absl::StatusOr<PartialMatrix> Perturb(const PartialMatrix& matrix,
                                      const PrivacyParams& params,
                                      NoiseSource& source);
absl::StatusOr<PartialMatrix> Perturb(const PartialMatrix& matrix,
                                      const PrivacyParams& params);

// Completes the noisy matrix into a table: r'_1 is the noisy r1 and
// r'_j = r'_{j-1} - d'_{j-1} (d' summed over types). Censored withdrawals
// between event times are not subtracted. The result is not yet repaired.
absl::StatusOr<EventTable> Reconstruct(const PartialMatrix& noisy,
                                       std::span<const double> times,
                                       const PrivacyParams& params);

// Post-processing that restores table integrity:
//   1. negative event counts (per type) become 0;
//   2. negative at-risk counts become 0;
//   3. at-risk counts are made non-increasing by a running minimum;
//   4. the first row whose at-risk count is zero, and every row after it,
//      is dropped;
//   5. event counts are capped at the at-risk count (per-type counts scaled
//      down proportionally).
EventTable Repair(const EventTable& table);

// Extract -> Perturb -> Reconstruct -> Repair. The event-time grid is taken
// from the data as is.
absl::StatusOr<EventTable> DpEventTable(const SurvivalDataset& dataset,
                                        const PrivacyParams& params,
                                        NoiseSource& source);
absl::StatusOr<EventTable> DpEventTable(const SurvivalDataset& dataset,
                                        const PrivacyParams& params);

// Seed for a group's release: seed XOR FNV-1a(label).
std::uint64_t GroupSeed(std::uint64_t seed, std::string_view label);

using NoiseSourceFactory =
    std::function<std::unique_ptr<NoiseSource>(std::uint64_t seed)>;

// Logrank on two already-privatized tables: align both on their pooled grid
// with AlignToGrid, then run Logrank.
absl::StatusOr<LogrankResult> LogrankFromPrivateTables(const EventTable& group1,
                                                       const EventTable& group2);

// One release per group (groups are disjoint, so the total cost stays
// epsilon), seeded with GroupSeed(params.seed, label). Groups are taken in
// map order. `factory` defaults to plain NoiseSource.
absl::StatusOr<LogrankResult> DpLogrank(
    const std::map<std::string, SurvivalDataset>& groups,
    const PrivacyParams& params, const NoiseSourceFactory& factory = {});

// Convenience wrappers: one DpEventTable, then the matching estimator.
absl::StatusOr<SurvivalCurve> DpKaplanMeier(const SurvivalDataset& dataset,
                                            const PrivacyParams& params);
absl::StatusOr<SurvivalCurve> DpGreenwood(const SurvivalDataset& dataset,
                                          const PrivacyParams& params,
                                          double alpha);
absl::StatusOr<HazardCurve> DpNelsonAalen(const SurvivalDataset& dataset,
                                          const PrivacyParams& params);
absl::StatusOr<IncidenceCurve> DpCumulativeIncidence(
    const SurvivalDataset& dataset, const PrivacyParams& params,
    int event_type);

}  // namespace dpsurv

#endif  // DPSURV_DP_MECHANISM_H_
