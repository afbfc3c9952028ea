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

#ifndef DPSURV_ESTIMATORS_H_
#define DPSURV_ESTIMATORS_H_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dpsurv/dataset.h"
#include "dpsurv/event_table.h"

namespace dpsurv {

// Pointwise confidence band around a survival curve.
struct ConfidenceBand {
  double alpha = 0.05;
  std::vector<double> lower;
  std::vector<double> upper;
  // Greenwood variance per point; +inf once r_i == d_i has occurred.
  std::vector<double> variance;
  // Set at and after the first point whose variance is infinite. The band
  // there is [0, S(t_j)].
  std::vector<bool> degenerate;
};

// Right-continuous step function S(t), equal to 1 before the first point.
struct SurvivalCurve {
  std::vector<double> times;
  std::vector<double> survival;
  double n_total = 0.0;
  std::optional<ConfidenceBand> band;

  std::size_t size() const { return times.size(); }
  double At(double t) const;
};

// Cumulative hazard step function, 0 before the first point.
struct HazardCurve {
  std::vector<double> times;
  std::vector<double> cumulative_hazard;

  std::size_t size() const { return times.size(); }
  double At(double t) const;
};

// Cumulative incidence of one event type, 0 before the first point.
struct IncidenceCurve {
  int event_type = 1;
  std::vector<double> times;
  std::vector<double> incidence;

  std::size_t size() const { return times.size(); }
  double At(double t) const;
};

struct MedianEstimate {
  std::optional<double> median;
  std::optional<double> lower;
  std::optional<double> upper;
};

struct GroupTotals {
  double observed = 0.0;
  double expected = 0.0;
};

struct LogrankResult {
  // Standardized statistic sum(O_1j - E_1j) / sqrt(sum V_j).
  double z = 0.0;
  // z squared; compare against chi-square with one degree of freedom.
  double chi_square = 0.0;
  double p_value = 1.0;
  double variance = 0.0;
  std::array<GroupTotals, 2> groups;
};

// Product-limit estimate. Stops before the first row with r_j <= 0, so a
// repaired private table yields a curve no longer than the table.
SurvivalCurve KaplanMeier(const EventTable& table);

// Greenwood variance S(t_j)^2 * sum_{i<=j} d_i / (r_i (r_i - d_i)) for every
// point of `curve`, which must have been computed from `table`.
std::vector<double> GreenwoodVariance(const SurvivalCurve& curve,
                                      const EventTable& table);

// Linear pointwise band S +/- z_{1-alpha/2} sigma clipped to [0, 1].
absl::StatusOr<SurvivalCurve> GreenwoodBand(SurvivalCurve curve,
                                            const EventTable& table,
                                            double alpha);

// Median = first t_j with S <= 0.5; its CI bounds are the first t_j where the
// lower (resp. upper) band reaches 0.5. Requires a band.
absl::StatusOr<MedianEstimate> MedianSurvival(const SurvivalCurve& curve);

// Two-group logrank test. Both tables must share the same time grid (see
// BuildEventTableOnGrid and AlignToGrid). Points with pooled r_j <= 1 add no
// variance; points with pooled r_j <= 0 are skipped entirely.
absl::StatusOr<LogrankResult> Logrank(const EventTable& group1,
                                      const EventTable& group2);

// Logrank on raw groups: both risk sets are counted from the records on the
// pooled event-time grid. Needs exactly two groups (taken in map order).
absl::StatusOr<LogrankResult> ExactLogrank(
    const std::map<std::string, SurvivalDataset>& groups);

// Nelson-Aalen cumulative hazard sum_{i<=j} d_i / r_i, stopping before the
// first row with r_j <= 0.
HazardCurve NelsonAalen(const EventTable& table);

// Cumulative incidence of `event_type` against all-cause survival:
//   I_k(t_j) = sum_{i<=j} S(t_i-) d_ik / r_i
// evaluated at every all-cause event time (right-continuous).
absl::StatusOr<IncidenceCurve> CumulativeIncidence(const EventTable& table,
                                                   int event_type);
absl::StatusOr<IncidenceCurve> CumulativeIncidence(
    const SurvivalDataset& dataset, int event_type);

// sup_t |a(t) - b(t)| over the union of both curves' jump points.
double SupDistance(const SurvivalCurve& a, const SurvivalCurve& b);
double SupDistance(const HazardCurve& a, const HazardCurve& b);
double SupDistance(const IncidenceCurve& a, const IncidenceCurve& b);

}  // namespace dpsurv

#endif  // DPSURV_ESTIMATORS_H_
