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

#include "dpsurv/estimators.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "dpsurv/distributions.h"
#include "dpsurv/numeric_format.h"
#include "dpsurv/status_macros.h"

namespace dpsurv {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Value of a right-continuous step function at t; `before` ahead of the
// first jump.
double StepAt(std::span<const double> times, std::span<const double> values,
              double before, double t) {
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return before;
  return values[static_cast<std::size_t>(it - times.begin()) - 1];
}

template <typename Curve>
double StepSupDistance(const Curve& a, const Curve& b) {
  std::vector<double> grid(a.times.begin(), a.times.end());
  grid.insert(grid.end(), b.times.begin(), b.times.end());
  double sup = 0.0;
  for (double t : grid) sup = std::max(sup, std::abs(a.At(t) - b.At(t)));
  return sup;
}

}  // namespace

double SurvivalCurve::At(double t) const {
  return StepAt(times, survival, 1.0, t);
}

double HazardCurve::At(double t) const {
  return StepAt(times, cumulative_hazard, 0.0, t);
}

double IncidenceCurve::At(double t) const {
  return StepAt(times, incidence, 0.0, t);
}

SurvivalCurve KaplanMeier(const EventTable& table) {
  SurvivalCurve curve;
  curve.n_total = table.n_total;
  double survival = 1.0;
  for (std::size_t j = 0; j < table.size(); ++j) {
    const double r = table.at_risk[j];
    if (!(r > 0.0)) break;
    survival *= (r - table.events[j]) / r;
    curve.times.push_back(table.times[j]);
    curve.survival.push_back(survival);
  }
  return curve;
}

std::vector<double> GreenwoodVariance(const SurvivalCurve& curve,
                                      const EventTable& table) {
  std::vector<double> variance;
  variance.reserve(curve.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < curve.size() && j < table.size(); ++j) {
    const double r = table.at_risk[j];
    const double d = table.events[j];
    if (r - d <= 0.0) {
      sum = kInf;
    } else if (sum != kInf) {
      sum += d / (r * (r - d));
    }
    const double s = curve.survival[j];
    variance.push_back(sum == kInf ? kInf : s * s * sum);
  }
  return variance;
}

absl::StatusOr<SurvivalCurve> GreenwoodBand(SurvivalCurve curve,
                                            const EventTable& table,
                                            double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha must lie in (0, 1), got ", FormatDouble(alpha)));
  }
  if (curve.size() > table.size()) {
    return absl::InvalidArgumentError("curve is longer than its table");
  }
  const double z = NormalQuantile(1.0 - alpha / 2.0);
  ConfidenceBand band;
  band.alpha = alpha;
  band.variance = GreenwoodVariance(curve, table);
  for (std::size_t j = 0; j < curve.size(); ++j) {
    const double s = curve.survival[j];
    const double var = band.variance[j];
    if (var == kInf) {
      band.lower.push_back(0.0);
      band.upper.push_back(s);
      band.degenerate.push_back(true);
      continue;
    }
    const double half_width = z * std::sqrt(var);
    band.lower.push_back(std::clamp(s - half_width, 0.0, 1.0));
    band.upper.push_back(std::clamp(s + half_width, 0.0, 1.0));
    band.degenerate.push_back(false);
  }
  curve.band = std::move(band);
  return curve;
}

absl::StatusOr<MedianEstimate> MedianSurvival(const SurvivalCurve& curve) {
  if (!curve.band.has_value()) {
    return absl::FailedPreconditionError(
        "median survival needs a confidence band (see GreenwoodBand)");
  }
  const ConfidenceBand& band = *curve.band;
  MedianEstimate estimate;
  for (std::size_t j = 0; j < curve.size(); ++j) {
    const double t = curve.times[j];
    if (!estimate.median && curve.survival[j] <= 0.5) estimate.median = t;
    if (!estimate.lower && band.lower[j] <= 0.5) estimate.lower = t;
    if (!estimate.upper && band.upper[j] <= 0.5) estimate.upper = t;
  }
  return estimate;
}

absl::StatusOr<LogrankResult> Logrank(const EventTable& group1,
                                      const EventTable& group2) {
  if (group1.times != group2.times || group1.events.size() != group1.size() ||
      group2.events.size() != group2.size() ||
      group1.at_risk.size() != group1.size() ||
      group2.at_risk.size() != group2.size()) {
    return absl::InvalidArgumentError(
        "logrank tables must share one time grid");
  }
  LogrankResult result;
  double total_events = 0.0;
  for (std::size_t j = 0; j < group1.size(); ++j) {
    const double r1 = group1.at_risk[j];
    const double r2 = group2.at_risk[j];
    const double d1 = group1.events[j];
    const double d2 = group2.events[j];
    const double r = r1 + r2;
    const double d = d1 + d2;
    total_events += d;
    if (!(r > 0.0)) continue;
    result.groups[0].observed += d1;
    result.groups[1].observed += d2;
    result.groups[0].expected += d * r1 / r;
    result.groups[1].expected += d * r2 / r;
    if (r > 1.0) {
      result.variance += r1 * r2 * d * (r - d) / (r * r * (r - 1.0));
    }
  }
  if (total_events <= 0.0) {
    return absl::FailedPreconditionError(
        "logrank statistic undefined: neither group has events");
  }
  if (!(result.variance > 0.0)) {
    return absl::FailedPreconditionError(
        "logrank statistic undefined: zero variance");
  }
  result.z = (result.groups[0].observed - result.groups[0].expected) /
             std::sqrt(result.variance);
  result.chi_square = result.z * result.z;
  result.p_value = ChiSquare1UpperTail(result.chi_square);
  return result;
}

absl::StatusOr<LogrankResult> ExactLogrank(
    const std::map<std::string, SurvivalDataset>& groups) {
  if (groups.size() != 2) {
    return absl::FailedPreconditionError(absl::StrCat(
        "logrank compares exactly two groups, found ", groups.size()));
  }
  std::vector<EventTable> own;
  for (const auto& [label, part] : groups) own.push_back(BuildEventTable(part));
  const std::vector<double> grid = PooledEventTimes(own);
  std::vector<EventTable> aligned;
  for (const auto& [label, part] : groups) {
    DPSURV_ASSIGN_OR_RETURN(EventTable table, BuildEventTableOnGrid(part, grid));
    aligned.push_back(std::move(table));
  }
  return Logrank(aligned[0], aligned[1]);
}

HazardCurve NelsonAalen(const EventTable& table) {
  HazardCurve curve;
  double hazard = 0.0;
  for (std::size_t j = 0; j < table.size(); ++j) {
    const double r = table.at_risk[j];
    if (!(r > 0.0)) break;
    hazard += table.events[j] / r;
    curve.times.push_back(table.times[j]);
    curve.cumulative_hazard.push_back(hazard);
  }
  return curve;
}

absl::StatusOr<IncidenceCurve> CumulativeIncidence(const EventTable& table,
                                                   int event_type) {
  if (event_type < 1 || event_type > table.event_type_count()) {
    return absl::InvalidArgumentError(
        absl::StrCat("event type ", event_type, " outside [1, ",
                     table.event_type_count(), "]"));
  }
  const std::vector<double>& typed =
      table.events_by_type[static_cast<std::size_t>(event_type - 1)];
  if (typed.size() != table.size()) {
    return absl::InvalidArgumentError("event-type column length differs");
  }
  IncidenceCurve curve;
  curve.event_type = event_type;
  double survival = 1.0;  // all-cause S(t_j-)
  double incidence = 0.0;
  for (std::size_t j = 0; j < table.size(); ++j) {
    const double r = table.at_risk[j];
    if (!(r > 0.0)) break;
    incidence += survival * typed[j] / r;
    survival *= (r - table.events[j]) / r;
    curve.times.push_back(table.times[j]);
    curve.incidence.push_back(incidence);
  }
  return curve;
}

absl::StatusOr<IncidenceCurve> CumulativeIncidence(
    const SurvivalDataset& dataset, int event_type) {
  return CumulativeIncidence(BuildEventTable(dataset), event_type);
}

double SupDistance(const SurvivalCurve& a, const SurvivalCurve& b) {
  return StepSupDistance(a, b);
}
double SupDistance(const HazardCurve& a, const HazardCurve& b) {
  return StepSupDistance(a, b);
}
double SupDistance(const IncidenceCurve& a, const IncidenceCurve& b) {
  return StepSupDistance(a, b);
}

}  // namespace dpsurv
