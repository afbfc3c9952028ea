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

#include "dpsurv/step_csv.h"

#include <cstddef>
#include <string>

#include "absl/strings/str_cat.h"
#include "dpsurv/numeric_format.h"

namespace dpsurv {

std::string StepFunctionCsv(std::span<const double> times,
                            std::span<const double> estimates,
                            const std::optional<DpProvenance>& provenance) {
  std::string out;
  if (provenance.has_value()) {
    absl::StrAppend(&out, ProvenanceHeader(*provenance), "\n");
  }
  out += "t,estimate\n";
  for (std::size_t j = 0; j < times.size() && j < estimates.size(); ++j) {
    absl::StrAppend(&out, FormatDouble(times[j]), ",",
                    FormatDouble(estimates[j]), "\n");
  }
  return out;
}

std::string SurvivalCurveCsv(const SurvivalCurve& curve,
                             const std::optional<DpProvenance>& provenance) {
  if (!curve.band.has_value()) {
    return StepFunctionCsv(curve.times, curve.survival, provenance);
  }
  std::string out;
  if (provenance.has_value()) {
    absl::StrAppend(&out, ProvenanceHeader(*provenance), "\n");
  }
  out += "t,estimate,lower,upper\n";
  for (std::size_t j = 0; j < curve.size(); ++j) {
    absl::StrAppend(&out, FormatDouble(curve.times[j]), ",",
                    FormatDouble(curve.survival[j]), ",",
                    FormatDouble(curve.band->lower[j]), ",",
                    FormatDouble(curve.band->upper[j]), "\n");
  }
  return out;
}

}  // namespace dpsurv
