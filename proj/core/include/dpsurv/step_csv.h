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

#ifndef DPSURV_STEP_CSV_H_
#define DPSURV_STEP_CSV_H_

#include <optional>
#include <span>
#include <string>

#include "dpsurv/estimators.h"
#include "dpsurv/event_table.h"

namespace dpsurv {

// `t,estimate` rows, optionally `,lower,upper`, preceded by the provenance
// header line when the values came from a private table.
std::string StepFunctionCsv(std::span<const double> times,
                            std::span<const double> estimates,
                            const std::optional<DpProvenance>& provenance);
std::string SurvivalCurveCsv(const SurvivalCurve& curve,
                             const std::optional<DpProvenance>& provenance);

}  // namespace dpsurv

#endif  // DPSURV_STEP_CSV_H_
