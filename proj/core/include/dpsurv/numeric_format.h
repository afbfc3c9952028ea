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

#ifndef DPSURV_NUMERIC_FORMAT_H_
#define DPSURV_NUMERIC_FORMAT_H_

#include <string>
#include <string_view>

#include "absl/status/statusor.h"

namespace dpsurv {

// Shortest decimal text that parses back to exactly `value`. Infinities and
// NaN are written as "inf", "-inf" and "nan".
std::string FormatDouble(double value);

// Parses a complete decimal real; surrounding blanks are ignored.
absl::StatusOr<double> ParseDouble(std::string_view text);

}  // namespace dpsurv

#endif  // DPSURV_NUMERIC_FORMAT_H_
