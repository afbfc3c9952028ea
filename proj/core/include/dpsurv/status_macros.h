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

#ifndef DPSURV_STATUS_MACROS_H_
#define DPSURV_STATUS_MACROS_H_

#include <utility>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define DPSURV_STATUS_CONCAT_INNER(a, b) a##b
#define DPSURV_STATUS_CONCAT(a, b) DPSURV_STATUS_CONCAT_INNER(a, b)

#define DPSURV_RETURN_IF_ERROR(expr)           \
  do {                                         \
    const ::absl::Status _dpsurv_st = (expr);  \
    if (!_dpsurv_st.ok()) return _dpsurv_st;   \
  } while (0)

#define DPSURV_ASSIGN_OR_RETURN_IMPL(tmp, lhs, rexpr) \
  auto tmp = (rexpr);                                 \
  if (!tmp.ok()) return tmp.status();                 \
  lhs = std::move(tmp).value()

#define DPSURV_ASSIGN_OR_RETURN(lhs, rexpr) \
  DPSURV_ASSIGN_OR_RETURN_IMPL(             \
      DPSURV_STATUS_CONCAT(_dpsurv_statusor_, __LINE__), lhs, rexpr)

#endif  // DPSURV_STATUS_MACROS_H_
