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

#ifndef DPSURV_FIXTURES_H_
#define DPSURV_FIXTURES_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "dpsurv/dataset.h"

namespace dpsurv {

// A bundled clinical dataset under the data directory. Every fixture file
// has `time` and `status` columns; two-group fixtures add a group column.
struct FixtureInfo {
  std::string_view name;
  // Empty when the fixture has no comparison groups.
  std::string_view group_column;
  int event_type_count;
  std::string_view time_unit;
  std::size_t rows;
  std::string_view description;
};

std::span<const FixtureInfo> Fixtures();
const FixtureInfo* FindFixture(std::string_view name);

// $DPSURV_DATA_DIR when set, else the source tree's data/ directory.
std::string DataDirectory();
std::string FixturePath(const FixtureInfo& fixture);

SchemaConfig FixtureSchema(const FixtureInfo& fixture);

absl::StatusOr<SurvivalDataset> LoadFixture(std::string_view name);

}  // namespace dpsurv

#endif  // DPSURV_FIXTURES_H_
