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

#include "dpsurv/fixtures.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <string>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "string_view_bridge.h"

#ifndef DPSURV_DEFAULT_DATA_DIR
#define DPSURV_DEFAULT_DATA_DIR "data"
#endif

namespace dpsurv {
namespace {

constexpr FixtureInfo kFixtures[] = {
    {"cancer", "sex", 1, "days", 228,
     "NCCTG advanced lung cancer; groups: sex (1 = male, 2 = female)"},
    {"gehan", "treat", 1, "weeks", 42,
     "Gehan leukemia remission trial; groups: 6-MP vs control"},
    {"kidney", "sex", 1, "days", 76,
     "Kidney catheter infection recurrence; groups: sex (1 = male, 2 = "
     "female)"},
    {"leukemia", "maintained", 1, "weeks", 23,
     "Acute myelogenous leukemia; groups: maintenance chemotherapy or not"},
    {"mgus", "sex", 1, "months", 1384,
     "Monoclonal gammopathy natural history (mgus2); groups: sex"},
    {"myeloid", "trt", 1, "days", 646,
     "Acute myeloid leukemia trial; groups: treatment arm A vs B"},
    {"ovarian", "rx", 1, "days", 26,
     "Ovarian cancer randomized trial; groups: treatment 1 vs 2"},
    {"stanford", "age_group", 1, "days", 184,
     "Stanford heart transplant (stanford2); groups: age above/below median"},
    {"veteran", "trt", 1, "days", 137,
     "Veterans' lung cancer trial; groups: treatment 1 vs 2"},
    {"pbc", "", 2, "days", 418,
     "Primary biliary cirrhosis; status 1 = transplant, 2 = death"},
    {"transplant", "", 2, "days", 815,
     "Liver transplant waiting list; status 1 = transplant, 2 = death"},
};

}  // namespace

std::span<const FixtureInfo> Fixtures() { return kFixtures; }

const FixtureInfo* FindFixture(std::string_view name) {
  const auto it = std::find_if(
      std::begin(kFixtures), std::end(kFixtures),
      [name](const FixtureInfo& f) { return f.name == name; });
  return it == std::end(kFixtures) ? nullptr : &*it;
}

std::string DataDirectory() {
  if (const char* env = std::getenv("DPSURV_DATA_DIR");
      env != nullptr && *env != '\0') {
    return env;
  }
  return DPSURV_DEFAULT_DATA_DIR;
}

std::string FixturePath(const FixtureInfo& fixture) {
  return absl::StrCat(DataDirectory(), "/", ToAbsl(fixture.name), ".csv");
}

SchemaConfig FixtureSchema(const FixtureInfo& fixture) {
  SchemaConfig schema;
  schema.event_type_count = fixture.event_type_count;
  if (!fixture.group_column.empty()) {
    schema.group_column = std::string(fixture.group_column);
  }
  return schema;
}

absl::StatusOr<SurvivalDataset> LoadFixture(std::string_view name) {
  const FixtureInfo* fixture = FindFixture(name);
  if (fixture == nullptr) {
    return absl::NotFoundError(absl::StrCat("unknown fixture '", ToAbsl(name), "'"));
  }
  const std::string path = FixturePath(*fixture);
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open ", path));
  }
  return ParseDataset(in, FixtureSchema(*fixture), std::string(fixture->name),
                      std::string(fixture->time_unit));
}

}  // namespace dpsurv
