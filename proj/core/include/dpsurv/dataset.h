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

#ifndef DPSURV_DATASET_H_
#define DPSURV_DATASET_H_

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"

namespace dpsurv {

// Status code of a censored observation. Codes 1..K name event types.
inline constexpr int kCensored = 0;

struct SubjectRecord {
  double time = 0.0;
  int status = kCensored;
  std::optional<std::string> group;
};

// An immutable, validated cohort of time-to-event records.
class SurvivalDataset {
 public:
  // Fails unless there is at least one record, every time is finite and
  // nonnegative, and every status lies in [0, event_type_count].
  static absl::StatusOr<SurvivalDataset> Create(
      std::vector<SubjectRecord> records, int event_type_count = 1,
      std::string name = "", std::string time_unit = "");

  const std::vector<SubjectRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  int event_type_count() const { return event_type_count_; }
  const std::string& name() const { return name_; }
  const std::string& time_unit() const { return time_unit_; }

  // True when every record carries a group label.
  bool has_groups() const;

 private:
  SurvivalDataset() = default;

  std::vector<SubjectRecord> records_;
  int event_type_count_ = 1;
  std::string name_;
  std::string time_unit_;
};

// Describes how CSV columns map onto SubjectRecord fields.
struct SchemaConfig {
  // Sentinel for `event_type_count`: take K from the largest status code.
  static constexpr int kInferEventTypes = 0;

  std::string time_column = "time";
  std::string status_column = "status";
  std::optional<std::string> group_column;
  int event_type_count = 1;
  // Raw status text -> code. When empty, raw values are read as integer codes.
  std::map<std::string, int> status_mapping;

  absl::Status Validate() const;
};

// Reads a header-led, comma-separated stream. Errors name the offending
// 1-based line number (the header is line 1).
absl::StatusOr<SurvivalDataset> ParseDataset(std::istream& source,
                                             const SchemaConfig& schema,
                                             std::string name = "",
                                             std::string time_unit = "");

// Partitions records by group label, preserving input order inside each
// part. Requires group labels on every record and at least two groups.
absl::StatusOr<std::map<std::string, SurvivalDataset>> SplitByGroup(
    const SurvivalDataset& dataset);

}  // namespace dpsurv

#endif  // DPSURV_DATASET_H_
