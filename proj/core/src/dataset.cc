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

#include "dpsurv/dataset.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "dpsurv/numeric_format.h"
#include "dpsurv/status_macros.h"
#include "string_view_bridge.h"

namespace dpsurv {
namespace {

absl::Status CheckRecord(const SubjectRecord& record, int event_type_count) {
  if (!std::isfinite(record.time) || record.time < 0.0) {
    return absl::InvalidArgumentError(
        absl::StrCat("time must be finite and nonnegative, got ",
                     FormatDouble(record.time)));
  }
  if (record.status < 0 || record.status > event_type_count) {
    return absl::InvalidArgumentError(
        absl::StrCat("status ", record.status, " outside [0, ",
                     event_type_count, "]"));
  }
  return absl::OkStatus();
}

std::vector<absl::string_view> SplitRow(absl::string_view line) {
  std::vector<absl::string_view> fields = absl::StrSplit(line, ',');
  for (auto& field : fields) field = absl::StripAsciiWhitespace(field);
  return fields;
}

absl::StatusOr<std::size_t> ColumnIndex(
    const std::vector<absl::string_view>& header, const std::string& column) {
  const auto it = std::find(header.begin(), header.end(), column);
  if (it == header.end()) {
    return absl::InvalidArgumentError(
        absl::StrCat("schema error: missing column '", column, "'"));
  }
  return static_cast<std::size_t>(it - header.begin());
}

absl::Status RowError(std::size_t line, absl::string_view message) {
  return absl::InvalidArgumentError(
      absl::StrCat("line ", line, ": ", message));
}

}  // namespace

absl::StatusOr<SurvivalDataset> SurvivalDataset::Create(
    std::vector<SubjectRecord> records, int event_type_count, std::string name,
    std::string time_unit) {
  if (event_type_count < 1) {
    return absl::InvalidArgumentError("event_type_count must be >= 1");
  }
  if (records.empty()) {
    return absl::InvalidArgumentError("dataset has no records");
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    const absl::Status status = CheckRecord(records[i], event_type_count);
    if (!status.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("record ", i, ": ", status.message()));
    }
  }
  SurvivalDataset dataset;
  dataset.records_ = std::move(records);
  dataset.event_type_count_ = event_type_count;
  dataset.name_ = std::move(name);
  dataset.time_unit_ = std::move(time_unit);
  return dataset;
}

bool SurvivalDataset::has_groups() const {
  return std::all_of(records_.begin(), records_.end(),
                     [](const SubjectRecord& r) { return r.group.has_value(); });
}

absl::Status SchemaConfig::Validate() const {
  if (time_column.empty() || status_column.empty()) {
    return absl::InvalidArgumentError("column names must be non-empty");
  }
  std::set<std::string> names = {time_column, status_column};
  if (names.size() != 2 ||
      (group_column.has_value() && !names.insert(*group_column).second)) {
    return absl::InvalidArgumentError("schema column names must be distinct");
  }
  if (event_type_count < 0) {
    return absl::InvalidArgumentError("event_type_count must be >= 0");
  }
  for (const auto& [raw, code] : status_mapping) {
    if (code < 0 ||
        (event_type_count != kInferEventTypes && code > event_type_count)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "status mapping '", raw, "' -> ", code, " outside [0, K]"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<SurvivalDataset> ParseDataset(std::istream& source,
                                             const SchemaConfig& schema,
                                             std::string name,
                                             std::string time_unit) {
  DPSURV_RETURN_IF_ERROR(schema.Validate());

  std::string line;
  std::size_t line_number = 0;
  // Skip leading blank lines; the first non-blank line is the header.
  while (std::getline(source, line)) {
    ++line_number;
    if (!absl::StripAsciiWhitespace(line).empty()) break;
  }
  if (absl::StripAsciiWhitespace(line).empty()) {
    return absl::InvalidArgumentError("schema error: missing header row");
  }
  const std::string header_line = line;
  const std::vector<absl::string_view> header = SplitRow(header_line);
  DPSURV_ASSIGN_OR_RETURN(const std::size_t time_index,
                          ColumnIndex(header, schema.time_column));
  DPSURV_ASSIGN_OR_RETURN(const std::size_t status_index,
                          ColumnIndex(header, schema.status_column));
  std::optional<std::size_t> group_index;
  if (schema.group_column.has_value()) {
    DPSURV_ASSIGN_OR_RETURN(group_index,
                            ColumnIndex(header, *schema.group_column));
  }

  std::vector<SubjectRecord> records;
  int max_status = 0;
  while (std::getline(source, line)) {
    ++line_number;
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    const std::vector<absl::string_view> fields = SplitRow(line);
    if (fields.size() != header.size()) {
      return RowError(line_number,
                      absl::StrCat("expected ", header.size(), " fields, got ",
                                   fields.size()));
    }

    SubjectRecord record;
    const absl::StatusOr<double> time = ParseDouble(ToStd(fields[time_index]));
    if (!time.ok()) return RowError(line_number, time.status().message());
    if (!std::isfinite(*time) || *time < 0.0) {
      return RowError(line_number,
                      absl::StrCat("time must be finite and nonnegative, got ",
                                   fields[time_index]));
    }
    record.time = *time;

    const absl::string_view raw_status = fields[status_index];
    if (schema.status_mapping.empty()) {
      if (!absl::SimpleAtoi(raw_status, &record.status)) {
        return RowError(line_number, absl::StrCat("unparsable status '",
                                                  raw_status, "'"));
      }
    } else {
      const auto it = schema.status_mapping.find(std::string(raw_status));
      if (it == schema.status_mapping.end()) {
        return RowError(line_number,
                        absl::StrCat("unmapped status '", raw_status, "'"));
      }
      record.status = it->second;
    }
    if (record.status < 0 ||
        (schema.event_type_count != SchemaConfig::kInferEventTypes &&
         record.status > schema.event_type_count)) {
      return RowError(line_number,
                      absl::StrCat("status ", record.status,
                                   " outside [0, ", schema.event_type_count,
                                   "]"));
    }
    max_status = std::max(max_status, record.status);

    if (group_index.has_value()) {
      record.group = std::string(fields[*group_index]);
    }
    records.push_back(std::move(record));
  }

  const int event_type_count =
      schema.event_type_count == SchemaConfig::kInferEventTypes
          ? std::max(1, max_status)
          : schema.event_type_count;
  return SurvivalDataset::Create(std::move(records), event_type_count,
                                 std::move(name), std::move(time_unit));
}

absl::StatusOr<std::map<std::string, SurvivalDataset>> SplitByGroup(
    const SurvivalDataset& dataset) {
  if (!dataset.has_groups()) {
    return absl::FailedPreconditionError(
        "dataset has no group column to split on");
  }
  std::map<std::string, std::vector<SubjectRecord>> parts;
  for (const SubjectRecord& record : dataset.records()) {
    parts[*record.group].push_back(record);
  }
  if (parts.size() < 2) {
    return absl::FailedPreconditionError(
        absl::StrCat("need at least two groups, found ", parts.size()));
  }
  std::map<std::string, SurvivalDataset> out;
  for (auto& [label, records] : parts) {
    DPSURV_ASSIGN_OR_RETURN(
        SurvivalDataset part,
        SurvivalDataset::Create(std::move(records),
                                dataset.event_type_count(),
                                absl::StrCat(dataset.name(), "[", label, "]"),
                                dataset.time_unit()));
    out.emplace(label, std::move(part));
  }
  return out;
}

}  // namespace dpsurv
