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

#include <sstream>
#include <string>

#include "absl/status/status.h"
#include "dpsurv/fixtures.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace dpsurv {
namespace {

using ::testing::HasSubstr;
using ::testing::SizeIs;

absl::StatusOr<SurvivalDataset> Parse(const std::string& text,
                                      SchemaConfig schema = {}) {
  std::istringstream in(text);
  return ParseDataset(in, schema);
}

TEST(ParseDatasetTest, ReadsRecordsInOrder) {
  absl::StatusOr<SurvivalDataset> ds = Parse("time,status\n5,1\n7,0\n");
  ASSERT_TRUE(ds.ok()) << ds.status();
  ASSERT_EQ(ds->size(), 2u);
  EXPECT_EQ(ds->event_type_count(), 1);
  EXPECT_EQ(ds->records()[0].time, 5.0);
  EXPECT_EQ(ds->records()[0].status, 1);
  EXPECT_EQ(ds->records()[1].time, 7.0);
  EXPECT_EQ(ds->records()[1].status, kCensored);
}

TEST(ParseDatasetTest, NegativeTimeNamesLine) {
  absl::StatusOr<SurvivalDataset> ds = Parse("time,status\n-3,1\n");
  ASSERT_FALSE(ds.ok());
  EXPECT_EQ(ds.status().code(), absl::StatusCode::kInvalidArgument);
  EXPECT_THAT(ds.status().message(), HasSubstr("line 2"));
}

TEST(ParseDatasetTest, UnparsableTimeNamesLine) {
  absl::StatusOr<SurvivalDataset> ds = Parse("time,status\n1,1\nabc,0\n");
  ASSERT_FALSE(ds.ok());
  EXPECT_THAT(ds.status().message(), HasSubstr("line 3"));
}

TEST(ParseDatasetTest, MissingColumnIsSchemaError) {
  absl::StatusOr<SurvivalDataset> ds = Parse("t,status\n1,1\n");
  ASSERT_FALSE(ds.ok());
  EXPECT_THAT(ds.status().message(), HasSubstr("missing column 'time'"));
}

TEST(ParseDatasetTest, ColumnsMayAppearInAnyOrder) {
  SchemaConfig schema;
  schema.group_column = "arm";
  absl::StatusOr<SurvivalDataset> ds =
      Parse("arm,extra,status,time\nx,9,1,4.5\ny,9,0,2\n", schema);
  ASSERT_TRUE(ds.ok()) << ds.status();
  EXPECT_EQ(ds->records()[0].time, 4.5);
  EXPECT_EQ(ds->records()[0].group, "x");
  EXPECT_TRUE(ds->has_groups());
}

TEST(ParseDatasetTest, StatusMapping) {
  SchemaConfig schema;
  schema.status_mapping = {{"alive", 0}, {"dead", 1}};
  absl::StatusOr<SurvivalDataset> ds =
      Parse("time,status\n1,dead\n2,alive\n", schema);
  ASSERT_TRUE(ds.ok()) << ds.status();
  EXPECT_EQ(ds->records()[0].status, 1);
  EXPECT_EQ(ds->records()[1].status, 0);

  absl::StatusOr<SurvivalDataset> bad =
      Parse("time,status\n1,dead\n2,unknown\n", schema);
  ASSERT_FALSE(bad.ok());
  EXPECT_THAT(bad.status().message(), HasSubstr("line 3"));
}

TEST(ParseDatasetTest, StatusAboveDeclaredTypesIsRowError) {
  absl::StatusOr<SurvivalDataset> ds = Parse("time,status\n1,1\n2,2\n");
  ASSERT_FALSE(ds.ok());
  EXPECT_THAT(ds.status().message(), HasSubstr("line 3"));
}

TEST(ParseDatasetTest, InfersEventTypeCount) {
  SchemaConfig schema;
  schema.event_type_count = SchemaConfig::kInferEventTypes;
  absl::StatusOr<SurvivalDataset> ds =
      Parse("time,status\n1,1\n2,3\n3,0\n", schema);
  ASSERT_TRUE(ds.ok()) << ds.status();
  EXPECT_EQ(ds->event_type_count(), 3);
}

TEST(ParseDatasetTest, EmptyBodyFails) {
  EXPECT_FALSE(Parse("time,status\n").ok());
  EXPECT_FALSE(Parse("").ok());
}

TEST(SchemaConfigTest, RejectsDuplicateColumnsAndBadMapping) {
  SchemaConfig same;
  same.status_column = "time";
  EXPECT_FALSE(same.Validate().ok());

  SchemaConfig mapped;
  mapped.status_mapping = {{"x", 5}};
  EXPECT_FALSE(mapped.Validate().ok());

  EXPECT_TRUE(SchemaConfig{}.Validate().ok());
}

TEST(SurvivalDatasetTest, CreateValidates) {
  EXPECT_FALSE(SurvivalDataset::Create({}).ok());
  EXPECT_FALSE(SurvivalDataset::Create(testing::Records({{-1.0, 1}})).ok());
  EXPECT_FALSE(SurvivalDataset::Create(
                   testing::Records({{std::numeric_limits<double>::infinity(), 1}}))
                   .ok());
  EXPECT_FALSE(SurvivalDataset::Create(testing::Records({{1.0, 2}}), 1).ok());
  EXPECT_TRUE(SurvivalDataset::Create(testing::Records({{1.0, 2}}), 2).ok());
  EXPECT_FALSE(SurvivalDataset::Create(testing::Records({{1.0, 1}}), 0).ok());
}

TEST(SplitByGroupTest, PartitionsPreservingOrder) {
  std::vector<SubjectRecord> records = testing::Records(
      {{1.0, 1}, {2.0, 0}, {3.0, 1}, {4.0, 1}});
  records[0].group = "a";
  records[1].group = "b";
  records[2].group = "a";
  records[3].group = "b";
  absl::StatusOr<SurvivalDataset> ds =
      SurvivalDataset::Create(records, 1, "demo", "days");
  ASSERT_TRUE(ds.ok());
  absl::StatusOr<std::map<std::string, SurvivalDataset>> parts =
      SplitByGroup(*ds);
  ASSERT_TRUE(parts.ok()) << parts.status();
  ASSERT_THAT(*parts, SizeIs(2));
  const SurvivalDataset& a = parts->at("a");
  const SurvivalDataset& b = parts->at("b");
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a.records()[0].time, 1.0);
  EXPECT_EQ(a.records()[1].time, 3.0);
  EXPECT_EQ(b.records()[0].time, 2.0);
  EXPECT_EQ(b.time_unit(), "days");
  EXPECT_EQ(b.event_type_count(), 1);
}

TEST(SplitByGroupTest, NeedsTwoLabelledGroups) {
  std::vector<SubjectRecord> records = testing::Records({{1.0, 1}, {2.0, 1}});
  EXPECT_EQ(SplitByGroup(testing::MustCreate(records)).status().code(),
            absl::StatusCode::kFailedPrecondition);
  records[0].group = "a";
  records[1].group = "a";
  EXPECT_FALSE(SplitByGroup(testing::MustCreate(records)).ok());
}

TEST(FixtureTest, CancerHas228Records) {
  absl::StatusOr<SurvivalDataset> ds = LoadFixture("cancer");
  ASSERT_TRUE(ds.ok()) << ds.status();
  EXPECT_EQ(ds->size(), 228u);
  EXPECT_EQ(ds->time_unit(), "days");
}

TEST(FixtureTest, EveryFixtureLoadsWithDeclaredShape) {
  ASSERT_THAT(Fixtures(), SizeIs(11));
  for (const FixtureInfo& info : Fixtures()) {
    absl::StatusOr<SurvivalDataset> ds = LoadFixture(info.name);
    ASSERT_TRUE(ds.ok()) << info.name << ": " << ds.status();
    EXPECT_EQ(ds->size(), info.rows) << info.name;
    EXPECT_EQ(ds->event_type_count(), info.event_type_count) << info.name;
    EXPECT_EQ(ds->has_groups(), !info.group_column.empty()) << info.name;
    if (ds->has_groups()) {
      absl::StatusOr<std::map<std::string, SurvivalDataset>> parts =
          SplitByGroup(*ds);
      ASSERT_TRUE(parts.ok()) << info.name;
      EXPECT_THAT(*parts, SizeIs(2)) << info.name;
    }
  }
}

TEST(FixtureTest, GehanSplitsIntoTwoArmsOf21) {
  absl::StatusOr<SurvivalDataset> ds = LoadFixture("gehan");
  ASSERT_TRUE(ds.ok());
  absl::StatusOr<std::map<std::string, SurvivalDataset>> parts =
      SplitByGroup(*ds);
  ASSERT_TRUE(parts.ok());
  for (const auto& [label, part] : *parts) EXPECT_EQ(part.size(), 21u) << label;
}

TEST(FixtureTest, UnknownFixture) {
  EXPECT_EQ(FindFixture("nope"), nullptr);
  EXPECT_EQ(LoadFixture("nope").status().code(), absl::StatusCode::kNotFound);
}

}  // namespace
}  // namespace dpsurv
