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

#include "dpsurv/dp_mechanism.h"

#include <cmath>
#include <map>
#include <memory>
#include <vector>

#include "dpsurv/fixtures.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace dpsurv {
namespace {

using ::testing::DoubleNear;
using ::testing::ElementsAre;
using testing::MustCreate;
using testing::Records;

// Every draw returns the same uniform; 0.5 means zero noise.
class FixedUniform : public NoiseSource {
 public:
  explicit FixedUniform(double u = 0.5) : NoiseSource(0), u_(u) {}

 protected:
  double DrawUniform() override { return u_; }

 private:
  double u_;
};

// Plays back a fixed list of uniforms and fails loudly past its end.
class ScriptedUniforms : public NoiseSource {
 public:
  explicit ScriptedUniforms(std::vector<double> script)
      : NoiseSource(0), script_(std::move(script)) {}

 protected:
  double DrawUniform() override {
    EXPECT_LT(next_, script_.size());
    return script_.at(next_++);
  }

 private:
  std::vector<double> script_;
  std::size_t next_ = 0;
};

PrivacyParams Params(double epsilon, std::uint64_t seed = 0) {
  PrivacyParams params;
  params.epsilon = epsilon;
  params.seed = seed;
  return params;
}

EventTable DpTable(std::vector<double> times, std::vector<double> events,
                   std::vector<double> at_risk) {
  EventTable table;
  table.times = std::move(times);
  table.events = events;
  table.events_by_type = {std::move(events)};
  table.at_risk = std::move(at_risk);
  table.n_total = table.at_risk.empty() ? 0.0 : table.at_risk[0];
  table.provenance = DpProvenance{1, 0, 2};
  return table;
}

TEST(SensitivityTest, IsTwo) {
  EXPECT_EQ(Sensitivity(), 2.0);
  EXPECT_EQ(kSensitivity, 2.0);
  EXPECT_EQ(Params(1).scale(), 2.0);
  EXPECT_EQ(Params(2).scale(), 1.0);
  EXPECT_EQ(PrivacyParams::kDelta, 0.0);
}

TEST(PrivacyParamsTest, Validate) {
  EXPECT_TRUE(Params(0.1).Validate().ok());
  for (double epsilon : {0.0, -1.0, double{INFINITY}, double{NAN}}) {
    EXPECT_FALSE(Params(epsilon).Validate().ok()) << epsilon;
  }
  PrivacyParams params = Params(1);
  params.sensitivity = 0;
  EXPECT_FALSE(params.Validate().ok());
}

TEST(PartialMatrixTest, ExtractsFirstAtRiskAndEveryEventCount) {
  const EventTable table = BuildEventTable(
      MustCreate(Records({{1, 1}, {1, 2}, {2, 2}, {3, 0}, {4, 1}}), 2));
  absl::StatusOr<PartialMatrix> m = ExtractPartialMatrix(table);
  ASSERT_TRUE(m.ok());
  EXPECT_EQ(m->r1, 5);
  EXPECT_EQ(m->rows, 3u);
  EXPECT_EQ(m->event_types, 2);
  EXPECT_THAT(m->events, ElementsAre(1, 0, 1, 1, 1, 0));
  EXPECT_EQ(m->event(2, 1), 1);
  EXPECT_EQ(m->entry_count(), 7u);

  EXPECT_FALSE(ExtractPartialMatrix(BuildEventTable(
                   MustCreate(Records({{1, 0}}))))
                   .ok());
}

TEST(PerturbTest, ZeroNoiseIsIdentity) {
  PartialMatrix m{12, 1, 3, {2, 1, 4}};
  FixedUniform zero;
  absl::StatusOr<PartialMatrix> noisy = Perturb(m, Params(1), zero);
  ASSERT_TRUE(noisy.ok());
  EXPECT_EQ(noisy->r1, 12);
  EXPECT_EQ(noisy->events, m.events);
}

TEST(PerturbTest, DrawOrderIsFirstAtRiskThenEvents) {
  PartialMatrix m{10, 2, 2, {1, 2, 3, 4}};
  const std::vector<double> u = {0.1, 0.2, 0.3, 0.6, 0.9};
  ScriptedUniforms source(u);
  absl::StatusOr<PartialMatrix> noisy = Perturb(m, Params(0.5), source);
  ASSERT_TRUE(noisy.ok());
  EXPECT_EQ(noisy->r1, 10 + LaplaceFromUniform(u[0], 4.0));
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(noisy->events[i], m.events[i] + LaplaceFromUniform(u[i + 1], 4.0));
  }
}

TEST(PerturbTest, ConsumesOneDrawPerEntry) {
  testing::CohortGenerator gen(21);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = gen.Uniform(1, 3);
    const EventTable table = BuildEventTable(
        MustCreate(gen.Records(gen.Uniform(1, 40), 20, 0.2, k), k));
    absl::StatusOr<PartialMatrix> m = ExtractPartialMatrix(table);
    if (!m.ok()) continue;
    NoiseSource source(trial);
    ASSERT_TRUE(Perturb(*m, Params(1), source).ok());
    EXPECT_EQ(source.position(), 1 + table.size() * static_cast<std::size_t>(k));
  }
}

TEST(PerturbTest, ReproducibleForFixedSeed) {
  PartialMatrix m{50, 1, 4, {3, 2, 5, 1}};
  absl::StatusOr<PartialMatrix> a = Perturb(m, Params(1, 99));
  absl::StatusOr<PartialMatrix> b = Perturb(m, Params(1, 99));
  absl::StatusOr<PartialMatrix> c = Perturb(m, Params(1, 100));
  ASSERT_TRUE(a.ok() && b.ok() && c.ok());
  EXPECT_EQ(a->r1, b->r1);
  EXPECT_EQ(a->events, b->events);
  EXPECT_NE(a->events, c->events);
}

TEST(ReconstructTest, SubtractsPreviousEvents) {
  const std::vector<double> times = {1, 2, 3};
  absl::StatusOr<EventTable> table =
      Reconstruct(PartialMatrix{10, 1, 3, {2, 3, 1}}, times, Params(1));
  ASSERT_TRUE(table.ok());
  EXPECT_THAT(table->at_risk, ElementsAre(10, 8, 5));
  EXPECT_TRUE(table->is_private());

  absl::StatusOr<EventTable> negative =
      Reconstruct(PartialMatrix{3, 1, 3, {2, 2, 1}}, times, Params(1));
  ASSERT_TRUE(negative.ok());
  EXPECT_THAT(negative->at_risk, ElementsAre(3, 1, -1));
}

TEST(ReconstructTest, SingleRowAndTypeSums) {
  const std::vector<double> one = {4};
  absl::StatusOr<EventTable> single =
      Reconstruct(PartialMatrix{7.5, 1, 1, {2}}, one, Params(1));
  ASSERT_TRUE(single.ok());
  EXPECT_THAT(single->at_risk, ElementsAre(7.5));

  const std::vector<double> two = {1, 2};
  absl::StatusOr<EventTable> typed =
      Reconstruct(PartialMatrix{9, 2, 2, {1, 2, 3, 0.5}}, two, Params(1));
  ASSERT_TRUE(typed.ok());
  EXPECT_THAT(typed->events, ElementsAre(4, 2.5));
  EXPECT_THAT(typed->at_risk, ElementsAre(9, 5));
}

TEST(ReconstructTest, LengthMismatch) {
  const std::vector<double> times = {1, 2};
  EXPECT_FALSE(Reconstruct(PartialMatrix{3, 1, 3, {1, 1, 1}}, times, Params(1)).ok());
}

TEST(RepairTest, NegativeEventsBecomeZero) {
  const EventTable repaired = Repair(DpTable({1, 2}, {-0.4, 2.1}, {5.0, 5.4}));
  EXPECT_THAT(repaired.events, ElementsAre(0.0, 2.1));
  EXPECT_THAT(repaired.events_by_type[0], ElementsAre(0.0, 2.1));
  // The at-risk column is also made non-increasing.
  EXPECT_THAT(repaired.at_risk, ElementsAre(5.0, 5.0));
}

TEST(RepairTest, TruncatesAtFirstEmptyRiskSet) {
  const EventTable repaired = Repair(DpTable({1, 2, 3}, {1, 1, 1}, {3, -1, 2}));
  EXPECT_THAT(repaired.times, ElementsAre(1));
  EXPECT_THAT(repaired.at_risk, ElementsAre(3));
}

TEST(RepairTest, EventsCappedAtRiskSet) {
  const EventTable repaired = Repair(DpTable({1}, {6.2}, {5.0}));
  EXPECT_THAT(repaired.events, ElementsAre(5.0));
}

TEST(RepairTest, PerTypeCountsScaledTogether) {
  EventTable table = DpTable({1}, {6}, {3});
  table.events_by_type = {{4}, {2}};
  const EventTable repaired = Repair(table);
  EXPECT_THAT(repaired.events, ElementsAre(3));
  EXPECT_THAT(repaired.events_by_type[0], ElementsAre(DoubleNear(2, 1e-15)));
  EXPECT_THAT(repaired.events_by_type[1], ElementsAre(DoubleNear(1, 1e-15)));
}

TEST(RepairTest, RandomTablesSatisfyInvariants) {
  testing::CohortGenerator gen(22);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> times, events, at_risk;
    const int rows = gen.Uniform(1, 12);
    for (int j = 0; j < rows; ++j) {
      times.push_back(j + 1);
      events.push_back(gen.UniformReal(-3, 6));
      at_risk.push_back(gen.UniformReal(-5, 20));
    }
    const EventTable repaired = Repair(DpTable(times, events, at_risk));
    ASSERT_TRUE(CheckRepairedInvariants(repaired).ok()) << "trial " << trial;
    const SurvivalCurve km = KaplanMeier(repaired);
    for (std::size_t j = 0; j < km.size(); ++j) {
      EXPECT_GE(km.survival[j], 0.0);
      EXPECT_LE(km.survival[j], 1.0);
      if (j > 0) {
        EXPECT_LE(km.survival[j], km.survival[j - 1]);
      }
    }
  }
}

TEST(DpEventTableTest, NothingToPrivatize) {
  EXPECT_FALSE(DpEventTable(MustCreate(Records({{1, 0}, {2, 0}})), Params(1)).ok());
}

TEST(DpEventTableTest, VanishingNoiseRecoversUncensoredCurve) {
  testing::CohortGenerator gen(23);
  for (int trial = 0; trial < 50; ++trial) {
    const SurvivalDataset ds =
        MustCreate(gen.Records(gen.Uniform(1, 200), gen.Uniform(1, 60), 0.0));
    absl::StatusOr<SurvivalCurve> dp = DpKaplanMeier(ds, Params(1e9, trial));
    ASSERT_TRUE(dp.ok());
    EXPECT_LE(SupDistance(*dp, KaplanMeier(BuildEventTable(ds))), 1e-6);
  }
}

TEST(DpEventTableTest, CensoredWithdrawalsStayInRiskSet) {
  // Censored at 2 between the events at 1 and 3.
  const SurvivalDataset ds = MustCreate(Records({{1, 1}, {2, 0}, {3, 1}}));
  const EventTable exact = BuildEventTable(ds);
  absl::StatusOr<EventTable> dp = DpEventTable(ds, Params(1e9, 5));
  ASSERT_TRUE(dp.ok());
  EXPECT_THAT(exact.at_risk, ElementsAre(3, 1));
  EXPECT_THAT(dp->at_risk, ElementsAre(DoubleNear(3, 1e-6), DoubleNear(2, 1e-6)));
  for (std::size_t j = 1; j < exact.size(); ++j) {
    EXPECT_GE(dp->at_risk[j], exact.at_risk[j]);
  }
}

TEST(DpEventTableTest, DeterministicAndProvenanceTagged) {
  absl::StatusOr<SurvivalDataset> gehan = LoadFixture("gehan");
  ASSERT_TRUE(gehan.ok());
  absl::StatusOr<EventTable> a = DpEventTable(*gehan, Params(1, 7));
  absl::StatusOr<EventTable> b = DpEventTable(*gehan, Params(1, 7));
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(*a, *b);
  EXPECT_EQ(a->provenance, (DpProvenance{1, 7, 2}));
}

TEST(DpEventTableTest, RepairedOnFixtureAcrossSeeds) {
  absl::StatusOr<SurvivalDataset> gehan = LoadFixture("gehan");
  ASSERT_TRUE(gehan.ok());
  for (double epsilon : {1.0, 2.0, 3.0}) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      absl::StatusOr<EventTable> table = DpEventTable(*gehan, Params(epsilon, seed));
      ASSERT_TRUE(table.ok());
      ASSERT_TRUE(CheckRepairedInvariants(*table).ok())
          << "epsilon " << epsilon << " seed " << seed;
    }
  }
}

TEST(DpEventTableTest, OneReleasePerAnalysis) {
  absl::StatusOr<SurvivalDataset> ovarian = LoadFixture("ovarian");
  ASSERT_TRUE(ovarian.ok());
  const std::size_t entries = 1 + BuildEventTable(*ovarian).size();
  const std::uint64_t before = NoiseSource::TotalDraws();
  absl::StatusOr<SurvivalCurve> banded = DpGreenwood(*ovarian, Params(2, 3), 0.05);
  ASSERT_TRUE(banded.ok());
  ASSERT_TRUE(MedianSurvival(*banded).ok());
  EXPECT_EQ(NoiseSource::TotalDraws() - before, entries);
}

// Records the stream position of every uniform handed out.
class PositionLog : public NoiseSource {
 public:
  PositionLog() : NoiseSource(1) {}
  std::vector<std::uint64_t> positions;

 protected:
  double DrawUniform() override {
    positions.push_back(position());
    return NoiseSource::DrawUniform();
  }
};

TEST(DpEventTableTest, EntriesUseDisjointStreamPositions) {
  const SurvivalDataset ds =
      MustCreate(Records({{1, 1}, {1, 2}, {2, 1}, {3, 2}, {4, 0}}), 2);
  PositionLog log;
  ASSERT_TRUE(DpEventTable(ds, Params(1), log).ok());
  EXPECT_THAT(log.positions, ElementsAre(1, 2, 3, 4, 5, 6, 7));
}

TEST(DpEventTableTest, IncidenceUsesPrivateTypeColumns) {
  testing::CohortGenerator gen(24);
  const SurvivalDataset ds = MustCreate(gen.Records(80, 30, 0.0, 2), 2);
  for (int type : {1, 2}) {
    absl::StatusOr<IncidenceCurve> dp =
        DpCumulativeIncidence(ds, Params(1e9, 1), type);
    absl::StatusOr<IncidenceCurve> exact = CumulativeIncidence(ds, type);
    ASSERT_TRUE(dp.ok() && exact.ok());
    EXPECT_LE(SupDistance(*dp, *exact), 1e-6);
  }
  EXPECT_FALSE(DpCumulativeIncidence(ds, Params(1), 3).ok());
}

TEST(DpEventTableTest, PrivateHazardNonDecreasing) {
  absl::StatusOr<SurvivalDataset> veteran = LoadFixture("veteran");
  ASSERT_TRUE(veteran.ok());
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    absl::StatusOr<HazardCurve> hazard = DpNelsonAalen(*veteran, Params(1, seed));
    ASSERT_TRUE(hazard.ok());
    for (std::size_t j = 1; j < hazard->size(); ++j) {
      EXPECT_GE(hazard->cumulative_hazard[j], hazard->cumulative_hazard[j - 1]);
    }
  }
}

TEST(GroupSeedTest, DependsOnLabel) {
  EXPECT_EQ(GroupSeed(5, "a"), GroupSeed(5, "a"));
  EXPECT_NE(GroupSeed(5, "a"), GroupSeed(5, "b"));
  EXPECT_NE(GroupSeed(5, "a"), GroupSeed(6, "a"));
  EXPECT_EQ(GroupSeed(5, "") , 5 ^ 0xcbf29ce484222325ULL);
}

TEST(DpLogrankTest, ZeroNoiseMatchesExactOnUncensoredData) {
  testing::CohortGenerator gen(25);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<SubjectRecord> records =
        gen.GroupedRecords(gen.Uniform(4, 60), gen.Uniform(2, 20), 0.0);
    absl::StatusOr<std::map<std::string, SurvivalDataset>> groups =
        SplitByGroup(MustCreate(records));
    ASSERT_TRUE(groups.ok());
    absl::StatusOr<LogrankResult> exact = ExactLogrank(*groups);
    absl::StatusOr<LogrankResult> dp =
        DpLogrank(*groups, Params(1, trial),
                  [](std::uint64_t) { return std::make_unique<FixedUniform>(); });
    ASSERT_EQ(exact.ok(), dp.ok());
    if (exact.ok()) {
      EXPECT_NEAR(dp->chi_square, exact->chi_square, 1e-12);
    }
  }
}

TEST(DpLogrankTest, DuplicatedArmWithSharedDrawsGivesZero) {
  absl::StatusOr<SurvivalDataset> leukemia = LoadFixture("leukemia");
  ASSERT_TRUE(leukemia.ok());
  std::map<std::string, SurvivalDataset> groups = {{"x", *leukemia},
                                                   {"y", *leukemia}};
  absl::StatusOr<LogrankResult> result = DpLogrank(
      groups, Params(1, 3),
      [](std::uint64_t) { return std::make_unique<NoiseSource>(1234); });
  ASSERT_TRUE(result.ok());
  EXPECT_NEAR(result->chi_square, 0.0, 1e-20);
}

TEST(DpLogrankTest, SeedsEachGroupFromItsLabel) {
  absl::StatusOr<SurvivalDataset> gehan = LoadFixture("gehan");
  ASSERT_TRUE(gehan.ok());
  absl::StatusOr<std::map<std::string, SurvivalDataset>> groups =
      SplitByGroup(*gehan);
  ASSERT_TRUE(groups.ok());
  std::vector<std::uint64_t> seeds;
  ASSERT_TRUE(DpLogrank(*groups, Params(1, 77),
                        [&](std::uint64_t seed) {
                          seeds.push_back(seed);
                          return std::make_unique<NoiseSource>(seed);
                        })
                  .ok());
  std::vector<std::uint64_t> expected;
  for (const auto& [label, part] : *groups) expected.push_back(GroupSeed(77, label));
  EXPECT_EQ(seeds, expected);

  absl::StatusOr<LogrankResult> a = DpLogrank(*groups, Params(1, 77));
  absl::StatusOr<LogrankResult> b = DpLogrank(*groups, Params(1, 77));
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a->chi_square, b->chi_square);
}

TEST(DpLogrankTest, NeedsTwoGroups) {
  std::map<std::string, SurvivalDataset> one = {
      {"a", MustCreate(Records({{1, 1}}))}};
  EXPECT_FALSE(DpLogrank(one, Params(1)).ok());
}

// Histogram log-likelihood ratio of the released first entry for two
// neighbouring matrices whose first entry differs by one.
double MaxEmpiricalLogRatio(double epsilon, int draws) {
  const PrivacyParams params = Params(epsilon);
  const PartialMatrix m0{10, 1, 1, {3}};
  const PartialMatrix m1{11, 1, 1, {3}};
  NoiseSource s0(314);
  NoiseSource s1(2718);
  std::map<long, int> h0, h1;
  for (int i = 0; i < draws; ++i) {
    h0[std::lround(std::floor(Perturb(m0, params, s0)->r1))]++;
    h1[std::lround(std::floor(Perturb(m1, params, s1)->r1))]++;
  }
  double worst = 0.0;
  for (const auto& [bin, count] : h0) {
    const auto other = h1.find(bin);
    if (other == h1.end() || count < 5000 || other->second < 5000) continue;
    worst = std::max(worst, std::abs(std::log(static_cast<double>(count) /
                                              other->second)));
  }
  return worst;
}

TEST(EmpiricalPrivacyTest, LikelihoodRatioWithinBudget) {
  for (double epsilon : {0.5, 1.0, 2.0}) {
    const double worst = MaxEmpiricalLogRatio(epsilon, 100000);
    EXPECT_LE(worst, epsilon * 1.0 / kSensitivity + 0.1) << epsilon;
    EXPECT_GT(worst, 0.0);
  }
}

}  // namespace
}  // namespace dpsurv
