/*
 * Copyright 2026 The upliftbench Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "test_util.h"
#include "upliftbench/csv_io.h"
#include "upliftbench/encoding.h"
#include "upliftbench/errors.h"
#include "upliftbench/logging.h"
#include "upliftbench/splitting.h"
#include "upliftbench/stats.h"

namespace upliftbench {
namespace {

using testing::MakeSample;
using testing::RandomDataset;
using testing::TempDir;

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

const char kHeader[] =
    "f0,f1,f2,f3,f4,f5,f6,f7,f8,f9,f10,f11,treatment,conversion,visit,exposure\n";

TEST(CsvTest, LoadsThreeRows) {
  TempDir dir;
  WriteFile(dir / "a.csv", std::string(kHeader) +
                               "0.5,1,2.5,3,4,5,6,7.5,8,9,10.5,11,1,0,1,1\n"
                               "1.5,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0\n"
                               "-2,2,1,1,1,1,1,1,1,1,1,1,1,1,1,0\n");
  const Dataset d = LoadCsv(dir / "a.csv");
  ASSERT_EQ(d.size(), 3u);
  EXPECT_DOUBLE_EQ(d[0].continuous[0], 0.5);
  EXPECT_DOUBLE_EQ(d[0].continuous[3], 10.5);
  EXPECT_EQ(d[0].categorical[0], 1);
  EXPECT_EQ(d[0].categorical[7], 11);
  EXPECT_EQ(d[2].conversion, 1);
  EXPECT_NEAR(d.treatment_ratio(), 2.0 / 3.0, 1e-15);
  EXPECT_FALSE(d.has_continuous_outcome());
}

TEST(CsvTest, RoundTripIsByteIdentical) {
  TempDir dir;
  Dataset d = RandomDataset(200, 0.85, 7);
  WriteCsv(d, dir / "a.csv");
  const Dataset back = LoadCsv(dir / "a.csv");
  WriteCsv(back, dir / "b.csv");
  EXPECT_EQ(ReadFile(dir / "a.csv"), ReadFile(dir / "b.csv"));
  ASSERT_EQ(back.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(back[i].continuous, d[i].continuous);
    EXPECT_EQ(back[i].categorical, d[i].categorical);
    EXPECT_EQ(back[i].treatment, d[i].treatment);
  }
}

TEST(CsvTest, GzipRoundTrip) {
  TempDir dir;
  std::vector<Sample> rows;
  std::vector<double> y;
  for (int i = 0; i < 50; ++i) {
    rows.push_back(MakeSample(i % 2));
    rows.back().continuous[1] = 0.1 * i;
    y.push_back(1.0 / (i + 1));
  }
  const Dataset d(rows, {}, y);
  CsvOptions gz;
  gz.gzip = true;
  WriteCsv(d, dir / "a.csv.gz", gz);
  const Dataset back = LoadCsv(dir / "a.csv.gz");
  ASSERT_TRUE(back.has_continuous_outcome());
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(back.continuous_outcome()[i], y[i]);
    EXPECT_EQ(back[i].continuous[1], d[i].continuous[1]);
  }
}

TEST(CsvTest, MissingTreatmentColumnIsSchemaError) {
  TempDir dir;
  WriteFile(dir / "a.csv",
            "f0,f1,f2,f3,f4,f5,f6,f7,f8,f9,f10,f11,conversion,visit,exposure\n"
            "0,0,0,0,0,0,0,0,0,0,0,0,0,0,0\n");
  EXPECT_THROW(LoadCsv(dir / "a.csv"), SchemaError);
}

TEST(CsvTest, BadCellReportsRow) {
  TempDir dir;
  WriteFile(dir / "a.csv", std::string(kHeader) +
                               "0,0,0,0,0,0,0,0,0,0,0,0,1,0,0,0\n"
                               "0,0,0,0,0,0,0,0,0,0,0,0,2,0,0,0\n");
  try {
    LoadCsv(dir / "a.csv");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 2u);
  }
  WriteFile(dir / "b.csv", std::string(kHeader) + "x,0,0,0,0,0,0,0,0,0,0,0,1,0,0,0\n");
  EXPECT_THROW(LoadCsv(dir / "b.csv"), ParseError);
  WriteFile(dir / "c.csv", std::string(kHeader) + "0,0,0\n");
  EXPECT_THROW(LoadCsv(dir / "c.csv"), ParseError);
  WriteFile(dir / "d.csv", std::string(kHeader) + "0,-1,0,0,0,0,0,0,0,0,0,0,1,0,0,0\n");
  EXPECT_THROW(LoadCsv(dir / "d.csv"), ParseError);
}

TEST(CsvTest, DictionaryEncodedCategoricals) {
  TempDir dir;
  WriteFile(dir / "a.csv", std::string(kHeader) +
                               "0,3.5,0,0,0,0,0,0,0,0,0,0,1,0,0,0\n"
                               "0,-2.25,0,0,0,0,0,0,0,0,0,0,0,0,0,0\n"
                               "0,3.5,0,0,0,0,0,0,0,0,0,0,0,0,0,0\n");
  CsvOptions options;
  options.schema.dictionary_encode_categoricals = true;
  const Dataset d = LoadCsv(dir / "a.csv", options);
  EXPECT_EQ(d[0].categorical[0], 0);
  EXPECT_EQ(d[1].categorical[0], 1);
  EXPECT_EQ(d[2].categorical[0], 0);
}

TEST(CsvTest, ViolationsAreLoadedWithWarning) {
  TempDir dir;
  WriteFile(dir / "a.csv", std::string(kHeader) +
                               "0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,1\n"
                               "0,0,0,0,0,0,0,0,0,0,0,0,1,0,0,0\n");
  ScopedWarningCapture capture;
  const Dataset d = LoadCsv(dir / "a.csv");
  EXPECT_EQ(d.size(), 2u);
  EXPECT_FALSE(capture.messages().empty());
}

TEST(ConstraintTest, SingleRowRules) {
  EXPECT_EQ(ValidateConstraints(Dataset({MakeSample(0, 0, 0, 1)})).exposed_controls, 1u);
  EXPECT_EQ(ValidateConstraints(Dataset({MakeSample(0, 0, 1, 0)}))
                .conversions_without_visit,
            1u);
  const ConstraintReport ok = ValidateConstraints(RandomDataset(500, 0.5, 3));
  EXPECT_EQ(ok.total(), 0u);
}

TEST(EncodingTest, NoProjectionsGivesStandardizedContinuous) {
  const Dataset d = RandomDataset(300, 0.5, 11);
  EncodingParams params;
  params.n_projections = 0;
  const EncodedMatrix m = Encode(d, params);
  ASSERT_EQ(m.dims(), 4);
  for (int j = 0; j < 4; ++j) {
    const Eigen::VectorXd col = m.values().col(j);
    EXPECT_NEAR(col.mean(), 0.0, 1e-12);
    EXPECT_NEAR((col.array() - col.mean()).square().mean(), 1.0, 1e-12);
  }
}

TEST(EncodingTest, IndicatorBlocksAreOneHot) {
  const Dataset d = RandomDataset(300, 0.5, 12);
  const EncodingParams params{5, 6, 99};
  const EncodedMatrix m = Encode(d, params);
  ASSERT_EQ(m.dims(), 4 + 5 * 6);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (int p = 0; p < 5; ++p) {
      const auto block = m.values().row(i).segment(4 + 6 * p, 6);
      EXPECT_EQ(block.sum(), 1.0);
      EXPECT_TRUE(((block.array() == 0.0) || (block.array() == 1.0)).all());
    }
  }
}

TEST(EncodingTest, IdenticalCodesGiveIdenticalBlocks) {
  for (std::uint64_t seed : {0ull, 1ull, 12345ull}) {
    Sample a = MakeSample(1), b = MakeSample(0);
    a.categorical = b.categorical = {5, 17, 3, 99, 1000, 2, 0, 7};
    a.continuous = {1, 2, 3, 4};
    b.continuous = {-1, 0, 5, 2};
    const EncodedMatrix m = Encode(Dataset({a, b}), {5, 6, seed});
    EXPECT_EQ(m.values().row(0).tail(30), m.values().row(1).tail(30));
  }
}

TEST(EncodingTest, DegenerateColumnWarnsAndEncodesZero) {
  std::vector<Sample> rows(10, MakeSample(0));
  for (int i = 0; i < 10; ++i) rows[i].continuous[0] = i;
  ScopedWarningCapture capture;
  const EncodedMatrix m = Encode(Dataset(rows), {0, 6, 0});
  EXPECT_EQ(capture.messages().size(), 3u);
  EXPECT_TRUE(m.values().col(1).isZero());
}

TEST(SplitTest, StratifiedCounts) {
  const Dataset d = RandomDataset(100, 0.85, 5);
  const auto [train, test] = Split(d, {0.8, Stratification::kTreatment});
  EXPECT_EQ(train.size(), 80u);
  EXPECT_EQ(train.num_treated(), 68u);
  EXPECT_EQ(train.size() - train.num_treated(), 12u);
  EXPECT_EQ(test.size(), 20u);
}

TEST(SplitTest, HalfOfTwoRowStrata) {
  const std::vector<int> strata = {0, 1, 0, 1, 2, 2};
  const IndexSplit split = StratifiedSplitIndices(strata, 0.5, 9);
  std::map<int, int> train_count;
  for (std::size_t i : split.train) ++train_count[strata[i]];
  EXPECT_EQ(train_count, (std::map<int, int>{{0, 1}, {1, 1}, {2, 1}}));
}

TEST(SplitTest, DeterministicAndSeedDependent) {
  const Dataset d = RandomDataset(500, 0.5, 5);
  const auto strata = StrataLabels(d, Stratification::kTreatmentAndOutcome);
  const IndexSplit a = StratifiedSplitIndices(strata, 0.7, 42);
  const IndexSplit b = StratifiedSplitIndices(strata, 0.7, 42);
  const IndexSplit c = StratifiedSplitIndices(strata, 0.7, 43);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  EXPECT_NE(a.train, c.train);
}

TEST(SplitTest, RejectsBadInputs) {
  const std::vector<int> strata = {0, 0, 1};
  EXPECT_THROW(StratifiedSplitIndices(strata, 0.5, 0), DataError);
  EXPECT_THROW(StratifiedSplitIndices(std::vector<int>{0, 0}, 1.0, 0), ConfigError);
}

TEST(KFoldTest, FoldSizesAndPartition) {
  const Dataset d = RandomDataset(100, 0.5, 8);
  const auto strata = StrataLabels(d, Stratification::kTreatment);
  const auto folds = StratifiedKFoldIndices(strata, 5, 1);
  ASSERT_EQ(folds.size(), 5u);
  std::multiset<std::size_t> seen;
  for (const IndexSplit& f : folds) {
    EXPECT_EQ(f.test.size(), 20u);
    EXPECT_EQ(f.train.size(), 80u);
    seen.insert(f.test.begin(), f.test.end());
  }
  std::multiset<std::size_t> all;
  for (std::size_t i = 0; i < 100; ++i) all.insert(i);
  EXPECT_EQ(seen, all);
}

TEST(KFoldTest, TreatedVisitCountsBalanced) {
  const Dataset d = RandomDataset(997, 0.6, 21);
  const auto folds = KFold(d, 5, Stratification::kTreatmentAndOutcome,
                           OutcomeKind::kVisit, 4);
  std::size_t n_tv = 0;
  for (const Sample& s : d.samples()) n_tv += s.treatment && s.visit;
  for (const auto& [train, validation] : folds) {
    std::size_t tv = 0;
    for (const Sample& s : validation.samples()) tv += s.treatment && s.visit;
    EXPECT_LE(std::abs(static_cast<double>(tv) - n_tv / 5.0), 1.0);
  }
}

Dataset Arms(std::size_t treated, std::size_t control, const std::string& tag,
             std::uint64_t seed) {
  std::vector<Sample> rows;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (std::size_t i = 0; i < treated + control; ++i) {
    rows.push_back(MakeSample(i < treated));
    rows.back().continuous[0] = normal(rng);
  }
  return Dataset(std::move(rows), {tag});
}

TEST(RebalanceTest, HandCounts) {
  EXPECT_EQ(RebalancedCounts({900, 100}, 0.85).treated, 566u);
  EXPECT_EQ(RebalancedCounts({900, 100}, 0.85).control, 100u);
  EXPECT_EQ(RebalancedCounts({500, 500}, 0.85).treated, 500u);
  EXPECT_EQ(RebalancedCounts({500, 500}, 0.85).control, 88u);

  const std::vector<Dataset> tests = {Arms(900, 100, "A", 1), Arms(500, 500, "B", 2)};
  const Dataset merged = Rebalance(tests, 0.85, 3);
  std::size_t counts[2][2] = {};
  for (const Sample& s : merged.samples()) ++counts[s.source][s.treatment];
  EXPECT_EQ(counts[0][1], 566u);
  EXPECT_EQ(counts[0][0], 100u);
  EXPECT_EQ(counts[1][1], 500u);
  EXPECT_EQ(counts[1][0], 88u);
  EXPECT_EQ(merged.source_tags(), (std::vector<std::string>{"A", "B"}));
}

TEST(RebalanceTest, AtTargetKeepsEveryRow) {
  const std::vector<Dataset> tests = {Arms(850, 150, "only", 1)};
  const Dataset merged = Rebalance(tests, 0.85, 3);
  EXPECT_EQ(merged.size(), 1000u);
  std::multiset<double> a, b;
  for (const Sample& s : tests[0].samples()) a.insert(s.continuous[0]);
  for (const Sample& s : merged.samples()) b.insert(s.continuous[0]);
  EXPECT_EQ(a, b);
}

TEST(RebalanceTest, SourceIndependentOfTreatment) {
  const std::vector<Dataset> tests = {Arms(900, 100, "A", 1), Arms(500, 500, "B", 2)};
  const Dataset merged = Rebalance(tests, 0.85, 3);
  std::vector<double> table(4, 0.0);
  for (const Sample& s : merged.samples()) table[s.source * 2 + s.treatment] += 1;
  EXPECT_GT(stats::ChiSquareIndependence(table, 2, 2).p_value, 0.01);
}

TEST(RebalanceTest, RejectsEmptyArmAndDuplicateTags) {
  EXPECT_THROW(Rebalance(std::vector<Dataset>{Arms(10, 0, "A", 1)}, 0.85, 0), DataError);
  EXPECT_THROW(
      Rebalance(std::vector<Dataset>{Arms(10, 2, "A", 1), Arms(10, 2, "A", 2)}, 0.85, 0),
      DataError);
  EXPECT_THROW(RebalancedCounts({1, 1}, 1.0), ConfigError);
}

TEST(StatsTest, ChiSquareKnownTable) {
  // 2x2 table [[10, 20], [30, 40]]: expected counts from the margins give a
  // statistic of 0.7937 with one degree of freedom.
  const std::vector<double> table = {10, 20, 30, 40};
  const auto r = stats::ChiSquareIndependence(table, 2, 2);
  EXPECT_EQ(r.degrees_of_freedom, 1);
  EXPECT_NEAR(r.statistic, 100.0 / 126.0, 1e-12);
  EXPECT_NEAR(r.p_value, 0.37299, 1e-4);
}

}  // namespace
}  // namespace upliftbench
