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

#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "test_util.h"
#include "upliftbench/errors.h"
#include "upliftbench/linear_models.h"
#include "upliftbench/metrics.h"
#include "upliftbench/model_io.h"
#include "upliftbench/synthgen.h"
#include "upliftbench/tuning.h"
#include "upliftbench/uplift_learners.h"

namespace upliftbench {
namespace {

Eigen::MatrixXd RandomMatrix(Eigen::Index n, Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = normal(rng);
  }
  return x;
}

// Binary outcome with a linear-logit effect whose sign follows x1.
struct BinaryTask {
  Eigen::MatrixXd x;
  Eigen::VectorXd y, t, tau;
};

BinaryTask MakeBinaryTask(Eigen::Index n, double ratio, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  BinaryTask task;
  task.x = RandomMatrix(n, 4, rng);
  task.y.resize(n);
  task.t.resize(n);
  task.tau.resize(n);
  std::uniform_real_distribution<double> u;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double base = -0.5 + 0.4 * task.x(i, 0);
    const double p0 = Sigmoid(base - 0.6 * task.x(i, 1));
    const double p1 = Sigmoid(base + 0.6 * task.x(i, 1));
    task.t[i] = u(rng) < ratio;
    task.y[i] = u(rng) < (task.t[i] ? p1 : p0);
    task.tau[i] = p1 - p0;
  }
  return task;
}

struct CaseATask {
  Eigen::MatrixXd x;
  Eigen::VectorXd y, t, tau;
};

CaseATask MakeCaseA(std::size_t n, std::uint64_t seed, double noise_sd,
                    AssignmentMode mode = AssignmentMode::kRct) {
  GeneratorConfig config;
  config.n = n;
  config.seed = seed;
  config.surface = SurfaceKind::kCaseA;
  config.assignment = mode;
  config.noise_sd = noise_sd;
  const GeneratedData g = GenerateIteDataset(config);
  CaseATask task;
  task.x = g.encoded.values();
  task.t = g.dataset.Treatments();
  task.y = g.dataset.Outcomes(OutcomeKind::kContinuous);
  task.tau = g.truth.tau;
  return task;
}

double RootPehe(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return Pehe(std::span<const double>(a.data(), a.size()),
              std::span<const double>(b.data(), b.size()));
}

TEST(RidgeTest, HandValues) {
  Eigen::MatrixXd x(2, 1);
  x << 1, 2;
  Eigen::VectorXd y(2);
  y << 1, 2;
  const RidgeOptions no_intercept{false};
  EXPECT_NEAR(FitRidge(x, y, 0.0, nullptr, no_intercept).weights[0], 1.0, 1e-12);
  EXPECT_NEAR(FitRidge(x, y, 5.0, nullptr, no_intercept).weights[0], 0.5, 1e-12);
}

TEST(RidgeTest, ConstantTarget) {
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd x = RandomMatrix(40, 3, rng);
  const LinearModel m = FitRidge(x, Eigen::VectorXd::Constant(40, 2.5), 0.1);
  EXPECT_LT(m.weights.norm(), 1e-12);
  EXPECT_NEAR(m.intercept, 2.5, 1e-12);
}

TEST(RidgeTest, WeightsMatchRowDuplication) {
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd x = RandomMatrix(30, 2, rng);
  const Eigen::VectorXd y = RandomMatrix(30, 1, rng).col(0);
  Eigen::VectorXd w = Eigen::VectorXd::Ones(30);
  w[0] = 2.0;
  w[1] = 0.0;
  Eigen::MatrixXd xd(30, 2);
  Eigen::VectorXd yd(30);
  xd << x.row(0), x.bottomRows(29);
  yd << y[0], y.tail(29);
  xd.row(1) = x.row(0);
  yd[1] = y[0];
  const LinearModel a = FitRidge(x, y, 0.3, &w);
  const LinearModel b = FitRidge(xd, yd, 0.3);
  EXPECT_LT((a.weights - b.weights).norm(), 1e-10);
  EXPECT_NEAR(a.intercept, b.intercept, 1e-10);
}

TEST(RidgeTest, SingularWithoutPenalty) {
  std::mt19937_64 rng(3);
  Eigen::MatrixXd x = RandomMatrix(20, 2, rng);
  x.col(1) = x.col(0);
  EXPECT_THROW(FitRidge(x, Eigen::VectorXd::Ones(20), 0.0), FitError);
  EXPECT_NO_THROW(FitRidge(x, Eigen::VectorXd::Ones(20), 1e-3));
}

TEST(LogisticTest, GradientAtZero) {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd x = RandomMatrix(25, 3, rng);
  Eigen::VectorXd y(25);
  for (int i = 0; i < 25; ++i) y[i] = i % 3 == 0;
  const LogisticObjective f(x, y, 0.0);
  Eigen::VectorXd g;
  const double value = f.ValueAndGradient(Eigen::VectorXd::Zero(4), &g);
  EXPECT_NEAR(value, std::log(2.0), 1e-12);
  const Eigen::VectorXd expected = x.transpose() * (Eigen::VectorXd::Constant(25, 0.5) - y) / 25;
  EXPECT_LT((g.head(3) - expected).norm(), 1e-14);
  EXPECT_NEAR(g[3], (0.5 - y.array()).mean(), 1e-14);
}

TEST(LogisticTest, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd x = RandomMatrix(50, 10, rng);
  Eigen::VectorXd y(50), v(50), s(10);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (int i = 0; i < 50; ++i) {
    y[i] = u(rng) > 1.2;
    v[i] = u(rng);
  }
  for (int j = 0; j < 10; ++j) s[j] = u(rng);
  const LogisticObjective f(x, y, 0.7, &v, &s);
  for (int point = 0; point < 10; ++point) {
    const Eigen::VectorXd theta = RandomMatrix(11, 1, rng).col(0);
    Eigen::VectorXd g;
    f.ValueAndGradient(theta, &g);
    Eigen::VectorXd fd(11);
    for (int k = 0; k < 11; ++k) {
      Eigen::VectorXd plus = theta, minus = theta;
      plus[k] += 1e-6;
      minus[k] -= 1e-6;
      fd[k] = (f.Value(plus) - f.Value(minus)) / 2e-6;
    }
    EXPECT_LT((g - fd).norm() / std::max(fd.norm(), 1e-12), 1e-5);
  }
}

TEST(LogisticTest, SeparableDataConverges) {
  Eigen::MatrixXd x(6, 1);
  x << -3, -2, -1, 1, 2, 3;
  Eigen::VectorXd y(6);
  y << 0, 0, 0, 1, 1, 1;
  BaseLearnerConfig config{BaseKind::kLogistic, 1.0, 2000, 1e-8};
  const LogisticFit fit = FitLogistic(x, y, config);
  EXPECT_TRUE(fit.converged);
  EXPECT_TRUE(std::isfinite(fit.model.weights[0]));
  EXPECT_GT(fit.model.weights[0], 0.0);
}

TEST(LogisticTest, RejectsNonBinaryTarget) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Ones(3, 1);
  Eigen::VectorXd y(3);
  y << 0, 0.5, 1;
  EXPECT_THROW(FitLogistic(x, y, {BaseKind::kLogistic}), DataError);
}

TEST(LogisticTest, LogLossClipsProbabilities) {
  Eigen::VectorXd y(2), p(2);
  y << 1, 0;
  p << 0, 1;
  const double hi = 1.0 - 1e-15;
  EXPECT_NEAR(LogLoss(y, p), -(std::log(1e-15) + std::log(1.0 - hi)) / 2.0, 1e-12);
  EXPECT_LT(LogLoss(y, p), 40.0);
}

TEST(TwoModelTest, CaseAExactScore) {
  const CaseATask task = MakeCaseA(2000, 1, 0.0);
  MetaLearnerConfig config;
  config.outcome.l2 = 1e-9;
  const UpliftScorer tm = FitTwoModel(task.x, task.y, task.t, config);
  EXPECT_LT((tm.Score(task.x).array() - 4.0).abs().maxCoeff(), 1e-6);
  // Control-only component is the m0 prediction.
  const Eigen::VectorXd m0 = tm.block("m0").Predict(task.x);
  EXPECT_LT((m0 - (task.y - task.t * 4.0)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(TwoModelTest, TwoNamesSameEstimator) {
  const CaseATask task = MakeCaseA(1000, 2, 1.0);
  const MetaLearnerConfig config;
  EXPECT_EQ(FitTwoModel(task.x, task.y, task.t, config).Score(task.x),
            FitTLearner(task.x, task.y, task.t, config).Score(task.x));
}

TEST(TwoModelTest, CaseAPeheBound) {
  const CaseATask task = MakeCaseA(20000, 3, 1.0);
  const UpliftScorer t = FitTLearner(task.x, task.y, task.t, {});
  EXPECT_LT(RootPehe(task.tau, t.Score(task.x)), 0.5);
}

TEST(CvtTest, Labels) {
  EXPECT_EQ(CvtLabel(1, 1), 1);
  EXPECT_EQ(CvtLabel(0, 1), 0);
  EXPECT_EQ(CvtLabel(1, 0), 0);
  EXPECT_EQ(CvtLabel(0, 0), 1);
}

TEST(CvtTest, ScoreFromClassifier) {
  LinearModel g;
  g.kind = BaseKind::kLogistic;
  g.weights = Eigen::VectorXd::Zero(1);
  g.intercept = std::log(3.0);
  const UpliftScorer s(UpliftMethod::kCvt, {}, 0.5, {{"g", g}});
  EXPECT_NEAR(s.Score(Eigen::MatrixXd::Zero(1, 1))[0], 0.5, 1e-12);
}

TEST(CvtTest, NoEffectGivesZeroScores) {
  std::mt19937_64 rng(6);
  const Eigen::MatrixXd x = RandomMatrix(20000, 3, rng);
  Eigen::VectorXd y(20000), t(20000);
  std::uniform_real_distribution<double> u;
  for (int i = 0; i < 20000; ++i) {
    t[i] = u(rng) < 0.5;
    y[i] = u(rng) < Sigmoid(x(i, 0));
  }
  const UpliftScorer s = FitCvt(x, y, t, {});
  EXPECT_LT(s.Score(x).cwiseAbs().mean(), 0.03);
}

TEST(CvtTest, RequiresBinaryOutcome) {
  const CaseATask task = MakeCaseA(200, 1, 1.0);
  EXPECT_THROW(FitCvt(task.x, task.y, task.t, {}), DataError);
  EXPECT_TRUE(RequiresBinaryOutcome(UpliftMethod::kSdr));
  EXPECT_FALSE(RequiresBinaryOutcome(UpliftMethod::kMom));
}

TEST(MomTest, HandValues) {
  EXPECT_DOUBLE_EQ(ModifiedOutcome(1, 1, 0.5), 2.0);
  EXPECT_DOUBLE_EQ(ModifiedOutcome(0, 1, 0.5), -2.0);
  EXPECT_NEAR(ModifiedOutcome(0, 1, 0.85), -6.6667, 1e-4);
}

TEST(MomTest, MeanEqualsDifferenceInMeans) {
  for (int seed = 0; seed < 20; ++seed) {
    const double ratio = seed % 2 ? 0.85 : 0.2 + 0.03 * seed;
    const BinaryTask task = MakeBinaryTask(3000, ratio, seed);
    const double e = task.t.mean();
    double ystar = 0;
    for (Eigen::Index i = 0; i < task.y.size(); ++i) {
      ystar += ModifiedOutcome(task.t[i], task.y[i], e);
    }
    ystar /= task.y.size();
    const std::span<const double> y(task.y.data(), task.y.size());
    const std::span<const double> t(task.t.data(), task.t.size());
    EXPECT_NEAR(ystar, Ate(y, t, AteMode::kDiffMeans), 1e-10);
  }
}

TEST(SdrTest, ZeroInteractionScore) {
  const Eigen::Index d = 3;
  LinearModel m;
  m.kind = BaseKind::kLogistic;
  m.weights = Eigen::VectorXd::Zero(2 * d + 1);
  m.weights.head(d) << 0.5, -0.2, 0.1;
  m.weights[2 * d] = 0.8;
  m.intercept = -0.3;
  const UpliftScorer s(UpliftMethod::kSdr, {}, 0.5, {{"sdr", m}});
  std::mt19937_64 rng(7);
  const Eigen::MatrixXd x = RandomMatrix(10, d, rng);
  const Eigen::VectorXd score = s.Score(x);
  for (Eigen::Index i = 0; i < 10; ++i) {
    const double z = x.row(i).dot(m.weights.head(d)) + m.intercept;
    EXPECT_NEAR(score[i], Sigmoid(z + 0.8) - Sigmoid(z), 1e-14);
  }
}

TEST(SdrTest, SmallLambdaSuppressesInteractions) {
  const BinaryTask task = MakeBinaryTask(4000, 0.5, 8);
  MetaLearnerConfig config;
  config.outcome = {BaseKind::kLogistic, 1.0, 2000, 1e-8};
  config.sdr_lambda = 1e-8;
  const UpliftScorer s = FitSdr(task.x, task.y, task.t, config);
  EXPECT_LT(s.block("sdr").weights.segment(4, 4).cwiseAbs().maxCoeff(), 1e-5);
  config.sdr_lambda = 0.0;
  EXPECT_THROW(FitSdr(task.x, task.y, task.t, config), ConfigError);
}

TEST(SdrTest, SignMatchesTrueUplift) {
  const BinaryTask task = MakeBinaryTask(20000, 0.5, 9);
  MetaLearnerConfig config;
  config.outcome = {BaseKind::kLogistic, 1.0, 1000, 1e-6};
  const UpliftScorer s = FitSdr(task.x, task.y, task.t, config);
  const BinaryTask test = MakeBinaryTask(5000, 0.5, 10);
  const Eigen::VectorXd score = s.Score(test.x);
  int agree = 0;
  for (Eigen::Index i = 0; i < score.size(); ++i) {
    agree += (score[i] > 0) == (test.tau[i] > 0);
  }
  EXPECT_GE(agree, 0.9 * score.size());
}

TEST(XLearnerTest, ExactNuisancesGiveConstantScore) {
  const CaseATask task = MakeCaseA(2000, 4, 0.0, AssignmentMode::kConfounded);
  MetaLearnerConfig config;
  config.outcome.l2 = 1e-9;
  config.effect.l2 = 1e-9;
  const UpliftScorer s = FitXLearner(task.x, task.y, task.t, config);
  EXPECT_LT((s.Score(task.x).array() - 4.0).abs().maxCoeff(), 1e-5);
}

TEST(XLearnerTest, ZeroWeightingGivesTreatedEffectModel) {
  const CaseATask task = MakeCaseA(2000, 5, 1.0);
  MetaLearnerConfig config;
  config.x_propensity = PropensityMode::kConstant;
  config.constant_propensity = 0.0;
  const UpliftScorer s = FitXLearner(task.x, task.y, task.t, config);
  EXPECT_EQ(s.Score(task.x), s.block("tau1").Predict(task.x));
}

TEST(RLearnerTest, TargetsUnderExactNuisances) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  const int n = 200;
  Eigen::VectorXd y(n), t(n), m(n), e(n);
  for (int i = 0; i < n; ++i) {
    e[i] = u(rng);
    t[i] = u(rng) < e[i];
    const double mu0 = 3.0 * u(rng);
    y[i] = mu0 + 2.5 * t[i];
    m[i] = mu0 + 2.5 * e[i];
  }
  e[0] = t[0];
  const WeightedTargets r = RLearnerTargets(y, t, m, e);
  EXPECT_EQ(r.weight[0], 0.0);
  for (int i = 1; i < n; ++i) EXPECT_NEAR(r.target[i], 2.5, 1e-12);
  const Eigen::MatrixXd x = RandomMatrix(n, 2, rng);
  const LinearModel fit = FitRidge(x, r.target, 1e-8, &r.weight);
  EXPECT_NEAR(fit.intercept, 2.5, 1e-6);
  EXPECT_LT(fit.weights.norm(), 1e-6);
}

TEST(DrLearnerTest, PseudoOutcomeHandValue) {
  Eigen::VectorXd one = Eigen::VectorXd::Ones(1);
  const Eigen::VectorXd phi =
      DrPseudoOutcome(one, one, 0.2 * one, 0.6 * one, 0.5 * one);
  EXPECT_NEAR(phi[0], 1.2, 1e-15);
}

TEST(DrLearnerTest, PseudoOutcomeMeanIsAte) {
  GeneratorConfig config;
  config.n = 100000;
  config.seed = 12;
  config.surface = SurfaceKind::kCaseA;
  config.assignment = AssignmentMode::kRct;
  const GeneratedData g = GenerateIteDataset(config);
  const Eigen::VectorXd phi = DrPseudoOutcome(
      g.dataset.Outcomes(OutcomeKind::kContinuous), g.dataset.Treatments(), g.truth.mu0,
      g.truth.mu1, g.truth.propensity);
  const double n = static_cast<double>(phi.size());
  const double mean = phi.mean();
  const double se = std::sqrt((phi.array() - mean).square().sum() / (n - 1) / n);
  EXPECT_LT(std::abs(mean - g.truth.tau.mean()), 3 * se);
}

TEST(MethodNamesTest, ParseAndAliases) {
  for (UpliftMethod m :
       {UpliftMethod::kTwoModel, UpliftMethod::kCvt, UpliftMethod::kMom, UpliftMethod::kSdr,
        UpliftMethod::kTLearner, UpliftMethod::kXLearner, UpliftMethod::kRLearner,
        UpliftMethod::kDrLearner}) {
    EXPECT_EQ(ParseUpliftMethod(UpliftMethodName(m)), m);
  }
  EXPECT_EQ(ParseUpliftMethod("DR-learner"), UpliftMethod::kDrLearner);
  EXPECT_EQ(ParseUpliftMethod("x"), UpliftMethod::kXLearner);
  EXPECT_THROW(ParseUpliftMethod("s_learner"), ConfigError);
}

TEST(ModelIoTest, SaveLoadIsBitIdentical) {
  const BinaryTask task = MakeBinaryTask(3000, 0.6, 13);
  MetaLearnerConfig config;
  config.outcome.max_iters = 200;
  for (UpliftMethod m :
       {UpliftMethod::kTwoModel, UpliftMethod::kCvt, UpliftMethod::kMom, UpliftMethod::kSdr,
        UpliftMethod::kTLearner, UpliftMethod::kXLearner, UpliftMethod::kRLearner,
        UpliftMethod::kDrLearner}) {
    const UpliftScorer s = FitUplift(m, task.x, task.y, task.t, config);
    std::stringstream buffer;
    WriteScorer(s, buffer);
    const UpliftScorer back = ReadScorer(buffer);
    EXPECT_EQ(back.method(), m);
    EXPECT_EQ(back.Score(task.x), s.Score(task.x)) << UpliftMethodName(m);
  }
}

TEST(ModelIoTest, FileRoundTripAndCorruption) {
  testing::TempDir dir;
  const BinaryTask task = MakeBinaryTask(500, 0.5, 14);
  MetaLearnerConfig config;
  config.x_propensity = PropensityMode::kConstant;
  const UpliftScorer s = FitXLearner(task.x, task.y, task.t, config);
  SaveScorer(s, dir / "x.txt");
  EXPECT_EQ(LoadScorer(dir / "x.txt").Score(task.x), s.Score(task.x));
  std::stringstream bad("upliftbench-scorer 1\nmethod tm\ntreatment_ratio abc\n");
  EXPECT_THROW(ReadScorer(bad), ParseError);
  std::stringstream wrong("not-a-scorer\n");
  EXPECT_THROW(ReadScorer(wrong), ParseError);
}

TEST(TuningTest, DefaultGrids) {
  EXPECT_EQ(DefaultLogisticCGrid(), (std::vector<double>{1e0, 1e2, 1e4, 1e6, 1e8}));
  EXPECT_EQ(DefaultRidgeAlphaGrid(), (std::vector<double>{1e-8, 1e-6, 1e-4, 1e-2, 1e0}));
  const auto tm = DefaultUpliftGrid(UpliftMethod::kTwoModel);
  ASSERT_EQ(tm.size(), 5u);
  EXPECT_DOUBLE_EQ(tm[1].config.outcome.l2, 1e-2);
  EXPECT_EQ(tm[1].label, "C=100");
  const auto mom = DefaultUpliftGrid(UpliftMethod::kMom);
  EXPECT_DOUBLE_EQ(mom[0].config.effect.l2, 1e-8);
  EXPECT_EQ(DefaultUpliftGrid(UpliftMethod::kSdr).size(), 8u);
}

TEST(TuningTest, SingleConfigReturnedUnchanged) {
  const BinaryTask data = MakeBinaryTask(300, 0.5, 15);
  GridPoint point;
  point.config.outcome.l2 = 0.123;
  point.label = "only";
  const LearningTask task{data.x, data.y, data.t, std::nullopt};
  const TuneResult r = Tune(UpliftMethod::kTwoModel, {point}, task, {});
  EXPECT_EQ(r.best_index, 0u);
  EXPECT_EQ(r.best.outcome.l2, 0.123);
}

TEST(TuningTest, PeheSelectsAndAllInvalidFails) {
  const CaseATask data = MakeCaseA(3000, 16, 1.0);
  const LearningTask task{data.x, data.y, data.t, data.tau};
  TuneOptions options;
  options.objective = TuningObjective::kPehe;
  options.folds = 3;
  const auto grid = DefaultIteGrid(UpliftMethod::kDrLearner);
  const TuneResult r = Tune(UpliftMethod::kDrLearner, grid, task, options);
  ASSERT_EQ(r.table.size(), grid.size());
  for (const CvRow& row : r.table) {
    EXPECT_TRUE(row.valid);
    EXPECT_GE(row.mean, r.table[r.best_index].mean);
  }
  // CVT cannot fit a real-valued outcome, so every grid point fails.
  options.objective = TuningObjective::kAuuc;
  EXPECT_THROW(Tune(UpliftMethod::kCvt, DefaultUpliftGrid(UpliftMethod::kCvt), task, options),
               FitError);
}

}  // namespace
}  // namespace upliftbench
