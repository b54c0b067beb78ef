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
#include <map>

#include <gtest/gtest.h>

#include "upliftbench/errors.h"
#include "upliftbench/synthgen.h"

namespace upliftbench {
namespace {

SurfaceSpec SingleAnchor(double w0, double w1, double sigma, AnchorDistance distance) {
  SurfaceSpec spec;
  spec.kind = SurfaceKind::kMultiPeaked;
  spec.anchors = Eigen::MatrixXd::Zero(1, 3);
  spec.w0 = Eigen::VectorXd::Constant(1, w0);
  spec.w1 = Eigen::VectorXd::Constant(1, w1);
  spec.sigmas = Eigen::VectorXd::Constant(1, sigma);
  spec.distance = distance;
  return spec;
}

Eigen::MatrixXd RandomMatrix(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = normal(rng);
  }
  return x;
}

TEST(CovariatesTest, CodesWithinCardinalities) {
  for (std::size_t n : {1u, 500u}) {
    const Dataset d = GenerateCovariates(n, 3);
    ASSERT_EQ(d.size(), n);
    for (const Sample& s : d.samples()) {
      for (int j = 0; j < kNumCategorical; ++j) {
        EXPECT_GE(s.categorical[j], 0);
        EXPECT_LT(s.categorical[j], kCategoricalCardinalities[j]);
      }
      EXPECT_EQ(s.treatment, 0);
    }
  }
}

TEST(CovariatesTest, Deterministic) {
  const Dataset a = GenerateCovariates(200, 17);
  const Dataset b = GenerateCovariates(200, 17);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].continuous, b[i].continuous);
    EXPECT_EQ(a[i].categorical, b[i].categorical);
  }
}

TEST(CovariatesTest, ModeIsCodeZero) {
  const Dataset d = GenerateCovariates(100000, 5);
  for (int j = 0; j < kNumCategorical; ++j) {
    std::map<std::int64_t, int> counts;
    for (const Sample& s : d.samples()) ++counts[s.categorical[j]];
    const auto mode = std::max_element(
        counts.begin(), counts.end(),
        [](const auto& a, const auto& b) { return a.second < b.second; });
    EXPECT_EQ(mode->first, 0) << "column " << j;
  }
}

TEST(CovariatesTest, ContinuousCorrelation) {
  const Dataset d = GenerateCovariates(50000, 6);
  Eigen::MatrixXd x(d.size(), kNumContinuous);
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (int j = 0; j < kNumContinuous; ++j) x(i, j) = d[i].continuous[j];
  }
  const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  const Eigen::MatrixXd cov = centered.transpose() * centered / x.rows();
  const double corr = cov(0, 1) / std::sqrt(cov(0, 0) * cov(1, 1));
  EXPECT_NEAR(corr, 0.2, 0.02);
}

TEST(PropensityTest, HandValues) {
  EXPECT_DOUBLE_EQ(ConfoundedPropensity(0.0, 0.01), 0.5);
  EXPECT_DOUBLE_EQ(ConfoundedPropensity(0.0, 0.3), 0.5);
  EXPECT_NEAR(ConfoundedPropensity(std::log(3.0), 0.01), 0.745, 1e-12);
  EXPECT_NEAR(ConfoundedPropensity(1e6, 0.01), 0.99, 1e-12);
  EXPECT_NEAR(ConfoundedPropensity(-1e6, 0.01), 0.01, 1e-12);
}

TEST(AssignmentTest, RctPropensityIsConstant) {
  const Eigen::MatrixXd x = RandomMatrix(2000, 3, 1);
  AssignmentSpec spec;
  spec.rct_ratio = 0.3;
  const Assignment a = AssignTreatment(x, spec);
  EXPECT_TRUE((a.propensity.array() == 0.3).all());
  double treated = 0;
  for (auto t : a.treatment) treated += t;
  EXPECT_NEAR(treated / 2000, 0.3, 0.04);
}

TEST(AssignmentTest, ConfoundedWithinBounds) {
  Eigen::MatrixXd x = RandomMatrix(5000, 3, 2);
  x.col(1) *= 100.0;
  AssignmentSpec spec;
  spec.mode = AssignmentMode::kConfounded;
  spec.delta = 0.05;
  spec.alpha_index = 1;
  const Assignment a = AssignTreatment(x, spec);
  EXPECT_GE(a.propensity.minCoeff(), 0.05);
  EXPECT_LE(a.propensity.maxCoeff(), 0.95);
  spec.alpha_index = 7;
  EXPECT_THROW(AssignTreatment(x, spec), ConfigError);
  spec.alpha_index = 0;
  spec.delta = 0.5;
  EXPECT_THROW(AssignTreatment(x, spec), ConfigError);
}

TEST(SurfaceTest, CaseAEffectIsExact) {
  const Eigen::MatrixXd x = RandomMatrix(100, 6, 3);
  SurfaceSpec spec;
  spec.kind = SurfaceKind::kCaseA;
  spec.beta = Eigen::VectorXd::LinSpaced(6, 0, 4);
  const SurfaceValues v = EvaluateSurface(spec, x);
  EXPECT_LT(((v.mu1 - v.mu0).array() - 4.0).abs().maxCoeff(), 1e-12);
}

TEST(SurfaceTest, KernelAtAnchor) {
  const SurfaceSpec spec = SingleAnchor(0.2, 0.7, 1.0, AnchorDistance::kEuclidean);
  const SurfaceValues v = EvaluateSurface(spec, Eigen::MatrixXd::Zero(1, 3));
  EXPECT_DOUBLE_EQ(v.mu0[0], 0.2);
  EXPECT_DOUBLE_EQ(v.mu1[0], 0.7);
  EXPECT_DOUBLE_EQ(v.mu1[0] - v.mu0[0], 0.5);
}

TEST(SurfaceTest, KernelHalvesAtRadius) {
  const double sigma = 0.7;
  const double r = sigma * std::sqrt(2.0 * std::log(2.0));
  Eigen::MatrixXd x(1, 3);
  x << r / std::sqrt(2.0), 0.0, -r / std::sqrt(2.0);
  const SurfaceSpec euclid = SingleAnchor(0.2, 0.7, sigma, AnchorDistance::kEuclidean);
  const SurfaceValues v = EvaluateSurface(euclid, x);
  EXPECT_NEAR(v.mu1[0] - v.mu0[0], 0.25, 1e-12);

  // The root-mean-square distance divides by the dimension, so the same
  // kernel value sits sqrt(3) further out.
  const SurfaceSpec rms = SingleAnchor(0.2, 0.7, sigma, AnchorDistance::kRootMeanSquare);
  const SurfaceValues w = EvaluateSurface(rms, x * std::sqrt(3.0));
  EXPECT_NEAR(w.mu1[0] - w.mu0[0], 0.25, 1e-12);
}

TEST(SurfaceTest, CaseBOverflowIsFitError) {
  SurfaceSpec spec;
  spec.kind = SurfaceKind::kCaseB;
  spec.beta = Eigen::VectorXd::Constant(2, 1.0);
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(3, 2);
  x(2, 0) = 800.0;
  EXPECT_THROW(EvaluateSurface(spec, x), FitError);
}

TEST(CalibrateTest, CaseAIsNoOp) {
  const Eigen::MatrixXd x = RandomMatrix(50, 4, 4);
  SurfaceSpec spec;
  spec.beta = Eigen::VectorXd::Ones(4);
  const std::vector<std::uint8_t> t(50, 1);
  const SurfaceSpec out = Calibrate(spec, x, t);
  EXPECT_EQ(out.beta, spec.beta);
  EXPECT_EQ(out.target_effect, spec.target_effect);
}

TEST(CalibrateTest, MultiPeakedScalesToTarget) {
  const Eigen::MatrixXd x = Eigen::MatrixXd::Zero(10, 3);
  SurfaceSpec spec = SingleAnchor(1.0, 3.0, 1.0, AnchorDistance::kEuclidean);
  const SurfaceValues before = EvaluateSurface(spec, x);
  ASSERT_DOUBLE_EQ((before.mu1 - before.mu0).mean(), 2.0);
  const SurfaceSpec out = Calibrate(spec, x, std::vector<std::uint8_t>(10, 0));
  EXPECT_NEAR((out.w1 - out.w0)[0], 4.0, 1e-12);
  const SurfaceValues after = EvaluateSurface(out, x);
  EXPECT_NEAR((after.mu1 - after.mu0).mean(), 4.0, 1e-12);
}

TEST(CalibrateTest, ZeroEffectSurfaceFails) {
  const SurfaceSpec spec = SingleAnchor(0.5, 0.5, 1.0, AnchorDistance::kEuclidean);
  EXPECT_THROW(Calibrate(spec, Eigen::MatrixXd::Zero(4, 3), std::vector<std::uint8_t>(4, 1)),
               FitError);
}

// Bisection on the treated-mean effect as a function of omega.
double BisectOmega(SurfaceSpec spec, const Eigen::MatrixXd& x,
                   const std::vector<std::uint8_t>& t, double target) {
  auto att = [&](double omega) {
    spec.omega = omega;
    const SurfaceValues v = EvaluateSurface(spec, x);
    double sum = 0;
    int n = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i]) {
        sum += v.mu1[i] - v.mu0[i];
        ++n;
      }
    }
    return sum / n;
  };
  double lo = -1e4, hi = 1e4;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (att(mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

TEST(CalibrateTest, CaseBMatchesRootFinder) {
  GeneratorConfig config;
  config.n = 3000;
  config.seed = 8;
  config.surface = SurfaceKind::kCaseB;
  const GeneratedData g = GenerateIteDataset(config);
  const Eigen::MatrixXd& x = g.encoded.values();
  std::vector<std::uint8_t> t;
  double att = 0;
  int treated = 0;
  for (std::size_t i = 0; i < g.dataset.size(); ++i) {
    t.push_back(g.dataset[i].treatment);
    if (t.back()) {
      att += g.truth.tau[i];
      ++treated;
    }
  }
  EXPECT_NEAR(att / treated, 4.0, 1e-9);
  EXPECT_NEAR(g.surface.omega, BisectOmega(g.surface, x, t, 4.0), 1e-9);
}

TEST(OutcomesTest, NoiselessOutcomesMatchSurface) {
  SurfaceValues v;
  v.mu0 = Eigen::VectorXd::LinSpaced(20, -1, 1);
  v.mu1 = v.mu0.array() + 2.0;
  std::vector<std::uint8_t> t(20);
  for (int i = 0; i < 20; ++i) t[i] = i % 3 == 0;
  const Outcomes o = SampleOutcomes(v, t, Eigen::VectorXd::Constant(20, 0.5), 0.0, 1);
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(o.y[i], t[i] ? v.mu1[i] : v.mu0[i]);
    EXPECT_EQ(o.truth.tau[i], o.truth.mu1[i] - o.truth.mu0[i]);
  }
}

TEST(OutcomesTest, CaseARctDifferenceInMeans) {
  GeneratorConfig config;
  config.n = 100000;
  config.seed = 21;
  config.surface = SurfaceKind::kCaseA;
  config.assignment = AssignmentMode::kRct;
  config.rct_ratio = 0.5;
  const GeneratedData g = GenerateIteDataset(config);
  const auto y = g.dataset.continuous_outcome();
  double sum[2] = {0, 0}, sq[2] = {0, 0};
  double n[2] = {0, 0};
  for (std::size_t i = 0; i < g.dataset.size(); ++i) {
    const int arm = g.dataset[i].treatment;
    sum[arm] += y[i];
    sq[arm] += y[i] * y[i];
    n[arm] += 1;
  }
  const double m1 = sum[1] / n[1], m0 = sum[0] / n[0];
  const double v1 = sq[1] / n[1] - m1 * m1, v0 = sq[0] / n[0] - m0 * m0;
  const double se = std::sqrt(v1 / n[1] + v0 / n[0]);
  EXPECT_LT(std::abs(m1 - m0 - 4.0), 3.0 * se);
}

TEST(GeneratorTest, MultiPeakedDefaults) {
  GeneratorConfig config;
  config.n = 5000;
  config.seed = 2;
  const GeneratedData g = GenerateIteDataset(config);
  EXPECT_EQ(g.surface.anchors.rows(), 5);
  EXPECT_TRUE((g.surface.sigmas.array() == 1.0).all());
  EXPECT_TRUE((g.surface.w0.array() >= 0.0).all() && (g.surface.w0.array() <= 1.0).all());
  EXPECT_NEAR(g.truth.tau.mean(), 4.0, 1e-9);
  EXPECT_GE(g.truth.propensity.minCoeff(), 0.01);
  EXPECT_LE(g.truth.propensity.maxCoeff(), 0.99);
  EXPECT_EQ(g.truth.tau, g.truth.mu1 - g.truth.mu0);
  EXPECT_EQ(g.encoded.dims(), 34);
}

TEST(GeneratorTest, BitIdenticalForSameSeed) {
  GeneratorConfig config;
  config.n = 2000;
  config.seed = 77;
  const GeneratedData a = GenerateIteDataset(config);
  const GeneratedData b = GenerateIteDataset(config);
  EXPECT_EQ(a.truth.tau, b.truth.tau);
  EXPECT_EQ(a.truth.propensity, b.truth.propensity);
  ASSERT_EQ(a.dataset.size(), b.dataset.size());
  for (std::size_t i = 0; i < a.dataset.size(); ++i) {
    EXPECT_EQ(a.dataset[i].treatment, b.dataset[i].treatment);
    EXPECT_EQ(a.dataset.continuous_outcome()[i], b.dataset.continuous_outcome()[i]);
  }
  config.seed = 78;
  EXPECT_NE(GenerateIteDataset(config).truth.tau, a.truth.tau);
}

TEST(GeneratorTest, RctPropensityEqualsRatio) {
  GeneratorConfig config;
  config.n = 1000;
  config.assignment = AssignmentMode::kRct;
  config.rct_ratio = 0.85;
  const GeneratedData g = GenerateIteDataset(config);
  EXPECT_TRUE((g.truth.propensity.array() == 0.85).all());
}

TEST(GeneratorTest, BinaryModeRespectsConstraints) {
  GeneratorConfig config;
  config.n = 20000;
  config.seed = 4;
  config.outcome_mode = OutcomeMode::kBinary;
  config.assignment = AssignmentMode::kRct;
  config.rct_ratio = 0.85;
  config.surface_params.weight_scale = 0.5;
  config.surface_params.sigma = 0.25;
  config.surface_params.target_effect = 0.1;
  const GeneratedData g = GenerateIteDataset(config);
  EXPECT_EQ(ValidateConstraints(g.dataset).total(), 0u);
  EXPECT_FALSE(g.dataset.has_continuous_outcome());
  EXPECT_GE(g.truth.mu0.minCoeff(), 0.0);
  EXPECT_LE(g.truth.mu1.maxCoeff(), 1.0);
}

TEST(NamesTest, RoundTrip) {
  for (SurfaceKind k : {SurfaceKind::kCaseA, SurfaceKind::kCaseB, SurfaceKind::kMultiPeaked}) {
    EXPECT_EQ(ParseSurfaceKind(SurfaceKindName(k)), k);
  }
  for (AssignmentMode m : {AssignmentMode::kRct, AssignmentMode::kConfounded}) {
    EXPECT_EQ(ParseAssignmentMode(AssignmentModeName(m)), m);
  }
  EXPECT_THROW(ParseSurfaceKind("case_c"), ConfigError);
}

}  // namespace
}  // namespace upliftbench
