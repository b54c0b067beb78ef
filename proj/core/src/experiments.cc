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

#include "upliftbench/experiments.h"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

#include "upliftbench/csv_io.h"
#include "upliftbench/errors.h"
#include "upliftbench/logging.h"
#include "upliftbench/parallel.h"
#include "upliftbench/random.h"
#include "upliftbench/splitting.h"
#include "upliftbench/stats.h"
#include "upliftbench/tuning.h"

namespace upliftbench {
namespace {

std::span<const double> AsSpan(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

std::vector<Eigen::Index> ToIndex(std::span<const std::size_t> rows) {
  return {rows.begin(), rows.end()};
}

Dataset LoadSource(const ExperimentConfig& config) {
  CsvOptions options;
  if (config.schema_path) options.schema = LoadCsvSchema(*config.schema_path);
  return LoadCsv(*config.data_path, options);
}

// Outcome used by the learners: the real-valued column when present.
Eigen::VectorXd LearningOutcome(const Dataset& data, OutcomeKind kind) {
  if (kind == OutcomeKind::kContinuous && !data.has_continuous_outcome()) {
    throw DataError("dataset has no continuous outcome column");
  }
  return data.Outcomes(kind);
}

// Keeps at most cap rows, stratified on the given labels.
std::vector<std::size_t> CapRows(const std::vector<std::size_t>& rows,
                                 const std::vector<int>& strata, std::size_t cap,
                                 std::uint64_t seed) {
  if (cap == 0 || rows.size() <= cap) return rows;
  std::vector<int> sub(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) sub[i] = strata[rows[i]];
  const IndexSplit keep = StratifiedSplitIndices(
      sub, static_cast<double>(cap) / static_cast<double>(rows.size()), seed);
  std::vector<std::size_t> out;
  out.reserve(keep.train.size());
  for (std::size_t i : keep.train) out.push_back(rows[i]);
  return out;
}

std::vector<GridPoint> GridFromValues(UpliftMethod method, const MetaLearnerConfig& base,
                                      const std::vector<double>& values, bool logistic) {
  std::vector<GridPoint> grid;
  for (double v : values) {
    GridPoint p{base, {}, 0.0};
    char label[64];
    if (logistic) {
      std::snprintf(label, sizeof(label), "C=%g", v);
      p.config.outcome.kind = BaseKind::kLogistic;
      p.config.outcome.l2 = 1.0 / v;
      p.penalty = 1.0 / v;
    } else {
      std::snprintf(label, sizeof(label), "alpha=%g", v);
      p.config.effect.kind = BaseKind::kRidge;
      p.config.effect.l2 = v;
      p.penalty = v;
    }
    p.label = label;
    grid.push_back(std::move(p));
  }
  if (grid.empty()) return DefaultUpliftGrid(method, base);
  return grid;
}

std::vector<GridPoint> UpliftGrid(UpliftMethod method, const ExperimentConfig& config,
                                  const MetaLearnerConfig& base) {
  switch (method) {
    case UpliftMethod::kTwoModel:
    case UpliftMethod::kCvt:
      return GridFromValues(method, base, config.logistic_c_grid, true);
    case UpliftMethod::kMom:
      return GridFromValues(method, base, config.ridge_alpha_grid, false);
    case UpliftMethod::kSdr: {
      if (config.sdr_c_grid.empty() && config.sdr_lambda_grid.empty()) {
        return DefaultUpliftGrid(method, base);
      }
      const auto cs = config.sdr_c_grid.empty() ? DefaultSdrCGrid() : config.sdr_c_grid;
      const auto lambdas =
          config.sdr_lambda_grid.empty() ? DefaultSdrLambdaGrid() : config.sdr_lambda_grid;
      std::vector<GridPoint> grid;
      for (double c : cs) {
        for (double lambda : lambdas) {
          char label[64];
          std::snprintf(label, sizeof(label), "C=%g,lambda=%g", c, lambda);
          GridPoint p{base, label, 1.0 / c};
          p.config.outcome.kind = BaseKind::kLogistic;
          p.config.outcome.l2 = 1.0 / c;
          p.config.sdr_lambda = lambda;
          grid.push_back(std::move(p));
        }
      }
      return grid;
    }
    default:
      return config.ite_l2_grid.empty()
                 ? DefaultIteGrid(method, base)
                 : DefaultIteGrid(method, base, config.ite_l2_grid);
  }
}

}  // namespace

bool CiOverlap(const MetricResult& a, const MetricResult& b) {
  if (!a.ci_low || !a.ci_high || !b.ci_low || !b.ci_high) return true;
  return !(*a.ci_low > *b.ci_high || *b.ci_low > *a.ci_high);
}

bool SeparabilityResult::Overlap(std::size_t size_index, std::size_t a,
                                 std::size_t b) const {
  return CiOverlap(auuc.at(size_index).at(a), auuc.at(size_index).at(b));
}

std::optional<std::size_t> SeparabilityResult::MethodIndex(std::string_view name) const {
  for (std::size_t i = 0; i < methods.size(); ++i) {
    if (methods[i] == name) return i;
  }
  return std::nullopt;
}

SeparabilityResult RunSeparability(const ExperimentConfig& config) {
  Dataset data;
  std::optional<Eigen::VectorXd> tau;
  if (config.data_path) {
    data = LoadSource(config);
  } else {
    GeneratorConfig g = config.generator;
    if (g.outcome_mode != OutcomeMode::kBinary) {
      throw ConfigError("separability needs a binary-outcome generator");
    }
    GeneratedData generated = GenerateIteDataset(g);
    data = std::move(generated.dataset);
    tau = std::move(generated.truth.tau);
  }
  if (config.planted_pair && !tau) {
    Warn("planted oracle pair needs ground truth; skipped for file data");
  }
  const Eigen::VectorXd t = data.Treatments();
  const Eigen::VectorXd y = LearningOutcome(data, config.outcome);
  if (!IsBinary(y)) throw DataError("separability needs a binary outcome");

  const std::vector<int> strata = StrataLabels(AsSpan(t), AsSpan(y));
  IndexSplit split =
      StratifiedSplitIndices(strata, config.train_fraction, DeriveSeed(config.seed, 1));
  split.train = CapRows(split.train, strata, config.max_train_rows, DeriveSeed(config.seed, 2));
  Rng shuffle_rng = MakeRng(DeriveSeed(config.seed, 3), 0);
  std::shuffle(split.test.begin(), split.test.end(), shuffle_rng);

  const Dataset train_data = data.Subset(split.train);
  const Encoder encoder = Encoder::Fit(train_data, config.encoding);
  LearningTask train;
  train.x = encoder.Transform(train_data).values();
  train.y = y(ToIndex(split.train));
  train.t = t(ToIndex(split.train));
  const Eigen::MatrixXd x_test = encoder.Transform(data.Subset(split.test)).values();
  const Eigen::VectorXd y_test = y(ToIndex(split.test));
  const Eigen::VectorXd t_test = t(ToIndex(split.test));

  SeparabilityResult result;
  result.train_rows = split.train.size();
  result.test_rows = split.test.size();
  std::vector<Eigen::VectorXd> scores;
  for (UpliftMethod method : config.methods) {
    MetaLearnerConfig base;
    base.seed = DeriveSeed(config.seed, 4);
    const std::vector<GridPoint> grid = UpliftGrid(method, config, base);
    TuneOptions options;
    options.folds = config.cv_folds;
    options.objective = TuningObjective::kAuuc;
    options.auuc_resolution = config.auuc_resolution;
    options.seed = DeriveSeed(config.seed, 5);
    options.workers = config.workers;
    const TuneResult tuned = Tune(method, grid, train, options);
    const UpliftScorer scorer = FitUplift(method, train.x, train.y, train.t, tuned.best);
    result.methods.emplace_back(UpliftMethodName(method));
    result.chosen.push_back(grid[tuned.best_index].label);
    scores.push_back(scorer.Score(x_test));
  }
  if (config.planted_pair && tau) {
    const Eigen::VectorXd tau_test = (*tau)(ToIndex(split.test));
    const double sd = stats::StdDev(AsSpan(tau_test));
    Rng rng = MakeRng(DeriveSeed(config.seed, 6), 0);
    std::normal_distribution<double> normal;
    Eigen::VectorXd noised = tau_test;
    for (Eigen::Index i = 0; i < noised.size(); ++i) {
      noised[i] += config.planted_noise * sd * normal(rng);
    }
    result.methods.emplace_back(kOracleName);
    result.chosen.emplace_back();
    scores.push_back(tau_test);
    result.methods.emplace_back(kNoisedOracleName);
    result.chosen.emplace_back();
    scores.push_back(noised);
  }

  for (std::size_t s = 0; s < config.test_sizes.size(); ++s) {
    const std::size_t size = config.test_sizes[s];
    if (size > split.test.size()) {
      Warn("test size " + std::to_string(size) + " exceeds the " +
           std::to_string(split.test.size()) + "-row test set; skipped");
      result.skipped_sizes.push_back(size);
      continue;
    }
    const auto n = static_cast<Eigen::Index>(size);
    const Eigen::VectorXd ys = y_test.head(n);
    const Eigen::VectorXd ts = t_test.head(n);
    const auto treated = static_cast<int>(ts.sum());
    const int resolution =
        std::min({config.auuc_resolution, treated, static_cast<int>(n) - treated});
    std::vector<MetricResult> row;
    for (const Eigen::VectorXd& sc : scores) {
      const Eigen::VectorXd head = sc.head(n);
      BootstrapOptions boot;
      boot.workers = config.workers;
      row.push_back(AuucWithCi(AsSpan(head), AsSpan(ys), AsSpan(ts), resolution,
                               config.n_bootstrap, DeriveSeed(config.seed, 100 + s), boot));
    }
    result.sizes.push_back(size);
    result.auuc.push_back(std::move(row));
  }
  return result;
}

std::vector<std::vector<IteSummary>> IteBenchmarkResult::Summaries() const {
  std::vector<std::vector<IteSummary>> out(cells.size());
  for (std::size_t s = 0; s < cells.size(); ++s) {
    std::optional<std::size_t> best;
    for (std::size_t m = 0; m < cells[s].size(); ++m) {
      std::vector<double> values;
      for (const IteCell& cell : cells[s][m]) {
        if (cell.pehe) values.push_back(*cell.pehe);
      }
      IteSummary summary;
      summary.completed = static_cast<int>(values.size());
      if (!values.empty()) {
        summary.mean = stats::Mean(values);
        summary.std = stats::SampleStdDev(values);
        if (methods[m] != kOracleName &&
            (!best || summary.mean < out[s][*best].mean)) {
          best = m;
        }
      }
      out[s].push_back(summary);
    }
    if (best) out[s][*best].best = true;
  }
  return out;
}

bool IteBenchmarkResult::Complete() const {
  for (const auto& surface : cells) {
    for (const auto& method : surface) {
      for (const IteCell& cell : method) {
        if (!cell.pehe) return false;
      }
    }
  }
  return true;
}

IteBenchmarkResult RunIteBenchmark(const ExperimentConfig& config) {
  if (config.data_path) {
    throw ConfigError("the ITE benchmark needs ground truth; use the generator");
  }
  IteBenchmarkResult result;
  result.surfaces = config.surfaces;
  result.n_realizations = config.n_realizations;
  for (UpliftMethod m : config.methods) result.methods.emplace_back(UpliftMethodName(m));
  if (config.include_oracle) result.methods.emplace_back(kOracleName);
  const auto n_real = static_cast<std::size_t>(config.n_realizations);
  result.cells.assign(config.surfaces.size(),
                      std::vector<std::vector<IteCell>>(result.methods.size(),
                                                        std::vector<IteCell>(n_real)));

  ParallelFor(config.surfaces.size() * n_real, config.workers, [&](std::size_t item) {
    const std::size_t s = item / n_real;
    const std::size_t r = item % n_real;
    auto& cells = result.cells[s];
    GeneratorConfig g = config.generator;
    g.surface = config.surfaces[s];
    g.seed = DeriveSeed(config.generator.seed, r);
    GeneratedData data;
    try {
      data = GenerateIteDataset(g);
    } catch (const std::exception& e) {
      for (auto& method : cells) method[r].error = std::string("generation: ") + e.what();
      return;
    }
    const Eigen::VectorXd t = data.dataset.Treatments();
    const Eigen::VectorXd y = data.dataset.has_continuous_outcome()
                                  ? data.dataset.Outcomes(OutcomeKind::kContinuous)
                                  : data.dataset.Outcomes(OutcomeKind::kVisit);
    LearningTask all;
    all.x = data.encoded.values();
    all.y = y;
    all.t = t;
    all.tau = data.truth.tau;
    IndexSplit split;
    try {
      split = StratifiedSplitIndices(StrataLabels(AsSpan(t)), config.ite_train_fraction,
                                     DeriveSeed(config.seed, r));
    } catch (const std::exception& e) {
      for (auto& method : cells) method[r].error = std::string("split: ") + e.what();
      return;
    }
    const LearningTask train = all.Rows(split.train);
    const LearningTask test = all.Rows(split.test);

    for (std::size_t m = 0; m < config.methods.size(); ++m) {
      const UpliftMethod method = config.methods[m];
      IteCell& cell = cells[m][r];
      try {
        MetaLearnerConfig base;
        base.seed = DeriveSeed(config.seed, 1000 + r);
        base.x_propensity = g.assignment == AssignmentMode::kRct ? PropensityMode::kConstant
                                                                 : PropensityMode::kModel;
        const std::vector<GridPoint> grid = UpliftGrid(method, config, base);
        TuneOptions options;
        options.folds = config.cv_folds;
        options.objective = TuningObjective::kPehe;
        options.seed = DeriveSeed(config.seed, 2000 + r);
        const TuneResult tuned = Tune(method, grid, train, options);
        const UpliftScorer scorer = FitUplift(method, train.x, train.y, train.t, tuned.best);
        const Eigen::VectorXd pred = scorer.Score(test.x);
        cell.pehe = Pehe(AsSpan(*test.tau), AsSpan(pred));
        cell.chosen = grid[tuned.best_index].label;
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
    }
    if (config.include_oracle) {
      cells.back()[r].pehe = Pehe(AsSpan(*test.tau), AsSpan(*test.tau));
    }
  });
  return result;
}

void WriteGroundTruthCsv(const GroundTruth& truth, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "mu0,mu1,tau,propensity\n";
  for (Eigen::Index i = 0; i < truth.size(); ++i) {
    out << FormatDouble(truth.mu0[i]) << ',' << FormatDouble(truth.mu1[i]) << ','
        << FormatDouble(truth.tau[i]) << ',' << FormatDouble(truth.propensity[i]) << '\n';
  }
  if (!out) throw Error("failed writing " + path.string());
}

GenerateResult RunGenerate(const ExperimentConfig& config) {
  const GeneratedData data = GenerateIteDataset(config.generator);
  std::error_code ec;
  std::filesystem::create_directories(config.output, ec);
  if (ec) {
    throw Error("cannot create output directory " + config.output.string() + ": " +
                ec.message());
  }
  GenerateResult result;
  result.rows = data.dataset.size();
  result.data = config.output / "data.csv";
  result.truth = config.output / "ground_truth.csv";
  result.manifest = config.output / "manifest.yaml";
  WriteCsv(data.dataset, result.data);
  WriteGroundTruthCsv(data.truth, result.truth);
  ExperimentConfig manifest = config;
  manifest.protocol = Protocol::kGenerate;
  std::ofstream out(result.manifest);
  if (!out) throw Error("cannot write " + result.manifest.string());
  out << ToYaml(manifest);
  if (!out) throw Error("failed writing " + result.manifest.string());
  return result;
}

ValidationResult RunValidate(const ExperimentConfig& config) {
  Dataset data = config.data_path ? LoadSource(config)
                                  : GenerateIteDataset(config.generator).dataset;
  ValidationResult result;
  result.rows = data.size();
  result.constraints = ValidateConstraints(data);
  result.treatment_ratio = data.treatment_ratio();
  const Eigen::VectorXd visit = data.Outcomes(OutcomeKind::kVisit);
  const Eigen::VectorXd conversion = data.Outcomes(OutcomeKind::kConversion);
  result.visit_rate = visit.size() ? visit.mean() : 0.0;
  result.conversion_rate = conversion.size() ? conversion.mean() : 0.0;
  double exposed = 0.0;
  for (const Sample& s : data.samples()) exposed += s.exposure;
  result.exposure_rate = data.empty() ? 0.0 : exposed / static_cast<double>(data.size());

  // The learned checks run on a stratified sample when max_train_rows is set.
  const Eigen::VectorXd t_all = data.Treatments();
  const std::vector<int> strata = StrataLabels(AsSpan(t_all));
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), 0);
  rows = CapRows(rows, strata, config.max_train_rows, DeriveSeed(config.seed, 3));
  const Dataset sample = data.Subset(rows);
  const Eigen::MatrixXd x = Encode(sample, config.encoding).values();

  C2stOptions c2st;
  c2st.c_grid = config.c2st_c_grid;
  c2st.workers = config.workers;
  result.c2st = C2st(x, sample.Treatments(), config.c2st_permutations,
                     DeriveSeed(config.seed, 1), c2st);

  const OutcomeKind outcomes[] = {OutcomeKind::kVisit, OutcomeKind::kConversion};
  for (std::size_t k = 0; k < 2; ++k) {
    OutcomeCheck check;
    check.outcome = OutcomeKindName(outcomes[k]);
    try {
      check.result =
          DummyImprovement(x, sample.Outcomes(outcomes[k]), DeriveSeed(config.seed, 10 + k));
    } catch (const std::exception& e) {
      check.error = e.what();
    }
    result.informativeness.push_back(std::move(check));
  }
  return result;
}

}  // namespace upliftbench
