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

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <string>

#include "upliftbench/csv_io.h"
#include "upliftbench/errors.h"
#include "upliftbench/experiments.h"

#ifndef UPLIFTBENCH_VERSION
#define UPLIFTBENCH_VERSION "unknown"
#endif

namespace upliftbench {
namespace {

// Reference statistics of the public corpus.
constexpr double kReferenceTreatmentRatio = 0.85;
constexpr double kReferenceVisitRate = 0.0470;
constexpr double kReferenceConversionRate = 0.0029;

std::string UtcTimestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string Fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

nlohmann::json Header(const ExperimentConfig& config) {
  nlohmann::json tree;
  tree["protocol"] = ProtocolName(config.protocol);
  tree["config"] = ToYaml(config);
  tree["environment"] = {{"version", UPLIFTBENCH_VERSION},
                         {"seed", config.seed},
                         {"generator_seed", config.generator.seed},
                         {"timestamp", UtcTimestamp()}};
  return tree;
}

std::string Pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

}  // namespace

EvaluationReport MakeReport(const ExperimentConfig& config,
                            const SeparabilityResult& result) {
  EvaluationReport report;
  report.tree = Header(config);
  nlohmann::json& tree = report.tree;
  tree["train_rows"] = result.train_rows;
  tree["test_rows"] = result.test_rows;
  tree["skipped_sizes"] = result.skipped_sizes;
  tree["methods"] = result.methods;
  tree["chosen"] = nlohmann::json::object();
  for (std::size_t m = 0; m < result.methods.size(); ++m) {
    if (!result.chosen[m].empty()) tree["chosen"][result.methods[m]] = result.chosen[m];
  }
  tree["results"] = nlohmann::json::array();
  std::ostringstream table;
  std::ostringstream csv;
  csv << "size,method,auuc,ci_low,ci_high\n";
  table << Pad("size", 8);
  for (const std::string& m : result.methods) table << Pad(m, 28);
  table << '\n';
  for (std::size_t s = 0; s < result.sizes.size(); ++s) {
    nlohmann::json entry;
    entry["size"] = result.sizes[s];
    entry["auuc"] = nlohmann::json::object();
    table << Pad(std::to_string(result.sizes[s]), 8);
    for (std::size_t m = 0; m < result.methods.size(); ++m) {
      const MetricResult& r = result.auuc[s][m];
      nlohmann::json j = ToJson(r);
      j["ci_width"] = r.ci_width();
      entry["auuc"][result.methods[m]] = j;
      table << Pad(Fixed(r.value) + " [" + Fixed(r.ci_low.value_or(r.value)) + ", " +
                       Fixed(r.ci_high.value_or(r.value)) + "]",
                   28);
      csv << result.sizes[s] << ',' << result.methods[m] << ',' << FormatDouble(r.value)
          << ',' << FormatDouble(r.ci_low.value_or(r.value)) << ','
          << FormatDouble(r.ci_high.value_or(r.value)) << '\n';
    }
    table << '\n';
    nlohmann::json overlaps = nlohmann::json::array();
    bool all_overlap = true;
    for (std::size_t a = 0; a < result.methods.size(); ++a) {
      for (std::size_t b = a + 1; b < result.methods.size(); ++b) {
        const bool overlap = result.Overlap(s, a, b);
        all_overlap = all_overlap && overlap;
        overlaps.push_back(
            {{"a", result.methods[a]}, {"b", result.methods[b]}, {"overlap", overlap}});
      }
    }
    entry["overlaps"] = overlaps;
    entry["all_overlap"] = all_overlap;
    tree["results"].push_back(entry);
  }
  for (std::size_t size : result.skipped_sizes) {
    table << Pad(std::to_string(size), 8) << "skipped (larger than the test set)\n";
  }
  report.table = table.str();
  report.csv = csv.str();
  return report;
}

EvaluationReport MakeReport(const ExperimentConfig& config,
                            const IteBenchmarkResult& result) {
  EvaluationReport report;
  report.tree = Header(config);
  nlohmann::json& tree = report.tree;
  const auto summaries = result.Summaries();
  tree["n_realizations"] = result.n_realizations;
  tree["complete"] = result.Complete();
  tree["surfaces"] = nlohmann::json::object();
  std::ostringstream table;
  std::ostringstream csv;
  csv << "surface,method,realization,sqrt_pehe,chosen\n";
  table << Pad("surface", 14);
  for (const std::string& m : result.methods) table << Pad(m, 22);
  table << '\n';
  for (std::size_t s = 0; s < result.surfaces.size(); ++s) {
    const std::string surface(SurfaceKindName(result.surfaces[s]));
    nlohmann::json methods = nlohmann::json::object();
    table << Pad(surface, 14);
    for (std::size_t m = 0; m < result.methods.size(); ++m) {
      const IteSummary& sum = summaries[s][m];
      nlohmann::json values = nlohmann::json::array();
      nlohmann::json errors = nlohmann::json::object();
      for (std::size_t r = 0; r < result.cells[s][m].size(); ++r) {
        const IteCell& cell = result.cells[s][m][r];
        values.push_back(cell.pehe ? nlohmann::json(*cell.pehe) : nlohmann::json());
        if (!cell.error.empty()) errors[std::to_string(r)] = cell.error;
        csv << surface << ',' << result.methods[m] << ',' << r << ','
            << (cell.pehe ? FormatDouble(*cell.pehe) : std::string()) << ','
            << cell.chosen << '\n';
      }
      methods[result.methods[m]] = {{"mean", sum.completed ? nlohmann::json(sum.mean)
                                                           : nlohmann::json()},
                                    {"std", sum.completed ? nlohmann::json(sum.std)
                                                          : nlohmann::json()},
                                    {"completed", sum.completed},
                                    {"best", sum.best},
                                    {"sqrt_pehe", values},
                                    {"errors", errors}};
      std::string text = sum.completed == 0
                             ? "missing"
                             : Fixed(sum.mean, 3) + " +- " + Fixed(sum.std, 3);
      if (sum.best) text += " *";
      if (sum.completed > 0 && sum.completed < result.n_realizations) {
        text += " (" + std::to_string(sum.completed) + "/" +
                std::to_string(result.n_realizations) + ")";
      }
      table << Pad(text, 22);
    }
    table << '\n';
    tree["surfaces"][surface] = methods;
  }
  table << "* lowest mean sqrt(PEHE) among learned methods\n";
  report.table = table.str();
  report.csv = csv.str();
  return report;
}

EvaluationReport MakeReport(const ExperimentConfig& config,
                            const ValidationResult& result) {
  EvaluationReport report;
  report.tree = Header(config);
  nlohmann::json& tree = report.tree;
  tree["rows"] = result.rows;
  tree["constraints"] = {
      {"exposed_controls", result.constraints.exposed_controls},
      {"conversions_without_visit", result.constraints.conversions_without_visit},
      {"total", result.constraints.total()}};
  tree["rates"] = {{"treatment_ratio", result.treatment_ratio},
                   {"visit", result.visit_rate},
                   {"conversion", result.conversion_rate},
                   {"exposure", result.exposure_rate}};
  tree["reference"] = {{"treatment_ratio", kReferenceTreatmentRatio},
                       {"visit", kReferenceVisitRate},
                       {"conversion", kReferenceConversionRate}};
  tree["c2st"] = ToJson(result.c2st);
  tree["informativeness"] = nlohmann::json::object();

  std::ostringstream table;
  table << Pad("rows", 24) << result.rows << '\n';
  table << Pad("constraint failures", 24) << result.constraints.total() << " (exposed controls "
        << result.constraints.exposed_controls << ", conversions without visit "
        << result.constraints.conversions_without_visit << ")\n";
  table << Pad("treatment ratio", 24) << Fixed(result.treatment_ratio) << "  (reference "
        << Fixed(kReferenceTreatmentRatio, 2) << ")\n";
  table << Pad("visit rate", 24) << Fixed(100 * result.visit_rate, 2) << "%  (reference "
        << Fixed(100 * kReferenceVisitRate, 2) << "%)\n";
  table << Pad("conversion rate", 24) << Fixed(100 * result.conversion_rate, 2)
        << "%  (reference " << Fixed(100 * kReferenceConversionRate, 2) << "%)\n";
  table << Pad("exposure rate", 24) << Fixed(100 * result.exposure_rate, 2) << "%\n";
  table << Pad("C2ST", 24) << "median null loss " << Fixed(result.c2st.median_null_loss(), 5)
        << ", model loss " << Fixed(result.c2st.model_loss, 5) << ", p "
        << Fixed(result.c2st.p_value, 5) << " (" << result.c2st.n_permutations
        << " permutations)\n";
  for (const OutcomeCheck& check : result.informativeness) {
    if (check.result) {
      tree["informativeness"][check.outcome] = ToJson(*check.result);
      table << Pad("improvement " + check.outcome, 24)
            << Fixed(check.result->improvement_percent, 2) << "% over the dummy\n";
    } else {
      tree["informativeness"][check.outcome] = {{"error", check.error}};
      table << Pad("improvement " + check.outcome, 24) << "n/a (" << check.error << ")\n";
    }
  }
  report.table = table.str();
  return report;
}

EvaluationReport MakeReport(const ExperimentConfig& config, const GenerateResult& result) {
  EvaluationReport report;
  report.tree = Header(config);
  report.tree["rows"] = result.rows;
  report.tree["files"] = {{"data", result.data.string()},
                          {"ground_truth", result.truth.string()},
                          {"manifest", result.manifest.string()}};
  std::ostringstream table;
  table << "wrote " << result.rows << " rows\n"
        << "  " << result.data.string() << '\n'
        << "  " << result.truth.string() << '\n'
        << "  " << result.manifest.string() << '\n';
  report.table = table.str();
  return report;
}

void WriteReport(const EvaluationReport& report, const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw Error("cannot create " + directory.string() + ": " + ec.message());
  auto write = [&](const char* name, const std::string& text) {
    const std::filesystem::path path = directory / name;
    std::ofstream out(path);
    out << text;
    if (!out) throw Error("failed writing " + path.string());
  };
  write("report.json", report.tree.dump(2) + "\n");
  write("report.txt", report.table);
  if (!report.csv.empty()) write("report.csv", report.csv);
}

}  // namespace upliftbench
