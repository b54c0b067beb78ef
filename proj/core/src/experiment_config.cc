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

#include "upliftbench/experiment_config.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <type_traits>

#include <yaml-cpp/yaml.h>

#include "upliftbench/csv_io.h"
#include "upliftbench/errors.h"

namespace upliftbench {
namespace {

// Rejects keys outside the allowed set so typos do not pass silently.
void CheckKeys(const YAML::Node& node, std::string_view where,
               std::initializer_list<std::string_view> allowed) {
  if (!node.IsMap()) throw ConfigError(std::string(where) + ": expected a mapping");
  for (const auto& item : node) {
    const std::string key = item.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
    }
  }
}

template <typename T>
void Read(const YAML::Node& node, const char* key, T* out) {
  const YAML::Node value = node[key];
  if (!value) return;
  try {
    *out = value.as<T>();
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.msg);
  }
}

template <typename Enum, typename Parse>
void ReadEnum(const YAML::Node& node, const char* key, Enum* out, Parse parse) {
  std::string name;
  if (!node[key]) return;
  Read(node, key, &name);
  *out = parse(name);
}

void ReadEncoding(const YAML::Node& node, EncodingParams* out) {
  if (!node) return;
  CheckKeys(node, "encoding", {"n_projections", "buckets_per_projection", "seed"});
  Read(node, "n_projections", &out->n_projections);
  Read(node, "buckets_per_projection", &out->buckets_per_projection);
  Read(node, "seed", &out->seed);
}

void ReadGenerator(const YAML::Node& node, GeneratorConfig* g) {
  if (!node) return;
  CheckKeys(node, "generator",
            {"n", "seed", "surface", "assignment", "rct_ratio", "delta", "noise_sd",
             "outcome_mode", "exposure_rate", "conversion_given_visit", "surface_params",
             "covariates", "encoding"});
  Read(node, "n", &g->n);
  Read(node, "seed", &g->seed);
  ReadEnum(node, "surface", &g->surface, ParseSurfaceKind);
  ReadEnum(node, "assignment", &g->assignment, ParseAssignmentMode);
  Read(node, "rct_ratio", &g->rct_ratio);
  Read(node, "delta", &g->delta);
  Read(node, "noise_sd", &g->noise_sd);
  ReadEnum(node, "outcome_mode", &g->outcome_mode, ParseOutcomeMode);
  Read(node, "exposure_rate", &g->exposure_rate);
  Read(node, "conversion_given_visit", &g->conversion_given_visit);
  if (const YAML::Node s = node["surface_params"]) {
    CheckKeys(s, "surface_params",
              {"case_a_support", "case_a_probs", "case_b_support", "case_b_probs",
               "case_b_offset", "n_anchors", "sigma", "weight_scale", "distance",
               "target_effect"});
    SurfaceParams& p = g->surface_params;
    Read(s, "case_a_support", &p.case_a_support);
    Read(s, "case_a_probs", &p.case_a_probs);
    Read(s, "case_b_support", &p.case_b_support);
    Read(s, "case_b_probs", &p.case_b_probs);
    Read(s, "case_b_offset", &p.case_b_offset);
    Read(s, "n_anchors", &p.n_anchors);
    Read(s, "sigma", &p.sigma);
    Read(s, "weight_scale", &p.weight_scale);
    ReadEnum(s, "distance", &p.distance, ParseAnchorDistance);
    Read(s, "target_effect", &p.target_effect);
  }
  if (const YAML::Node c = node["covariates"]) {
    CheckKeys(c, "covariates", {"correlation", "zipf_exponent"});
    Read(c, "correlation", &g->covariates.correlation);
    Read(c, "zipf_exponent", &g->covariates.zipf_exponent);
  }
  ReadEncoding(node["encoding"], &g->encoding);
}

void Validate(const ExperimentConfig& c) {
  if (c.cv_folds < 2) throw ConfigError("cv_folds must be >= 2");
  if (c.auuc_resolution < 1) throw ConfigError("auuc_resolution must be >= 1");
  if (!(c.train_fraction > 0.0 && c.train_fraction < 1.0)) {
    throw ConfigError("train_fraction must lie in (0, 1)");
  }
  if (!(c.ite_train_fraction > 0.0 && c.ite_train_fraction < 1.0)) {
    throw ConfigError("ite.train_fraction must lie in (0, 1)");
  }
  if (c.n_bootstrap < 2) throw ConfigError("n_bootstrap must be >= 2");
  if (c.n_realizations < 1) throw ConfigError("n_realizations must be >= 1");
  if (c.c2st_permutations < 19) throw ConfigError("c2st_permutations must be >= 19");
  if (c.workers < 1) throw ConfigError("workers must be >= 1");
  if (!(c.planted_noise >= 0.0)) throw ConfigError("planted_noise must be >= 0");
  if (c.generator.n == 0) throw ConfigError("generator.n must be >= 1");
  const GeneratorConfig& g = c.generator;
  if (!(g.rct_ratio > 0.0 && g.rct_ratio < 1.0)) {
    throw ConfigError("generator.rct_ratio must lie in (0, 1)");
  }
  if (!(g.delta > 0.0 && g.delta < 0.5)) {
    throw ConfigError("generator.delta must lie in (0, 0.5)");
  }
  if (!(g.noise_sd >= 0.0)) throw ConfigError("generator.noise_sd must be >= 0");
  for (double rate : {g.exposure_rate, g.conversion_given_visit}) {
    if (!(rate >= 0.0 && rate <= 1.0)) {
      throw ConfigError("generator label rates must lie in [0, 1]");
    }
  }
}

void EmitEncoding(YAML::Emitter& out, const EncodingParams& e) {
  out << YAML::BeginMap;
  out << YAML::Key << "n_projections" << YAML::Value << e.n_projections;
  out << YAML::Key << "buckets_per_projection" << YAML::Value << e.buckets_per_projection;
  out << YAML::Key << "seed" << YAML::Value << e.seed;
  out << YAML::EndMap;
}

// Shortest text that reads back to the same double.
std::string Num(double v) { return FormatDouble(v); }

template <typename T>
void EmitList(YAML::Emitter& out, const char* key, const std::vector<T>& values) {
  out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const T& v : values) {
    if constexpr (std::is_floating_point_v<T>) {
      out << Num(v);
    } else {
      out << v;
    }
  }
  out << YAML::EndSeq;
}

}  // namespace

std::string_view ProtocolName(Protocol protocol) {
  switch (protocol) {
    case Protocol::kSeparability:
      return "separability";
    case Protocol::kIteBenchmark:
      return "ite-bench";
    case Protocol::kGenerate:
      return "generate";
    case Protocol::kValidate:
      return "validate";
  }
  return "unknown";
}

Protocol ParseProtocol(std::string_view name) {
  if (name == "separability") return Protocol::kSeparability;
  if (name == "ite-bench" || name == "ite_bench" || name == "ite_benchmark") {
    return Protocol::kIteBenchmark;
  }
  if (name == "generate") return Protocol::kGenerate;
  if (name == "validate") return Protocol::kValidate;
  throw ConfigError("unknown protocol '" + std::string(name) + "'");
}

ExperimentConfig DefaultConfig(Protocol protocol) {
  ExperimentConfig c;
  c.protocol = protocol;
  switch (protocol) {
    case Protocol::kSeparability:
    case Protocol::kValidate: {
      // Binary-outcome RCT corpus with the imbalance of the real data.
      GeneratorConfig& g = c.generator;
      g.n = 100000;
      g.assignment = AssignmentMode::kRct;
      g.rct_ratio = 0.85;
      g.outcome_mode = OutcomeMode::kBinary;
      g.surface = SurfaceKind::kMultiPeaked;
      // Narrow kernels and a 10-point mean uplift give enough heterogeneity
      // for the planted pair to separate at desk-scale test sizes.
      g.surface_params.sigma = 0.25;
      g.surface_params.weight_scale = 0.5;
      g.surface_params.target_effect = 0.1;
      c.planted_noise = 10.0;
      c.methods = {UpliftMethod::kTwoModel, UpliftMethod::kCvt, UpliftMethod::kMom,
                   UpliftMethod::kSdr};
      c.max_train_rows = 20000;
      break;
    }
    case Protocol::kIteBenchmark:
    case Protocol::kGenerate:
      c.methods = {UpliftMethod::kTLearner, UpliftMethod::kXLearner,
                   UpliftMethod::kRLearner, UpliftMethod::kDrLearner};
      break;
  }
  return c;
}

ExperimentConfig ParseExperimentConfig(std::string_view yaml_text, Protocol fallback) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw ConfigError("invalid YAML: " + e.msg);
  }
  if (root.IsNull()) return DefaultConfig(fallback);
  CheckKeys(root, "config",
            {"protocol", "data", "schema", "generator", "methods", "encoding", "outcome",
             "cv_folds", "auuc_resolution", "separability", "ite", "validate", "seed",
             "workers", "output"});
  Protocol protocol = fallback;
  ReadEnum(root, "protocol", &protocol, ParseProtocol);
  ExperimentConfig c = DefaultConfig(protocol);

  if (root["data"]) {
    std::string path;
    Read(root, "data", &path);
    c.data_path = path;
  }
  if (root["schema"]) {
    std::string path;
    Read(root, "schema", &path);
    c.schema_path = path;
  }
  ReadGenerator(root["generator"], &c.generator);
  if (root["methods"]) {
    std::vector<std::string> names;
    Read(root, "methods", &names);
    c.methods.clear();
    for (const std::string& n : names) c.methods.push_back(ParseUpliftMethod(n));
  }
  ReadEncoding(root["encoding"], &c.encoding);
  ReadEnum(root, "outcome", &c.outcome, ParseOutcomeKind);
  Read(root, "cv_folds", &c.cv_folds);
  Read(root, "auuc_resolution", &c.auuc_resolution);
  if (const YAML::Node s = root["separability"]) {
    CheckKeys(s, "separability",
              {"train_fraction", "test_sizes", "max_train_rows", "n_bootstrap",
               "planted_pair", "planted_noise", "logistic_c_grid", "ridge_alpha_grid",
               "sdr_c_grid", "sdr_lambda_grid"});
    Read(s, "train_fraction", &c.train_fraction);
    Read(s, "test_sizes", &c.test_sizes);
    Read(s, "max_train_rows", &c.max_train_rows);
    Read(s, "n_bootstrap", &c.n_bootstrap);
    Read(s, "planted_pair", &c.planted_pair);
    Read(s, "planted_noise", &c.planted_noise);
    Read(s, "logistic_c_grid", &c.logistic_c_grid);
    Read(s, "ridge_alpha_grid", &c.ridge_alpha_grid);
    Read(s, "sdr_c_grid", &c.sdr_c_grid);
    Read(s, "sdr_lambda_grid", &c.sdr_lambda_grid);
  }
  if (const YAML::Node s = root["ite"]) {
    CheckKeys(s, "ite",
              {"surfaces", "n_realizations", "train_fraction", "l2_grid", "include_oracle"});
    if (s["surfaces"]) {
      std::vector<std::string> names;
      Read(s, "surfaces", &names);
      c.surfaces.clear();
      for (const std::string& n : names) c.surfaces.push_back(ParseSurfaceKind(n));
    }
    Read(s, "n_realizations", &c.n_realizations);
    Read(s, "train_fraction", &c.ite_train_fraction);
    Read(s, "l2_grid", &c.ite_l2_grid);
    Read(s, "include_oracle", &c.include_oracle);
  }
  if (const YAML::Node s = root["validate"]) {
    CheckKeys(s, "validate", {"c2st_permutations", "c2st_c_grid"});
    Read(s, "c2st_permutations", &c.c2st_permutations);
    Read(s, "c2st_c_grid", &c.c2st_c_grid);
  }
  Read(root, "seed", &c.seed);
  Read(root, "workers", &c.workers);
  if (root["output"]) {
    std::string path;
    Read(root, "output", &path);
    c.output = path;
  }
  Validate(c);
  return c;
}

ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path,
                                      Protocol fallback) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream text;
  text << in.rdbuf();
  try {
    return ParseExperimentConfig(text.str(), fallback);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string ToYaml(const ExperimentConfig& c) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "protocol" << YAML::Value << std::string(ProtocolName(c.protocol));
  if (c.data_path) out << YAML::Key << "data" << YAML::Value << c.data_path->string();
  if (c.schema_path) out << YAML::Key << "schema" << YAML::Value << c.schema_path->string();
  out << YAML::Key << "seed" << YAML::Value << c.seed;
  out << YAML::Key << "workers" << YAML::Value << c.workers;
  out << YAML::Key << "output" << YAML::Value << c.output.string();
  out << YAML::Key << "outcome" << YAML::Value << std::string(OutcomeKindName(c.outcome));
  std::vector<std::string> methods;
  for (UpliftMethod m : c.methods) methods.emplace_back(UpliftMethodName(m));
  EmitList(out, "methods", methods);
  out << YAML::Key << "encoding" << YAML::Value;
  EmitEncoding(out, c.encoding);
  out << YAML::Key << "cv_folds" << YAML::Value << c.cv_folds;
  out << YAML::Key << "auuc_resolution" << YAML::Value << c.auuc_resolution;

  const GeneratorConfig& g = c.generator;
  const SurfaceParams& p = g.surface_params;
  out << YAML::Key << "generator" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "n" << YAML::Value << g.n;
  out << YAML::Key << "seed" << YAML::Value << g.seed;
  out << YAML::Key << "surface" << YAML::Value << std::string(SurfaceKindName(g.surface));
  out << YAML::Key << "assignment" << YAML::Value
      << std::string(AssignmentModeName(g.assignment));
  out << YAML::Key << "rct_ratio" << YAML::Value << Num(g.rct_ratio);
  out << YAML::Key << "delta" << YAML::Value << Num(g.delta);
  out << YAML::Key << "noise_sd" << YAML::Value << Num(g.noise_sd);
  out << YAML::Key << "outcome_mode" << YAML::Value
      << std::string(OutcomeModeName(g.outcome_mode));
  out << YAML::Key << "exposure_rate" << YAML::Value << Num(g.exposure_rate);
  out << YAML::Key << "conversion_given_visit" << YAML::Value << Num(g.conversion_given_visit);
  out << YAML::Key << "surface_params" << YAML::Value << YAML::BeginMap;
  EmitList(out, "case_a_support", p.case_a_support);
  EmitList(out, "case_a_probs", p.case_a_probs);
  EmitList(out, "case_b_support", p.case_b_support);
  EmitList(out, "case_b_probs", p.case_b_probs);
  out << YAML::Key << "case_b_offset" << YAML::Value << Num(p.case_b_offset);
  out << YAML::Key << "n_anchors" << YAML::Value << p.n_anchors;
  out << YAML::Key << "sigma" << YAML::Value << Num(p.sigma);
  out << YAML::Key << "weight_scale" << YAML::Value << Num(p.weight_scale);
  out << YAML::Key << "distance" << YAML::Value
      << std::string(AnchorDistanceName(p.distance));
  out << YAML::Key << "target_effect" << YAML::Value << Num(p.target_effect);
  out << YAML::EndMap;
  out << YAML::Key << "covariates" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "correlation" << YAML::Value << Num(g.covariates.correlation);
  out << YAML::Key << "zipf_exponent" << YAML::Value << Num(g.covariates.zipf_exponent);
  out << YAML::EndMap;
  out << YAML::Key << "encoding" << YAML::Value;
  EmitEncoding(out, g.encoding);
  out << YAML::EndMap;

  out << YAML::Key << "separability" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "train_fraction" << YAML::Value << Num(c.train_fraction);
  EmitList(out, "test_sizes", c.test_sizes);
  out << YAML::Key << "max_train_rows" << YAML::Value << c.max_train_rows;
  out << YAML::Key << "n_bootstrap" << YAML::Value << c.n_bootstrap;
  out << YAML::Key << "planted_pair" << YAML::Value << c.planted_pair;
  out << YAML::Key << "planted_noise" << YAML::Value << Num(c.planted_noise);
  EmitList(out, "logistic_c_grid", c.logistic_c_grid);
  EmitList(out, "ridge_alpha_grid", c.ridge_alpha_grid);
  EmitList(out, "sdr_c_grid", c.sdr_c_grid);
  EmitList(out, "sdr_lambda_grid", c.sdr_lambda_grid);
  out << YAML::EndMap;

  out << YAML::Key << "ite" << YAML::Value << YAML::BeginMap;
  std::vector<std::string> surfaces;
  for (SurfaceKind s : c.surfaces) surfaces.emplace_back(SurfaceKindName(s));
  EmitList(out, "surfaces", surfaces);
  out << YAML::Key << "n_realizations" << YAML::Value << c.n_realizations;
  out << YAML::Key << "train_fraction" << YAML::Value << Num(c.ite_train_fraction);
  EmitList(out, "l2_grid", c.ite_l2_grid);
  out << YAML::Key << "include_oracle" << YAML::Value << c.include_oracle;
  out << YAML::EndMap;

  out << YAML::Key << "validate" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "c2st_permutations" << YAML::Value << c.c2st_permutations;
  EmitList(out, "c2st_c_grid", c.c2st_c_grid);
  out << YAML::EndMap;
  out << YAML::EndMap;
  if (!out.good()) throw ConfigError("YAML emit failed: " + out.GetLastError());
  return std::string(out.c_str()) + "\n";
}

}  // namespace upliftbench
