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

#include "upliftbench/model_io.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>

#include "upliftbench/errors.h"

namespace upliftbench {
namespace {

constexpr std::string_view kMagic = "upliftbench-scorer";
constexpr int kVersion = 1;

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void WriteBase(std::ostream& out, std::string_view role, const BaseLearnerConfig& c) {
  out << "config " << role << ' ' << BaseKindName(c.kind) << ' ' << Num(c.l2) << ' '
      << c.max_iters << ' ' << Num(c.tol) << ' ' << c.seed << '\n';
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string Word() {
    std::string w;
    if (!(in_ >> w)) throw ParseError("scorer file truncated");
    return w;
  }

  void Expect(std::string_view key) {
    const std::string w = Word();
    if (w != key) {
      throw ParseError("scorer file: expected '" + std::string(key) + "', found '" + w + "'");
    }
  }

  double Double() {
    const std::string w = Word();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc() || ptr != w.data() + w.size()) {
      throw ParseError("scorer file: bad number '" + w + "'");
    }
    return v;
  }

  template <typename Int>
  Int Integer() {
    const std::string w = Word();
    Int v = 0;
    const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc() || ptr != w.data() + w.size()) {
      throw ParseError("scorer file: bad integer '" + w + "'");
    }
    return v;
  }

  std::optional<double> OptionalDouble() {
    const std::string w = Word();
    if (w == "none") return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc() || ptr != w.data() + w.size()) {
      throw ParseError("scorer file: bad number '" + w + "'");
    }
    return v;
  }

  BaseLearnerConfig Base(std::string_view role) {
    Expect("config");
    Expect(role);
    BaseLearnerConfig c;
    c.kind = ParseBaseKind(Word());
    c.l2 = Double();
    c.max_iters = Integer<int>();
    c.tol = Double();
    c.seed = Integer<std::uint64_t>();
    return c;
  }

 private:
  std::istream& in_;
};

}  // namespace

void WriteScorer(const UpliftScorer& scorer, std::ostream& out) {
  const MetaLearnerConfig& c = scorer.config();
  out << kMagic << ' ' << kVersion << '\n';
  out << "method " << UpliftMethodName(scorer.method()) << '\n';
  out << "treatment_ratio " << Num(scorer.treatment_ratio()) << '\n';
  out << "constant_propensity "
      << (scorer.constant_propensity() ? Num(*scorer.constant_propensity()) : "none")
      << '\n';
  WriteBase(out, "outcome", c.outcome);
  WriteBase(out, "effect", c.effect);
  WriteBase(out, "propensity", c.propensity);
  out << "sdr_lambda " << Num(c.sdr_lambda) << '\n';
  out << "cvt_weighted " << (c.cvt_weighted ? 1 : 0) << '\n';
  out << "x_propensity "
      << (c.x_propensity == PropensityMode::kConstant ? "constant" : "model") << '\n';
  out << "config_constant_propensity "
      << (c.constant_propensity ? Num(*c.constant_propensity) : "none") << '\n';
  out << "cross_fit_folds " << c.cross_fit_folds << '\n';
  out << "seed " << c.seed << '\n';
  out << "blocks " << scorer.blocks().size() << '\n';
  for (const ScorerBlock& b : scorer.blocks()) {
    out << "block " << b.name << ' ' << BaseKindName(b.model.kind) << ' '
        << b.model.weights.size() << '\n';
    out << "intercept " << Num(b.model.intercept) << '\n';
    out << "weights";
    for (Eigen::Index j = 0; j < b.model.weights.size(); ++j) {
      out << ' ' << Num(b.model.weights[j]);
    }
    out << "\nend\n";
  }
  if (!out) throw Error("failed to write scorer");
}

UpliftScorer ReadScorer(std::istream& in) {
  Reader r(in);
  r.Expect(kMagic);
  const int version = r.Integer<int>();
  if (version != kVersion) {
    throw ParseError("unsupported scorer format version " + std::to_string(version));
  }
  r.Expect("method");
  const UpliftMethod method = ParseUpliftMethod(r.Word());
  r.Expect("treatment_ratio");
  const double ratio = r.Double();
  r.Expect("constant_propensity");
  const std::optional<double> constant = r.OptionalDouble();
  MetaLearnerConfig c;
  c.outcome = r.Base("outcome");
  c.effect = r.Base("effect");
  c.propensity = r.Base("propensity");
  r.Expect("sdr_lambda");
  c.sdr_lambda = r.Double();
  r.Expect("cvt_weighted");
  c.cvt_weighted = r.Integer<int>() != 0;
  r.Expect("x_propensity");
  const std::string mode = r.Word();
  if (mode != "constant" && mode != "model") {
    throw ParseError("scorer file: bad x_propensity '" + mode + "'");
  }
  c.x_propensity = mode == "constant" ? PropensityMode::kConstant : PropensityMode::kModel;
  r.Expect("config_constant_propensity");
  c.constant_propensity = r.OptionalDouble();
  r.Expect("cross_fit_folds");
  c.cross_fit_folds = r.Integer<int>();
  r.Expect("seed");
  c.seed = r.Integer<std::uint64_t>();
  r.Expect("blocks");
  const auto count = r.Integer<std::size_t>();
  std::vector<ScorerBlock> blocks;
  for (std::size_t k = 0; k < count; ++k) {
    ScorerBlock b;
    r.Expect("block");
    b.name = r.Word();
    b.model.kind = ParseBaseKind(r.Word());
    const auto d = r.Integer<Eigen::Index>();
    r.Expect("intercept");
    b.model.intercept = r.Double();
    r.Expect("weights");
    b.model.weights.resize(d);
    for (Eigen::Index j = 0; j < d; ++j) b.model.weights[j] = r.Double();
    r.Expect("end");
    blocks.push_back(std::move(b));
  }
  return UpliftScorer(method, c, ratio, std::move(blocks), constant);
}

void SaveScorer(const UpliftScorer& scorer, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  WriteScorer(scorer, out);
}

UpliftScorer LoadScorer(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return ReadScorer(in);
}

}  // namespace upliftbench
