// Copyright 2026 The ldpkde Authors
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

#include "ldpkde/cli.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_replace.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "json.hpp"
#include "ldpkde/audit.h"
#include "ldpkde/density.h"
#include "ldpkde/estimator.h"
#include "ldpkde/gp_sampler.h"
#include "ldpkde/io.h"
#include "ldpkde/json_util.h"
#include "ldpkde/kernels.h"
#include "ldpkde/lepski.h"
#include "ldpkde/parallel.h"
#include "ldpkde/privacy.h"
#include "ldpkde/random.h"
#include "ldpkde/simulate.h"
#include "ldpkde/status_macros.h"

namespace ldpkde {
namespace {

using nlohmann::json;

absl::Status BadValue(absl::string_view key, absl::string_view value) {
  return absl::InvalidArgumentError(
      absl::StrCat("invalid-input: bad value '", value, "' for ", key));
}

absl::StatusOr<double> ToDouble(absl::string_view key, absl::string_view v) {
  double d;
  if (!absl::SimpleAtod(absl::StripAsciiWhitespace(v), &d) ||
      !std::isfinite(d)) {
    return BadValue(key, v);
  }
  return d;
}

// Integers, also written as 2^k.
absl::StatusOr<int64_t> ToInt(absl::string_view key, absl::string_view v) {
  v = absl::StripAsciiWhitespace(v);
  int64_t out;
  if (absl::SimpleAtoi(v, &out)) return out;
  std::vector<absl::string_view> parts = absl::StrSplit(v, '^');
  int64_t base, exp;
  if (parts.size() == 2 && absl::SimpleAtoi(parts[0], &base) &&
      absl::SimpleAtoi(parts[1], &exp) && exp >= 0 && exp < 63) {
    out = 1;
    for (int64_t i = 0; i < exp; ++i) out *= base;
    return out;
  }
  return BadValue(key, v);
}

absl::StatusOr<bool> ToBool(absl::string_view key, absl::string_view v) {
  const std::string s = absl::AsciiStrToLower(absl::StripAsciiWhitespace(v));
  if (s == "true" || s == "1" || s == "yes" || s.empty()) return true;
  if (s == "false" || s == "0" || s == "no") return false;
  return BadValue(key, v);
}

std::vector<std::string> ToList(absl::string_view v) {
  std::vector<std::string> out;
  for (absl::string_view item : absl::StrSplit(v, ',', absl::SkipEmpty())) {
    item = absl::StripAsciiWhitespace(item);
    if (!item.empty()) out.emplace_back(item);
  }
  return out;
}

std::string NormalizeKey(absl::string_view key) {
  return absl::StrReplaceAll(absl::StripAsciiWhitespace(key), {{"_", "-"}});
}

absl::StatusOr<std::vector<double>> ParseCurveGrid(absl::string_view spec,
                                                   double t) {
  spec = absl::StripAsciiWhitespace(spec);
  if (spec.empty()) return std::vector<double>{t};
  std::vector<absl::string_view> parts = absl::StrSplit(spec, ':');
  std::vector<double> out;
  if (parts.size() == 3) {
    LDPKDE_ASSIGN_OR_RETURN(double lo, ToDouble("curve-grid", parts[0]));
    LDPKDE_ASSIGN_OR_RETURN(double hi, ToDouble("curve-grid", parts[1]));
    LDPKDE_ASSIGN_OR_RETURN(int64_t m, ToInt("curve-grid", parts[2]));
    if (m < 1 || m > kMaxGridPoints || (m > 1 && !(hi > lo))) {
      return BadValue("curve-grid", spec);
    }
    for (int64_t i = 0; i < m; ++i) {
      out.push_back(m == 1 ? lo : lo + (hi - lo) * i / (m - 1.0));
    }
    return out;
  }
  for (const std::string& item : ToList(spec)) {
    LDPKDE_ASSIGN_OR_RETURN(double v, ToDouble("curve-grid", item));
    out.push_back(v);
  }
  if (out.empty()) return BadValue("curve-grid", spec);
  return out;
}

struct ParsedRule {
  std::string label;
  enum Kind { kFixed, kRate, kGrid, kOracle, kAdaptive } kind;
  double value = 0.0;
};

absl::StatusOr<ParsedRule> ParseRule(absl::string_view spec) {
  ParsedRule r;
  r.label = std::string(spec);
  if (spec == "grid") {
    r.kind = ParsedRule::kGrid;
  } else if (spec == "oracle") {
    r.kind = ParsedRule::kOracle;
  } else if (spec == "adaptive") {
    r.kind = ParsedRule::kAdaptive;
  } else if (absl::ConsumePrefix(&spec, "rate:")) {
    r.kind = ParsedRule::kRate;
    LDPKDE_ASSIGN_OR_RETURN(r.value, ToDouble("bandwidth", spec));
  } else {
    absl::ConsumePrefix(&spec, "fixed:");
    r.kind = ParsedRule::kFixed;
    LDPKDE_ASSIGN_OR_RETURN(r.value, ToDouble("bandwidth", spec));
    if (!(r.value > 0.0)) return BadValue("bandwidth", spec);
  }
  return r;
}

absl::StatusOr<std::optional<Mechanism>> ParseMechanism(
    absl::string_view name, bool allow_none) {
  if (name == "none") {
    if (!allow_none) {
      return absl::InvalidArgumentError(
          "invalid-input: mechanism 'none' is only valid for simulate");
    }
    return std::optional<Mechanism>();
  }
  absl::StatusOr<Mechanism> m = MechanismFromString(name);
  if (!m.ok()) return absl::InvalidArgumentError(m.status().message());
  return std::optional<Mechanism>(*m);
}

absl::StatusOr<KernelSpec> ParseKernel(absl::string_view name) {
  absl::StatusOr<KernelSpec> k = KernelFromString(name);
  if (!k.ok()) return absl::InvalidArgumentError(k.status().message());
  return k;
}

absl::StatusOr<std::pair<PrivateDataset, std::string>> LoadDataset(
    const RunConfig& c) {
  if (c.dataset.empty()) {
    return absl::InvalidArgumentError("invalid-input: --dataset is required");
  }
  LDPKDE_ASSIGN_OR_RETURN(std::string csv, ReadFile(c.dataset + ".csv"));
  LDPKDE_ASSIGN_OR_RETURN(std::string meta, ReadFile(c.dataset + ".json"));
  LDPKDE_ASSIGN_OR_RETURN(PrivateDataset ds, ParseDataset(csv, meta));
  return std::make_pair(std::move(ds), std::move(meta));
}

absl::Status CmdRelease(const RunConfig& c, std::ostream& out) {
  if (c.input.empty() || c.output.empty()) {
    return absl::InvalidArgumentError(
        "invalid-input: release needs --input and --output");
  }
  LDPKDE_ASSIGN_OR_RETURN(KernelSpec spec, ParseKernel(c.kernel));
  LDPKDE_ASSIGN_OR_RETURN(std::optional<Mechanism> mech,
                          ParseMechanism(c.mechanism, false));
  LDPKDE_ASSIGN_OR_RETURN(PrivacyBudget base,
                          PrivacyBudget::Create(c.alpha, c.beta));
  LDPKDE_ASSIGN_OR_RETURN(std::vector<double> points,
                          ParseCurveGrid(c.curve_grid, c.t));
  if (c.bandwidth.empty()) {
    return absl::InvalidArgumentError("invalid-input: --bandwidth is required");
  }
  LDPKDE_ASSIGN_OR_RETURN(std::string text, ReadFile(c.input));
  LDPKDE_ASSIGN_OR_RETURN(std::vector<double> x, ParseObservations(text));
  const int64_t n = static_cast<int64_t>(x.size());

  std::vector<double> bandwidths;
  for (const std::string& s : c.bandwidth) {
    LDPKDE_ASSIGN_OR_RETURN(ParsedRule rule, ParseRule(s));
    switch (rule.kind) {
      case ParsedRule::kFixed:
        bandwidths.push_back(rule.value);
        break;
      case ParsedRule::kRate:
        bandwidths.push_back(std::pow(static_cast<double>(n), rule.value));
        break;
      default: {
        LDPKDE_ASSIGN_OR_RETURN(BandwidthGrid grid,
                                BandwidthGrid::Build(n, c.a, c.h_max));
        for (double h : grid.bandwidths()) bandwidths.push_back(h);
      }
    }
  }
  std::sort(bandwidths.rbegin(), bandwidths.rend());
  bandwidths.erase(std::unique(bandwidths.begin(), bandwidths.end(),
                               [](double p, double q) {
                                 return std::abs(p - q) <= 1e-12 * p;
                               }),
                   bandwidths.end());
  const int num_h = static_cast<int>(bandwidths.size());
  const int m = static_cast<int>(points.size());

  // Every owner releases once per bandwidth; a Laplace curve is m scalar
  // releases.
  const int64_t releases =
      static_cast<int64_t>(num_h) * (*mech == Mechanism::kLaplace ? m : 1);
  LDPKDE_ASSIGN_OR_RETURN(PrivacyBudget budget, Compose(base, releases));
  std::vector<std::optional<CurveReleaser>> curves(num_h);
  std::vector<std::optional<LaplaceReleaser>> scalars(num_h);
  for (int b = 0; b < num_h; ++b) {
    if (*mech == Mechanism::kGaussianProcess) {
      LDPKDE_ASSIGN_OR_RETURN(
          CurveReleaser r,
          CurveReleaser::Create(spec, points, bandwidths[b], budget));
      curves[b].emplace(std::move(r));
    } else {
      LDPKDE_ASSIGN_OR_RETURN(
          LaplaceReleaser r,
          LaplaceReleaser::Create(spec, bandwidths[b], budget));
      scalars[b].emplace(std::move(r));
    }
  }
  std::vector<std::vector<double>> values(
      num_h, std::vector<double>(static_cast<size_t>(n) * m));
  ParallelFor(n, c.jobs, [&](int64_t i) {
    const RandomStream owner = RandomStream::Derive(c.seed, i);
    for (int b = 0; b < num_h; ++b) {
      RandomStream rng = owner.Split(b);
      absl::Span<double> row = absl::MakeSpan(&values[b][i * m], m);
      if (curves[b]) {
        curves[b]->ReleaseInto(x[i], rng, row);
      } else {
        for (int j = 0; j < m; ++j) {
          row[j] = scalars[b]->Release(
              ScaledKernelValue(spec.name, x[i] - points[j], bandwidths[b]),
              rng);
        }
      }
    }
  });
  LDPKDE_ASSIGN_OR_RETURN(
      PrivateDataset ds,
      PrivateDataset::Create(points, bandwidths, *mech, spec.name, budget));
  for (int b = 0; b < num_h; ++b) {
    for (int64_t i = 0; i < n; ++i) {
      LDPKDE_RETURN_IF_ERROR(ds.AddValues(
          i, b, absl::MakeConstSpan(&values[b][i * m], m)));
    }
  }
  LDPKDE_ASSIGN_OR_RETURN(std::string meta,
                          DatasetMetadataJson(ds, RunConfigToJson(c)));
  LDPKDE_RETURN_IF_ERROR(WriteFile(c.output + ".csv", DatasetCsv(ds)));
  LDPKDE_RETURN_IF_ERROR(WriteFile(c.output + ".json", meta));
  out << "released n=" << n << " bandwidths=" << num_h
      << " grid_points=" << m << " alpha_eff=" << FormatDouble(budget.alpha_eff())
      << " beta_eff=" << FormatDouble(budget.beta_eff()) << "\n";
  return absl::OkStatus();
}

absl::Status CmdEstimate(const RunConfig& c, std::ostream& out) {
  LDPKDE_ASSIGN_OR_RETURN(auto loaded, LoadDataset(c));
  LDPKDE_ASSIGN_OR_RETURN(double f, loaded.first.Aggregate(c.h, c.t));
  const double value = c.clip ? std::max(0.0, f) : f;
  json j = {{"h", c.h}, {"t", c.t}, {"f_hat", value}, {"clipped", c.clip},
            {"n", loaded.first.n()}};
  if (!c.output.empty()) {
    LDPKDE_RETURN_IF_ERROR(WriteFile(c.output, DumpJson(j)));
  }
  out << "f_hat " << FormatDouble(value) << "\n";
  return absl::OkStatus();
}

absl::Status CmdAdapt(RunConfig c, const std::set<std::string>& explicit_keys,
                      std::ostream& out) {
  LDPKDE_ASSIGN_OR_RETURN(auto loaded, LoadDataset(c));
  const PrivateDataset& ds = loaded.first;
  // Grid parameters default to the ones used at release time.
  LDPKDE_ASSIGN_OR_RETURN(std::string rc_text,
                          RunConfigFromMetadata(loaded.second));
  absl::StatusOr<RunConfig> release_cfg = RunConfigFromJson(rc_text);
  if (release_cfg.ok()) {
    if (!explicit_keys.count("a")) c.a = release_cfg->a;
    if (!explicit_keys.count("h-max")) c.h_max = release_cfg->h_max;
  }
  if (!(c.M > 0.0)) {
    return absl::InvalidArgumentError(
        "invalid-input: adapt needs --M > 0 (a bound on the density)");
  }
  LDPKDE_ASSIGN_OR_RETURN(BandwidthGrid grid,
                          BandwidthGrid::Build(ds.n(), c.a, c.h_max));
  const PrivacyBudget& budget = ds.budget();
  if (budget.n_releases() % grid.size() != 0) {
    return absl::DataLossError(
        "data-error: dataset budget does not match the bandwidth grid");
  }
  LDPKDE_ASSIGN_OR_RETURN(
      PrivacyBudget per_owner,
      PrivacyBudget::Create(budget.alpha(), budget.beta(),
                            budget.n_releases() / grid.size()));
  LDPKDE_ASSIGN_OR_RETURN(
      LepskiConfig cfg,
      MakeLepskiConfig(c.kappa, c.M, GetKernel(ds.kernel()), ds.mechanism(),
                       per_owner, c.t, grid));
  if (c.kappa_theory) cfg.kappa = TheoreticalKappa(cfg);
  LDPKDE_ASSIGN_OR_RETURN(LepskiSelection sel, SelectAdaptive(ds, cfg, grid));
  const std::string trace_path =
      c.output.empty() ? c.dataset + ".trace.json" : c.output;
  LDPKDE_RETURN_IF_ERROR(WriteFile(trace_path, LepskiTraceJson(sel, grid, cfg)));
  out << "h_hat " << FormatDouble(sel.h) << "\n"
      << "f_hat " << FormatDouble(sel.estimates[sel.index]) << "\n"
      << "kappa " << FormatDouble(cfg.kappa) << "\n";
  return absl::OkStatus();
}

absl::Status CmdSimulate(const RunConfig& c, std::ostream& out) {
  if (c.n.empty()) {
    return absl::InvalidArgumentError("invalid-input: simulate needs --n");
  }
  LDPKDE_ASSIGN_OR_RETURN(KernelSpec spec, ParseKernel(c.kernel));
  LDPKDE_ASSIGN_OR_RETURN(std::optional<Mechanism> mech,
                          ParseMechanism(c.mechanism, true));
  absl::StatusOr<Density> density = Density::FromString(c.density);
  if (!density.ok()) {
    return absl::InvalidArgumentError(density.status().message());
  }
  LDPKDE_ASSIGN_OR_RETURN(PrivacyBudget budget,
                          PrivacyBudget::Create(c.alpha, c.beta));
  std::vector<ParsedRule> rules;
  for (const std::string& s :
       c.bandwidth.empty() ? std::vector<std::string>{"adaptive"}
                           : c.bandwidth) {
    LDPKDE_ASSIGN_OR_RETURN(ParsedRule r, ParseRule(s));
    if (r.kind == ParsedRule::kGrid) {
      return absl::InvalidArgumentError(
          "invalid-input: simulate takes oracle or adaptive, not grid");
    }
    rules.push_back(r);
  }
  std::vector<MseRow> all_rows;
  std::vector<std::string> labels;
  for (int64_t n : c.n) {
    MseConfig mc;
    mc.density = density->name();
    mc.kernel = spec.name;
    mc.mechanism = mech;
    mc.budget = budget;
    mc.n = n;
    mc.t = c.t;
    mc.replications = c.reps;
    mc.seed = c.seed;
    mc.kappa = c.kappa;
    mc.a = c.a;
    mc.h_max = c.h_max;
    mc.M = c.M;
    mc.jobs = c.jobs;
    mc.rules.clear();
    bool grid_rule = false;
    for (const ParsedRule& r : rules) {
      switch (r.kind) {
        case ParsedRule::kFixed:
          mc.rules.push_back(BandwidthRule::Fixed(r.value));
          break;
        case ParsedRule::kRate:
          mc.rules.push_back(
              BandwidthRule::Fixed(std::pow(static_cast<double>(n), r.value)));
          break;
        case ParsedRule::kOracle:
          mc.rules.push_back(BandwidthRule::Oracle());
          grid_rule = true;
          break;
        default:
          mc.rules.push_back(BandwidthRule::Adaptive());
          grid_rule = true;
      }
    }
    if (c.kappa_theory && grid_rule) {
      LDPKDE_ASSIGN_OR_RETURN(BandwidthGrid grid,
                              BandwidthGrid::Build(n, c.a, c.h_max));
      LDPKDE_ASSIGN_OR_RETURN(
          LepskiConfig cfg,
          MakeLepskiConfig(c.kappa, c.M > 0 ? c.M : density->sup_norm(), spec,
                           mech.value_or(Mechanism::kLaplace), budget, c.t,
                           grid));
      if (!mech.has_value()) cfg.noise_coefficient = 0.0;
      mc.kappa = TheoreticalKappa(cfg);
    }
    LDPKDE_ASSIGN_OR_RETURN(std::vector<MseRow> rows, RunMse(mc));
    for (size_t k = 0; k < rows.size(); ++k) {
      all_rows.push_back(rows[k]);
      labels.push_back(rules[k].label);
    }
  }
  std::vector<std::pair<std::string, RateFit>> fits;
  for (const ParsedRule& r : rules) {
    std::vector<MseRow> subset;
    for (size_t i = 0; i < all_rows.size(); ++i) {
      if (labels[i] == r.label) subset.push_back(all_rows[i]);
    }
    absl::StatusOr<RateFit> fit = FitRate(subset);
    if (fit.ok()) fits.emplace_back(r.label, *fit);
  }
  const std::string csv = MseReportCsv(all_rows);
  if (!c.output.empty()) {
    LDPKDE_RETURN_IF_ERROR(WriteFile(c.output + ".csv", csv));
    LDPKDE_RETURN_IF_ERROR(WriteFile(
        c.output + ".json", MseSummaryJson(all_rows, fits, RunConfigToJson(c))));
  }
  out << csv;
  for (const auto& [label, fit] : fits) {
    out << "slope " << label << " " << FormatDouble(fit.slope) << " se "
        << FormatDouble(fit.slope_se) << "\n";
  }
  return absl::OkStatus();
}

absl::Status CmdAudit(const RunConfig& c, std::ostream& out) {
  LDPKDE_ASSIGN_OR_RETURN(KernelSpec spec, ParseKernel(c.kernel));
  LDPKDE_ASSIGN_OR_RETURN(std::optional<Mechanism> mech,
                          ParseMechanism(c.mechanism, false));
  AuditConfig ac;
  ac.mechanism = *mech;
  ac.kernel = spec.name;
  ac.h = c.h;
  LDPKDE_ASSIGN_OR_RETURN(ac.budget, PrivacyBudget::Create(c.alpha, c.beta));
  const auto pair = AdversarialPair(spec.name, c.h, c.t);
  ac.x = c.x.value_or(pair.first);
  ac.x_prime = c.x_prime.value_or(pair.second);
  ac.t = c.t;
  ac.samples = c.samples;
  ac.seed = c.seed;
  ac.scale_factor = c.scale_factor;
  LDPKDE_ASSIGN_OR_RETURN(AuditResult result, AuditPrivacy(ac));
  const std::string text = AuditResultJson(ac, result);
  if (!c.output.empty()) LDPKDE_RETURN_IF_ERROR(WriteFile(c.output, text));
  out << text;
  return absl::OkStatus();
}

struct SubcommandSpec {
  const char* name;
  const char* help;
  std::vector<const char*> keys;
};

const std::vector<SubcommandSpec>& Subcommands() {
  static const auto* specs = new std::vector<SubcommandSpec>{
      {"release", "Release private kernel curves for each observation",
       {"input", "output", "kernel", "mechanism", "alpha", "beta",
        "bandwidth", "a", "h-max", "t", "curve-grid", "seed", "jobs"}},
      {"estimate", "Aggregate a released dataset at (h, t)",
       {"dataset", "h", "t", "clip", "output"}},
      {"adapt", "Select the bandwidth at t and write the selection trace",
       {"dataset", "t", "kappa", "kappa-theory", "M", "a", "h-max",
        "output"}},
      {"simulate", "Monte Carlo MSE over sample sizes and bandwidth rules",
       {"density", "kernel", "mechanism", "alpha", "beta", "n", "bandwidth",
        "t", "reps", "seed", "kappa", "kappa-theory", "a", "h-max", "M",
        "jobs", "output"}},
      {"audit", "Empirical privacy audit of one release",
       {"mechanism", "kernel", "h", "alpha", "beta", "t", "x", "x-prime",
        "samples", "seed", "scale-factor", "output"}},
  };
  return *specs;
}

bool IsFlag(absl::string_view key) {
  return key == "clip" || key == "kappa-theory";
}

bool IsList(absl::string_view key) { return key == "n" || key == "bandwidth"; }

}  // namespace

absl::Status ApplyConfigValue(RunConfig& c, absl::string_view raw_key,
                              absl::string_view value) {
  const std::string key = NormalizeKey(raw_key);
  value = absl::StripAsciiWhitespace(value);
  if (key == "subcommand") {
    c.subcommand = std::string(value);
  } else if (key == "kernel") {
    c.kernel = std::string(value);
  } else if (key == "mechanism") {
    c.mechanism = std::string(value);
  } else if (key == "alpha") {
    LDPKDE_ASSIGN_OR_RETURN(c.alpha, ToDouble(key, value));
  } else if (key == "beta") {
    LDPKDE_ASSIGN_OR_RETURN(c.beta, ToDouble(key, value));
  } else if (key == "n") {
    c.n.clear();
    for (const std::string& item : ToList(value)) {
      LDPKDE_ASSIGN_OR_RETURN(int64_t v, ToInt(key, item));
      c.n.push_back(v);
    }
  } else if (key == "bandwidth") {
    c.bandwidth = ToList(value);
  } else if (key == "a") {
    LDPKDE_ASSIGN_OR_RETURN(c.a, ToDouble(key, value));
  } else if (key == "h-max") {
    LDPKDE_ASSIGN_OR_RETURN(c.h_max, ToDouble(key, value));
  } else if (key == "t") {
    LDPKDE_ASSIGN_OR_RETURN(c.t, ToDouble(key, value));
  } else if (key == "curve-grid") {
    c.curve_grid = std::string(value);
  } else if (key == "seed") {
    uint64_t s;
    if (!absl::SimpleAtoi(value, &s)) return BadValue(key, value);
    c.seed = s;
  } else if (key == "input") {
    c.input = std::string(value);
  } else if (key == "dataset") {
    c.dataset = std::string(value);
  } else if (key == "output") {
    c.output = std::string(value);
  } else if (key == "kappa") {
    LDPKDE_ASSIGN_OR_RETURN(c.kappa, ToDouble(key, value));
  } else if (key == "kappa-theory") {
    LDPKDE_ASSIGN_OR_RETURN(c.kappa_theory, ToBool(key, value));
  } else if (key == "M") {
    LDPKDE_ASSIGN_OR_RETURN(c.M, ToDouble(key, value));
  } else if (key == "density") {
    c.density = std::string(value);
  } else if (key == "reps") {
    LDPKDE_ASSIGN_OR_RETURN(c.reps, ToInt(key, value));
  } else if (key == "jobs") {
    LDPKDE_ASSIGN_OR_RETURN(int64_t j, ToInt(key, value));
    c.jobs = static_cast<int>(j);
  } else if (key == "clip") {
    LDPKDE_ASSIGN_OR_RETURN(c.clip, ToBool(key, value));
  } else if (key == "h") {
    LDPKDE_ASSIGN_OR_RETURN(c.h, ToDouble(key, value));
  } else if (key == "x") {
    LDPKDE_ASSIGN_OR_RETURN(c.x, ToDouble(key, value));
  } else if (key == "x-prime") {
    LDPKDE_ASSIGN_OR_RETURN(c.x_prime, ToDouble(key, value));
  } else if (key == "samples") {
    LDPKDE_ASSIGN_OR_RETURN(c.samples, ToInt(key, value));
  } else if (key == "scale-factor") {
    LDPKDE_ASSIGN_OR_RETURN(c.scale_factor, ToDouble(key, value));
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid-input: unknown config key '", raw_key, "'"));
  }
  return absl::OkStatus();
}

absl::Status ApplyConfigFile(RunConfig& config, absl::string_view text) {
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != absl::string_view::npos) line = line.substr(0, hash);
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == absl::string_view::npos) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "invalid-input: config line %d is not key=value", line_no));
    }
    absl::Status s =
        ApplyConfigValue(config, line.substr(0, eq), line.substr(eq + 1));
    if (!s.ok()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("config line %d: %s", line_no, s.message()));
    }
  }
  return absl::OkStatus();
}

std::string RunConfigToJson(const RunConfig& c) {
  json j;
  j["subcommand"] = c.subcommand;
  j["kernel"] = c.kernel;
  j["mechanism"] = c.mechanism;
  j["alpha"] = c.alpha;
  j["beta"] = c.beta;
  j["n"] = c.n;
  j["bandwidth"] = c.bandwidth;
  j["a"] = c.a;
  j["h_max"] = c.h_max;
  j["t"] = c.t;
  j["curve_grid"] = c.curve_grid;
  j["seed"] = c.seed;
  j["input"] = c.input;
  j["dataset"] = c.dataset;
  j["output"] = c.output;
  j["kappa"] = c.kappa;
  j["kappa_theory"] = c.kappa_theory;
  j["M"] = c.M;
  j["density"] = c.density;
  j["reps"] = c.reps;
  j["jobs"] = c.jobs;
  j["clip"] = c.clip;
  j["h"] = c.h;
  j["x"] = c.x.has_value() ? json(*c.x) : json(nullptr);
  j["x_prime"] = c.x_prime.has_value() ? json(*c.x_prime) : json(nullptr);
  j["samples"] = c.samples;
  j["scale_factor"] = c.scale_factor;
  return DumpJson(j);
}

absl::StatusOr<RunConfig> RunConfigFromJson(absl::string_view text) {
  json j = json::parse(text.begin(), text.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError("invalid-input: run config is not JSON");
  }
  RunConfig c;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const json& v = it.value();
    std::string textual;
    if (v.is_null()) {
      continue;
    } else if (v.is_string()) {
      textual = v.get<std::string>();
    } else if (v.is_boolean()) {
      textual = v.get<bool>() ? "true" : "false";
    } else if (v.is_number_float()) {
      textual = FormatDouble(v.get<double>());
    } else if (v.is_number()) {
      textual = v.dump();
    } else if (v.is_array()) {
      std::vector<std::string> items;
      for (const json& e : v) {
        items.push_back(e.is_string() ? e.get<std::string>() : e.dump());
      }
      textual = absl::StrJoin(items, ",");
    } else {
      return absl::InvalidArgumentError(absl::StrCat(
          "invalid-input: unsupported JSON value for ", it.key()));
    }
    LDPKDE_RETURN_IF_ERROR(ApplyConfigValue(c, it.key(), textual));
  }
  return c;
}

absl::string_view ErrorClass(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kOutOfRange:
      return "config";
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kDataLoss:
    case absl::StatusCode::kPermissionDenied:
      return "data";
    default:
      return "numerical";
  }
}

int ExitCodeFor(const absl::Status& status) {
  if (status.ok()) return 0;
  const absl::string_view cls = ErrorClass(status);
  if (cls == "config") return 2;
  if (cls == "data") return 3;
  return 4;
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app("Locally private kernel density estimation", "ldpkde");
  // "--h" is the bandwidth, so help is long-form only.
  app.set_help_flag("--help", "Print help and exit");
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path,
                 "File of key=value lines; flags override it");
  std::map<std::string, std::map<std::string, std::vector<std::string>>>
      values;
  std::map<std::string, std::map<std::string, bool>> flags;
  std::map<std::string, CLI::App*> subs;
  for (const SubcommandSpec& spec : Subcommands()) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.help);
    subs[spec.name] = sub;
    for (const char* key : spec.keys) {
      const std::string flag = absl::StrCat("--", key);
      if (IsFlag(key)) {
        sub->add_flag(flag, flags[spec.name][key]);
      } else if (IsList(key)) {
        sub->add_option(flag, values[spec.name][key])->delimiter(',');
      } else {
        sub->add_option(flag, values[spec.name][key])->expected(1);
      }
    }
  }
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error[config]: " << e.what() << "\n";
    return 2;
  }

  RunConfig config;
  std::set<std::string> explicit_keys;
  absl::Status status;
  std::string name;
  for (const auto& [sub_name, sub] : subs) {
    if (sub->parsed()) name = sub_name;
  }
  config.subcommand = name;
  if (!config_path.empty()) {
    absl::StatusOr<std::string> text = ReadFile(config_path);
    if (!text.ok()) {
      status = text.status();
    } else {
      status = ApplyConfigFile(config, *text);
      for (absl::string_view line : absl::StrSplit(*text, '\n')) {
        const size_t eq = line.find('=');
        if (eq != absl::string_view::npos) {
          explicit_keys.insert(NormalizeKey(line.substr(0, eq)));
        }
      }
    }
    config.subcommand = name;
  }
  if (status.ok()) {
    for (const auto& [key, vals] : values[name]) {
      if (subs[name]->get_option(absl::StrCat("--", key))->count() == 0) {
        continue;
      }
      status = ApplyConfigValue(config, key, absl::StrJoin(vals, ","));
      if (!status.ok()) break;
      explicit_keys.insert(key);
    }
  }
  if (status.ok()) {
    for (const auto& [key, set] : flags[name]) {
      if (subs[name]->get_option(absl::StrCat("--", key))->count() == 0) {
        continue;
      }
      status = ApplyConfigValue(config, key, set ? "true" : "false");
      explicit_keys.insert(key);
    }
  }
  if (status.ok()) {
    if (name == "release") {
      status = CmdRelease(config, out);
    } else if (name == "estimate") {
      status = CmdEstimate(config, out);
    } else if (name == "adapt") {
      status = CmdAdapt(config, explicit_keys, out);
    } else if (name == "simulate") {
      status = CmdSimulate(config, out);
    } else {
      status = CmdAudit(config, out);
    }
  }
  if (!status.ok()) {
    err << "error[" << ErrorClass(status) << "]: "
        << absl::StrReplaceAll(status.message(), {{"\n", " "}}) << "\n";
    return ExitCodeFor(status);
  }
  return 0;
}

}  // namespace ldpkde
