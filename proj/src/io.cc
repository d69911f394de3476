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

#include "ldpkde/io.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "json.hpp"
#include "ldpkde/json_util.h"
#include "ldpkde/status_macros.h"

namespace ldpkde {
namespace {

using nlohmann::json;

void Dump(const json& v, int indent, std::string* out) {
  const std::string pad(indent + 2, ' ');
  const std::string close_pad(indent, ' ');
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) {
        out->append("{}");
        return;
      }
      out->append("{\n");
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out->append(",\n");
        first = false;
        absl::StrAppend(out, pad, json(it.key()).dump(), ": ");
        Dump(it.value(), indent + 2, out);
      }
      absl::StrAppend(out, "\n", close_pad, "}");
      return;
    }
    case json::value_t::array: {
      if (v.empty()) {
        out->append("[]");
        return;
      }
      out->append("[\n");
      for (size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out->append(",\n");
        out->append(pad);
        Dump(v[i], indent + 2, out);
      }
      absl::StrAppend(out, "\n", close_pad, "]");
      return;
    }
    case json::value_t::number_float: {
      const double d = v.get<double>();
      out->append(std::isfinite(d) ? FormatDouble(d) : "null");
      return;
    }
    default:
      out->append(v.dump());
  }
}

absl::Status DataError(absl::string_view what) {
  return absl::DataLossError(absl::StrCat("data-error: ", what));
}

absl::StatusOr<json> ParseJson(absl::string_view text) {
  json j = json::parse(text.begin(), text.end(), nullptr,
                       /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    return DataError("metadata is not a JSON object");
  }
  return j;
}

template <typename T>
absl::StatusOr<T> Field(const json& j, const char* key) {
  if (!j.contains(key)) {
    return DataError(absl::StrCat("metadata lacks \"", key, "\""));
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    return DataError(absl::StrCat("metadata field \"", key, "\": ", e.what()));
  }
}

}  // namespace

std::string DumpJson(const nlohmann::json& value) {
  std::string out;
  Dump(value, 0, &out);
  out.push_back('\n');
  return out;
}

std::string FormatDouble(double v) { return absl::StrFormat("%.17g", v); }

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("data-error: cannot open ", path));
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

absl::Status WriteFile(const std::string& path, absl::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrCat("data-error: cannot write ", path));
  }
  out << contents;
  out.close();
  if (!out) {
    return absl::DataLossError(absl::StrCat("data-error: failed writing ", path));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<double>> ParseObservations(absl::string_view text) {
  std::vector<double> out;
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line[0] == '#') continue;
    double v;
    if (!absl::SimpleAtod(line, &v) || !std::isfinite(v)) {
      return DataError(absl::StrFormat("line %d: cannot parse \"%s\" as a real",
                                       line_no, line));
    }
    out.push_back(v);
  }
  if (out.empty()) return DataError("no observations");
  return out;
}

std::string DatasetCsv(const PrivateDataset& dataset) {
  std::string out = "owner_id,h,t,z\n";
  const int m = static_cast<int>(dataset.grid().size());
  for (int b = 0; b < static_cast<int>(dataset.bandwidths().size()); ++b) {
    const std::string h = FormatDouble(dataset.bandwidths()[b]);
    for (int64_t row = 0; row < dataset.n(); ++row) {
      for (int j = 0; j < m; ++j) {
        absl::StrAppend(&out, dataset.owner_ids()[row], ",", h, ",",
                        FormatDouble(dataset.grid()[j]), ",",
                        FormatDouble(dataset.value(b, row, j)), "\n");
      }
    }
  }
  return out;
}

absl::StatusOr<std::string> DatasetMetadataJson(
    const PrivateDataset& dataset, absl::string_view run_config_json) {
  const KernelSpec& spec = GetKernel(dataset.kernel());
  const PrivacyBudget& budget = dataset.budget();
  json j;
  j["budget"] = {{"alpha", budget.alpha()},
                 {"beta", budget.beta()},
                 {"n_releases", budget.n_releases()},
                 {"alpha_eff", budget.alpha_eff()},
                 {"beta_eff", budget.beta_eff()}};
  j["mechanism"] = std::string(MechanismToString(dataset.mechanism()));
  j["kernel"] = std::string(KernelToString(dataset.kernel()));
  j["n"] = dataset.n();
  j["grid"] = dataset.grid();
  j["bandwidths"] = dataset.bandwidths();
  LDPKDE_ASSIGN_OR_RETURN(
      double c, NoiseCoefficient(spec, budget, dataset.mechanism()));
  json scales = json::array();
  for (double h : dataset.bandwidths()) {
    absl::StatusOr<NoiseScale> ns =
        dataset.mechanism() == Mechanism::kLaplace
            ? CalibrateLaplace(spec, h, budget)
            : CalibrateGaussianProcess(spec, h, budget);
    if (!ns.ok()) return ns.status();
    scales.push_back(ns->scale);
  }
  j["noise"] = {{"coefficient", c}, {"scales", scales}};
  if (!run_config_json.empty()) {
    json rc = json::parse(run_config_json.begin(), run_config_json.end(),
                          nullptr, false);
    if (rc.is_discarded()) {
      return absl::InvalidArgumentError("invalid-input: run config is not JSON");
    }
    j["run_config"] = rc;
  }
  return DumpJson(j);
}

absl::StatusOr<PrivateDataset> ParseDataset(absl::string_view csv,
                                            absl::string_view metadata_json) {
  LDPKDE_ASSIGN_OR_RETURN(json meta, ParseJson(metadata_json));
  if (!meta.contains("budget") || !meta["budget"].is_object()) {
    return DataError("metadata lacks \"budget\"");
  }
  LDPKDE_ASSIGN_OR_RETURN(double alpha, Field<double>(meta["budget"], "alpha"));
  LDPKDE_ASSIGN_OR_RETURN(double beta, Field<double>(meta["budget"], "beta"));
  LDPKDE_ASSIGN_OR_RETURN(int64_t releases,
                          Field<int64_t>(meta["budget"], "n_releases"));
  LDPKDE_ASSIGN_OR_RETURN(std::string mech_name,
                          Field<std::string>(meta, "mechanism"));
  LDPKDE_ASSIGN_OR_RETURN(std::string kernel_name,
                          Field<std::string>(meta, "kernel"));
  LDPKDE_ASSIGN_OR_RETURN(auto grid, Field<std::vector<double>>(meta, "grid"));
  LDPKDE_ASSIGN_OR_RETURN(auto bandwidths,
                          Field<std::vector<double>>(meta, "bandwidths"));
  LDPKDE_ASSIGN_OR_RETURN(PrivacyBudget budget,
                          PrivacyBudget::Create(alpha, beta, releases));
  LDPKDE_ASSIGN_OR_RETURN(Mechanism mechanism, MechanismFromString(mech_name));
  LDPKDE_ASSIGN_OR_RETURN(KernelSpec spec, KernelFromString(kernel_name));
  LDPKDE_ASSIGN_OR_RETURN(
      PrivateDataset dataset,
      PrivateDataset::Create(grid, bandwidths, mechanism, spec.name, budget));

  // Collect per (owner, bandwidth) rows, keeping first-seen owner order.
  std::vector<int64_t> owners;
  std::map<std::pair<int64_t, int>, std::vector<double>> values;
  std::map<std::pair<int64_t, int>, std::vector<bool>> seen;
  const size_t m = grid.size();
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(csv, '\n')) {
    ++line_no;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "owner_id,h,t,z") {
        return DataError("line 1: expected header owner_id,h,t,z");
      }
      continue;
    }
    std::vector<absl::string_view> cells = absl::StrSplit(line, ',');
    int64_t owner;
    double h, t, z;
    if (cells.size() != 4 || !absl::SimpleAtoi(cells[0], &owner) ||
        !absl::SimpleAtod(cells[1], &h) || !absl::SimpleAtod(cells[2], &t) ||
        !absl::SimpleAtod(cells[3], &z) || !std::isfinite(z)) {
      return DataError(absl::StrFormat("line %d: malformed row \"%s\"",
                                       line_no, line));
    }
    absl::StatusOr<int> b = dataset.BandwidthIndex(h);
    absl::StatusOr<int> g = dataset.GridIndex(t);
    if (!b.ok() || !g.ok()) {
      return DataError(absl::StrFormat(
          "line %d: h or t not declared in the metadata", line_no));
    }
    const auto key = std::make_pair(owner, *b);
    auto& row = values[key];
    auto& mask = seen[key];
    if (row.empty()) {
      row.assign(m, 0.0);
      mask.assign(m, false);
      if (std::find(owners.begin(), owners.end(), owner) == owners.end()) {
        owners.push_back(owner);
      }
    }
    if (mask[*g]) {
      return DataError(absl::StrFormat("line %d: duplicate entry", line_no));
    }
    mask[*g] = true;
    row[*g] = z;
  }
  for (int64_t owner : owners) {
    for (int b = 0; b < static_cast<int>(bandwidths.size()); ++b) {
      auto it = values.find({owner, b});
      if (it == values.end()) continue;
      const auto& mask = seen[{owner, b}];
      if (std::find(mask.begin(), mask.end(), false) != mask.end()) {
        return DataError(absl::StrFormat(
            "owner %d lacks some grid points at h = %g", owner,
            bandwidths[b]));
      }
      LDPKDE_RETURN_IF_ERROR(dataset.AddValues(owner, b, it->second));
    }
  }
  return dataset;
}

absl::StatusOr<std::string> RunConfigFromMetadata(
    absl::string_view metadata_json) {
  LDPKDE_ASSIGN_OR_RETURN(json meta, ParseJson(metadata_json));
  if (!meta.contains("run_config")) return std::string("{}\n");
  return DumpJson(meta["run_config"]);
}

std::string MseReportCsv(absl::Span<const MseRow> rows) {
  std::string out = "n,rule,h,mse,mc_se,reps\n";
  for (const MseRow& r : rows) {
    absl::StrAppend(&out, r.n, ",", RuleLabel(r.rule), ",", FormatDouble(r.h),
                    ",", FormatDouble(r.mse), ",", FormatDouble(r.mc_se), ",",
                    r.reps, "\n");
  }
  return out;
}

std::string MseSummaryJson(
    absl::Span<const MseRow> rows,
    const std::vector<std::pair<std::string, RateFit>>& fits,
    absl::string_view run_config_json) {
  json j;
  json arr = json::array();
  for (const MseRow& r : rows) {
    json row = {{"n", r.n},
                {"rule", std::string(RuleLabel(r.rule))},
                {"h", r.h},
                {"mse", r.mse},
                {"mc_se", r.mc_se},
                {"reps", r.reps},
                {"mean", r.mean},
                {"variance", r.variance},
                {"target", r.target},
                {"smoothed_target", r.smoothed_target},
                {"v_sq", r.v_sq},
                {"lambda", r.lambda},
                {"log_n", std::log(static_cast<double>(r.n))},
                {"log_mse", std::log(r.mse)}};
    if (r.rule == RuleKind::kOracle) row["oracle_fallback"] = r.oracle_fallback;
    if (r.rule == RuleKind::kAdaptive) {
      row["selection_counts"] = r.selection_counts;
    }
    arr.push_back(row);
  }
  j["rows"] = arr;
  if (!fits.empty()) {
    j["fitted_slope"] = fits.front().second.slope;
    j["slope_se"] = fits.front().second.slope_se;
  } else {
    j["fitted_slope"] = nullptr;
    j["slope_se"] = nullptr;
  }
  json by_rule = json::object();
  for (const auto& [label, fit] : fits) {
    by_rule[label] = {{"slope", fit.slope},
                      {"slope_se", fit.slope_se},
                      {"intercept", fit.intercept}};
  }
  j["fits"] = by_rule;
  if (!run_config_json.empty()) {
    json rc = json::parse(run_config_json.begin(), run_config_json.end(),
                          nullptr, false);
    if (!rc.is_discarded()) j["run_config"] = rc;
  }
  return DumpJson(j);
}

std::string LepskiTraceJson(const LepskiSelection& selection,
                            const BandwidthGrid& grid,
                            const LepskiConfig& cfg) {
  json j;
  j["t"] = cfg.t;
  j["kappa"] = cfg.kappa;
  j["M"] = cfg.M;
  j["noise_coefficient"] = cfg.noise_coefficient;
  j["grid"] = {{"n", grid.n()},
               {"a", grid.a()},
               {"h_max", grid.h_max()},
               {"h_min", grid.h_min()},
               {"bandwidths", grid.bandwidths()}};
  j["estimates"] = selection.estimates;
  std::vector<bool> admissible(selection.admissible.begin(),
                               selection.admissible.end());
  j["admissible"] = admissible;
  json comps = json::array();
  for (const LepskiComparison& c : selection.trace) {
    comps.push_back({{"h", c.h},
                     {"eta", c.eta},
                     {"j", c.h_index},
                     {"k", c.eta_index},
                     {"abs_diff", c.abs_diff},
                     {"psi", c.psi},
                     {"ok", c.ok}});
  }
  j["comparisons"] = comps;
  j["selected_index"] = selection.index;
  j["h_hat"] = selection.h;
  return DumpJson(j);
}

std::string AuditResultJson(const AuditConfig& config,
                            const AuditResult& result) {
  json j;
  j["mechanism"] = std::string(MechanismToString(config.mechanism));
  j["kernel"] = std::string(KernelToString(config.kernel));
  j["h"] = config.h;
  j["alpha"] = config.budget.alpha_eff();
  j["beta"] = config.budget.beta_eff();
  j["x"] = config.x;
  j["x_prime"] = config.x_prime;
  j["t"] = config.t;
  j["samples"] = config.samples;
  j["seed"] = config.seed;
  j["scale_factor"] = config.scale_factor;
  j["noise_scale"] = result.noise_scale;
  j["estimate"] = result.estimate;
  j["standard_error"] = result.standard_error;
  j["threshold"] = result.threshold;
  j["event"] = result.event;
  j["p_x"] = result.p_x;
  j["p_x_prime"] = result.p_x_prime;
  j["verdict"] = result.pass ? "PASS" : "FAIL";
  return DumpJson(j);
}

}  // namespace ldpkde
