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

#ifndef LDPKDE_CLI_H_
#define LDPKDE_CLI_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace ldpkde {

// Everything a subcommand needs. Each field has a key (the long flag name
// without dashes, also used in config files and JSON); see ApplyConfigValue.
struct RunConfig {
  std::string subcommand;
  std::string kernel = "sinc";
  // laplace, gp, or none (simulate only).
  std::string mechanism = "laplace";
  double alpha = 1.0;
  double beta = 0.0;
  // Sample sizes for simulate.
  std::vector<int64_t> n;
  // Bandwidth specs: "<h>", "fixed:<h>", "rate:<p>" (h = n^p), "grid",
  // "oracle", "adaptive".
  std::vector<std::string> bandwidth;
  double a = 2.0;
  double h_max = 1.0;
  double t = 0.0;
  // Curve evaluation grid: "lo:hi:m" or a comma list; empty means {t}.
  std::string curve_grid;
  uint64_t seed = 1;
  std::string input;
  std::string dataset;
  std::string output;
  double kappa = 2.0;
  bool kappa_theory = false;
  // Bound on ||f||_inf; 0 in simulate means the test density's own.
  double M = 0.0;
  std::string density = "gaussian_std";
  int64_t reps = 500;
  int jobs = 0;
  bool clip = false;
  // Bandwidth for estimate and audit.
  double h = 0.5;
  std::optional<double> x;
  std::optional<double> x_prime;
  int64_t samples = 1000000;
  double scale_factor = 1.0;

  bool operator==(const RunConfig&) const = default;
};

// Sets one field from its textual value. Unknown keys and malformed values
// are config errors (InvalidArgument).
absl::Status ApplyConfigValue(RunConfig& config, absl::string_view key,
                              absl::string_view value);

// Flat key=value lines; '#' starts a comment.
absl::Status ApplyConfigFile(RunConfig& config, absl::string_view text);

std::string RunConfigToJson(const RunConfig& config);
absl::StatusOr<RunConfig> RunConfigFromJson(absl::string_view json);

// 2 for configuration errors, 3 for data errors, 4 for numerical errors.
int ExitCodeFor(const absl::Status& status);
// "config", "data" or "numerical".
absl::string_view ErrorClass(const absl::Status& status);

// Runs the command line `args` (args[0] is the program name). Results go to
// `out`; a failure prints one line "error[<class>]: <message>" to `err` and
// returns the matching exit code.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace ldpkde

#endif  // LDPKDE_CLI_H_
