// Copyright 2026 The Airfed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AIRFED_VALIDATE_HPP_
#define AIRFED_VALIDATE_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "airfed/sysconfig.hpp"

namespace airfed::validate {

// One entry of the validation report. `value` is the measured statistic and
// `threshold` the limit it was held against (direction depends on the check;
// `detail` spells it out).
struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

// Injection points for negative-control tests: swapping the bound
// implementation for a tampered one must make the dominance check fail.
struct Hooks {
  std::function<double(const SystemParams&, const PrivacyTarget&)> snr_bound;
};

// Monte Carlo sizes for the suite. Defaults match the documented oracle
// budgets; the CLI scales snr_trials from the scenario.
struct Options {
  long ks_draws = 100000;        // min-effective-gain distribution test
  long rho_mc_draws = 1000000;   // E[rho**] cross-check
  long pair_draws = 10000;       // rho ordering / power budget sweep
  long snr_trials = 100000;      // measured-SNR dominance per grid point
  std::uint64_t seed = 1;
};

// Runs the oracle suite against a scenario: distribution tests, the
// E[rho**] closed-form cross-check, measured-SNR dominance and monotonicity
// over the scenario grids, the scaling-factor ordering and power-budget
// sweep, the epsilon round trip, gradient checks, and the noiseless
// aggregation equivalence. Returns one CheckResult per check.
std::vector<CheckResult> run_suite(const Scenario& scenario,
                                   const Options& options,
                                   const Hooks& hooks = {});

// One-sample Kolmogorov–Smirnov statistic of `samples` (sorted in place)
// against the CDF `cdf`.
double ks_statistic(std::vector<double>& samples,
                    const std::function<double(double)>& cdf);

// Large-sample critical value of the one-sample KS statistic at the given
// significance: sqrt(-ln(alpha/2) / (2 n)).
double ks_critical_value(double alpha, std::size_t num_samples);

}  // namespace airfed::validate

#endif  // AIRFED_VALIDATE_HPP_
