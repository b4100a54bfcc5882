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

#ifndef AIRFED_ANALYSIS_HPP_
#define AIRFED_ANALYSIS_HPP_

#include <iosfwd>
#include <span>
#include <vector>

#include "airfed/sysconfig.hpp"

namespace airfed::analysis {

// One point of the SNR-privacy tradeoff surface.
struct SnrBoundPoint {
  double epsilon = 0.0;
  double delta = 0.0;
  int num_clients = 0;
  double g_th = 0.0;         // effective-gain threshold
  double exact_bound = 0.0;  // closed-form SNR ceiling, linear
  double approx_bound = 0.0; // small-threshold approximation, linear
  double expected_rho = 0.0; // mean symbol-blind scaling factor
};

// Closed-form ceiling on the received SNR of the symbol-blind DP policy:
//   (G beta I^2 P0 / (sum_r_alpha sigma_n^2)) *
//       (1 - exp(-g_th * sum_r_alpha)).
// Evaluated with expm1 so the small-argument regime (where the approximation
// below is relevant) keeps full precision. Rejects delta >= 1.25.
double snr_bound(const SystemParams& params, const PrivacyTarget& target);

// First-order approximation of snr_bound, valid when g_th * sum_r_alpha is
// small: I^2 eps^2 / (4 ln(1.25/delta)). Independent of every physical
// constant — the privacy target alone fixes the achievable SNR.
double snr_bound_approx(int num_clients, double epsilon, double delta);

// Mean of the symbol-blind scaling factor over channel draws:
//   (P0 / (S^2 sum_r_alpha)) * (1 - exp(-g_th * sum_r_alpha)).
// The min effective gain is exponential with rate sum_r_alpha, so the
// truncated mean has this closed form.
double expected_scaling_dp_blind(const SystemParams& params,
                                 const PrivacyTarget& target);

// Materializes the tradeoff surface over (client_grid x epsilon_grid),
// sorted by (num_clients, epsilon) ascending. Client counts other than
// params.num_clients require a uniform distance configuration.
std::vector<SnrBoundPoint> tradeoff_table(const SystemParams& params,
                                          std::span<const double> epsilon_grid,
                                          std::span<const int> client_grid,
                                          double delta,
                                          double clip_threshold);

// Serializes rows with the fixed header:
//   epsilon, delta, num_clients, g_th, exact_bound, exact_bound_db,
//   approx_bound, expected_rho
// Floats are written with 17 significant digits so output is byte-stable and
// round-trips exactly.
void write_table_csv(std::ostream& out, std::span<const SnrBoundPoint> rows);

}  // namespace airfed::analysis

#endif  // AIRFED_ANALYSIS_HPP_
