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

#include "airfed/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "airfed/csv.hpp"
#include "airfed/privacy.hpp"
#include "airfed/units.hpp"

namespace airfed::analysis {

double snr_bound(const SystemParams& params, const PrivacyTarget& target) {
  const double sum_r = params.sum_r_alpha();
  const double g_th = gain_threshold(params, target);
  const double i = static_cast<double>(params.num_clients);
  const double prefactor = params.antenna_gain * params.ref_path_loss * i * i *
                           params.max_tx_power_w /
                           (sum_r * params.noise_power_w);
  return prefactor * -std::expm1(-g_th * sum_r);
}

double snr_bound_approx(int num_clients, double epsilon, double delta) {
  const double log_term = std::log(1.25 / delta);
  if (!(log_term > 0.0)) {
    throw std::domain_error("snr_bound_approx: delta >= 1.25");
  }
  const double i = static_cast<double>(num_clients);
  return i * i * epsilon * epsilon / (4.0 * log_term);
}

double expected_scaling_dp_blind(const SystemParams& params,
                                 const PrivacyTarget& target) {
  const double sum_r = params.sum_r_alpha();
  const double g_th = gain_threshold(params, target);
  const double s = target.clip_threshold;
  return params.max_tx_power_w / (s * s * sum_r) * -std::expm1(-g_th * sum_r);
}

std::vector<SnrBoundPoint> tradeoff_table(const SystemParams& params,
                                          std::span<const double> epsilon_grid,
                                          std::span<const int> client_grid,
                                          double delta,
                                          double clip_threshold) {
  if (epsilon_grid.empty() || client_grid.empty()) {
    throw std::invalid_argument("tradeoff_table: empty grid");
  }
  std::vector<int> clients(client_grid.begin(), client_grid.end());
  std::vector<double> epsilons(epsilon_grid.begin(), epsilon_grid.end());
  std::sort(clients.begin(), clients.end());
  std::sort(epsilons.begin(), epsilons.end());

  std::vector<SnrBoundPoint> rows;
  rows.reserve(clients.size() * epsilons.size());
  for (const int count : clients) {
    const SystemParams sized = params.with_num_clients(count);
    for (const double eps : epsilons) {
      const PrivacyTarget target{eps, delta, clip_threshold};
      SnrBoundPoint row;
      row.epsilon = eps;
      row.delta = delta;
      row.num_clients = count;
      row.g_th = gain_threshold(sized, target);
      row.exact_bound = snr_bound(sized, target);
      row.approx_bound = snr_bound_approx(count, eps, delta);
      row.expected_rho = expected_scaling_dp_blind(sized, target);
      rows.push_back(row);
    }
  }
  return rows;
}

void write_table_csv(std::ostream& out, std::span<const SnrBoundPoint> rows) {
  out << "epsilon, delta, num_clients, g_th, exact_bound, exact_bound_db, "
         "approx_bound, expected_rho\n";
  for (const SnrBoundPoint& row : rows) {
    out << csv::number(row.epsilon) << ", " << csv::number(row.delta) << ", "
        << row.num_clients << ", " << csv::number(row.g_th) << ", "
        << csv::number(row.exact_bound) << ", "
        << csv::number(linear_to_db(row.exact_bound)) << ", "
        << csv::number(row.approx_bound) << ", "
        << csv::number(row.expected_rho) << "\n";
  }
}

}  // namespace airfed::analysis
