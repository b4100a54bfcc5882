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
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>

#include "airfed/privacy.hpp"
#include "airfed/units.hpp"

namespace {

using namespace airfed;

SystemParams ring_of_five() {
  SystemParams p;
  p.num_clients = 5;
  p.antenna_gain = 1.0;
  p.ref_path_loss = 2.5118864315095822e-05;  // -46 dB
  p.path_loss_exponent = 2.0;
  p.noise_power_w = 1e-9;   // -60 dBm
  p.max_tx_power_w = 0.01;  // 10 dBm
  p.distances_m.assign(5, 100.0);
  return p;
}

PrivacyTarget strict_target() {
  PrivacyTarget t;
  t.epsilon = 0.01;
  t.delta = 0.1;
  t.clip_threshold = 5e-5;
  return t;
}

// Frozen oracles for the reference deployment, independently evaluated from
// the closed forms (g_th, truncated-exponential mean, bound), kept to 17
// significant digits. Tolerance 1e-12 relative absorbs association-order
// differences between evaluators.
TEST_CASE("analysis: closed-form bound matches frozen oracles") {
  const SystemParams p5 = ring_of_five();
  const SystemParams p100 = p5.with_num_clients(100);
  const PrivacyTarget t = strict_target();

  CHECK(analysis::snr_bound(p5, t) ==
        doctest::Approx(0.00024720973079684136).epsilon(1e-12));
  CHECK(analysis::snr_bound(p100, t) ==
        doctest::Approx(0.097056514489358495).epsilon(1e-12));
  CHECK(linear_to_db(analysis::snr_bound(p5, t)) ==
        doctest::Approx(-36.069344383235124).epsilon(1e-12));
  CHECK(linear_to_db(analysis::snr_bound(p100, t)) ==
        doctest::Approx(-10.129753092006087).epsilon(1e-12));
}

TEST_CASE("analysis: approximation matches frozen oracles and gap pattern") {
  // I^2 eps^2 / (4 ln 12.5); no physical constants involved.
  CHECK(analysis::snr_bound_approx(5, 0.01, 0.1) ==
        doctest::Approx(0.00024745334436794753).epsilon(1e-12));
  CHECK(analysis::snr_bound_approx(100, 0.01, 0.1) ==
        doctest::Approx(0.098981337747179002).epsilon(1e-12));

  const SystemParams p5 = ring_of_five();
  const SystemParams p100 = p5.with_num_clients(100);
  const PrivacyTarget t = strict_target();
  const double gap5 = (analysis::snr_bound_approx(5, 0.01, 0.1) -
                       analysis::snr_bound(p5, t)) /
                      analysis::snr_bound(p5, t);
  const double gap100 = (analysis::snr_bound_approx(100, 0.01, 0.1) -
                         analysis::snr_bound(p100, t)) /
                        analysis::snr_bound(p100, t);
  // The first-order truncation overshoots, more so as I (hence the
  // exponent's argument) grows: ~0.1% at I=5, ~2% at I=100.
  CHECK(gap5 > 0.0);
  CHECK(gap5 == doctest::Approx(0.0009854530010444).epsilon(1e-6));
  CHECK(gap100 == doctest::Approx(0.019831984158380424).epsilon(1e-6));
}

TEST_CASE("analysis: expected scaling matches its frozen oracle") {
  const SystemParams p = ring_of_five();
  const PrivacyTarget t = strict_target();
  CHECK(analysis::expected_scaling_dp_blind(p, t) ==
        doctest::Approx(0.15746554633731552).epsilon(1e-12));
  // Never exceeds the hard DP cap (the truncated mean is below the
  // truncation point's image).
  CHECK(analysis::expected_scaling_dp_blind(p, t) <= dp_scaling_cap(p, t));
}

TEST_CASE("analysis: bound is the deterministic-part SNR of E[rho]") {
  // snr_bound == G beta I^2 S^2 E[rho**] / sigma_n^2 — the three closed
  // forms must be mutually consistent, not just individually right.
  const SystemParams p = ring_of_five();
  const PrivacyTarget t = strict_target();
  const double lhs = analysis::snr_bound(p, t);
  const double rhs = p.antenna_gain * p.ref_path_loss * 25.0 *
                     t.clip_threshold * t.clip_threshold *
                     analysis::expected_scaling_dp_blind(p, t) /
                     p.noise_power_w;
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("analysis: bound is monotone in epsilon and num_clients") {
  const SystemParams p = ring_of_five();
  PrivacyTarget t = strict_target();
  double prev = 0.0;
  for (double eps : {0.01, 0.1, 0.5, 0.95}) {
    t.epsilon = eps;
    const double b = analysis::snr_bound(p, t);
    CHECK(b > prev);
    prev = b;
  }
  t.epsilon = 0.01;
  double prev_clients = 0.0;
  for (int count : {5, 10, 25, 50, 100}) {
    const double b = analysis::snr_bound(p.with_num_clients(count), t);
    CHECK(b > prev_clients);
    prev_clients = b;
  }
}

TEST_CASE("analysis: the bound barely depends on the power budget") {
  // The cap branch dominates at strict epsilon: multiplying P0 by 100
  // moves the bound by well under one percent.
  SystemParams p = ring_of_five();
  const PrivacyTarget t = strict_target();
  const double at_10dbm = analysis::snr_bound(p, t);
  p.max_tx_power_w = dbm_to_watts(30.0);
  const double at_30dbm = analysis::snr_bound(p, t);
  CHECK(std::fabs(at_30dbm - at_10dbm) / at_10dbm < 0.01);
}

TEST_CASE("analysis: tradeoff_table covers the grid in sorted order") {
  const SystemParams p = ring_of_five();
  const std::vector<double> eps_grid = {0.5, 0.01, 0.1, 0.95};
  const std::vector<int> client_grid = {100, 5};
  const std::vector<analysis::SnrBoundPoint> rows =
      analysis::tradeoff_table(p, eps_grid, client_grid, 0.1, 5e-5);
  REQUIRE(rows.size() == 8);
  // Sorted by (num_clients, epsilon) ascending regardless of input order.
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const bool ordered =
        rows[i - 1].num_clients < rows[i].num_clients ||
        (rows[i - 1].num_clients == rows[i].num_clients &&
         rows[i - 1].epsilon < rows[i].epsilon);
    CHECK(ordered);
  }
  CHECK(rows[0].num_clients == 5);
  CHECK(rows[0].epsilon == 0.01);
  CHECK(rows[0].exact_bound ==
        doctest::Approx(0.00024720973079684136).epsilon(1e-12));
  CHECK(rows[4].num_clients == 100);
  CHECK(rows[4].epsilon == 0.01);
  CHECK(rows[4].exact_bound ==
        doctest::Approx(0.097056514489358495).epsilon(1e-12));
  for (const auto& row : rows) {
    CHECK(row.delta == 0.1);
    CHECK(row.g_th > 0.0);
    CHECK(row.expected_rho > 0.0);
    CHECK(row.approx_bound >= row.exact_bound);
  }
}

TEST_CASE("analysis: csv serialization is byte-stable with a fixed header") {
  const SystemParams p = ring_of_five();
  const std::vector<double> eps_grid = {0.01};
  const std::vector<int> client_grid = {5};
  const std::vector<analysis::SnrBoundPoint> rows =
      analysis::tradeoff_table(p, eps_grid, client_grid, 0.1, 5e-5);

  std::ostringstream first, second;
  analysis::write_table_csv(first, rows);
  analysis::write_table_csv(second, rows);
  CHECK(first.str() == second.str());

  const std::string text = first.str();
  const std::string header = text.substr(0, text.find('\n'));
  CHECK(header ==
        "epsilon, delta, num_clients, g_th, exact_bound, exact_bound_db, "
        "approx_bound, expected_rho");
  // One header plus one row, newline-terminated.
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  // Full precision survives: the frozen bound appears verbatim.
  CHECK(text.find("0.00024720973079684136") != std::string::npos);
}

TEST_CASE("analysis: invalid targets are rejected") {
  const SystemParams p = ring_of_five();
  PrivacyTarget t = strict_target();
  t.delta = 1.3;
  CHECK_THROWS_AS(analysis::snr_bound(p, t), std::domain_error);
  CHECK_THROWS_AS(analysis::snr_bound_approx(5, 0.01, 1.3),
                  std::domain_error);
}

}  // namespace
