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

#include "airfed/aircomp.hpp"

#include <cmath>
#include <stdexcept>

#include "airfed/analysis.hpp"
#include "airfed/kernels.hpp"
#include "airfed/units.hpp"

namespace airfed {
namespace {

// Seed-derivation stream tag for Monte Carlo SNR trials.
constexpr std::uint64_t kSnrTrialStream = 0x5352;

double receive_scale(double rho, const SystemParams& params) {
  return std::sqrt(params.antenna_gain * params.ref_path_loss * rho);
}

}  // namespace

ReceivedSymbol transmit_slot(std::span<const double> s_column, double rho,
                             const SystemParams& params, Rng& rng) {
  if (!(rho >= 0.0)) {
    throw std::domain_error("transmit_slot: rho must be >= 0");
  }
  ReceivedSymbol out;
  out.rho_used = rho;
  if (params.noise_enabled) {
    const double part_std = std::sqrt(params.noise_power_w / 2.0);
    const double re = part_std * rng.next_gaussian();
    const double im = part_std * rng.next_gaussian();
    out.noise_sample = {re, im};
  }
  const double signal =
      receive_scale(rho, params) * kernels::sum(s_column.data(),
                                                s_column.size());
  out.value = out.noise_sample + std::complex<double>{signal, 0.0};
  return out;
}

double decode_slot(const ReceivedSymbol& received, double rho,
                   const SystemParams& params) {
  if (!(rho > 0.0)) {
    throw std::domain_error("decode_slot: rho must be > 0");
  }
  return received.value.real() / receive_scale(rho, params);
}

AggregateEstimate aggregate_round(const ClippedUpdate& update,
                                  std::span<const double> rho,
                                  const SystemParams& params, Rng& rng) {
  const std::size_t dim = update.dimension();
  if (rho.size() != 1 && rho.size() != dim) {
    throw std::invalid_argument(
        "aggregate_round: rho must hold one value or one per slot");
  }
  for (const double value : rho) {
    if (!(value > 0.0)) {
      throw std::domain_error("aggregate_round: rho must be > 0");
    }
  }

  AggregateEstimate out;
  out.estimate.assign(dim, 0.0);
  out.per_slot_noise_std.resize(dim);
  for (const auto& client : update.by_client) {
    kernels::axpy(1.0, client.data(), out.estimate.data(), dim);
  }

  const double gb = params.antenna_gain * params.ref_path_loss;
  const double sigma_n = std::sqrt(params.noise_power_w);
  for (std::size_t d = 0; d < dim; ++d) {
    const double rho_d = rho.size() == 1 ? rho[0] : rho[d];
    // The decoded noise term has std sigma_n / sqrt(2 G beta rho): the real
    // part carries half the complex noise power, divided by the scale.
    out.per_slot_noise_std[d] = sigma_n / std::sqrt(2.0 * gb * rho_d);
    if (params.noise_enabled) {
      const double noise_re =
          std::sqrt(params.noise_power_w / 2.0) * rng.next_gaussian();
      rng.next_gaussian();  // imaginary part, discarded by the decode
      out.estimate[d] += noise_re / receive_scale(rho_d, params);
    }
  }
  return out;
}

SnrReport measure_snr(const SystemParams& params, const PrivacyTarget& target,
                      PowerPolicy policy, long num_trials, std::uint64_t seed,
                      SymbolMode mode, const ClippedUpdate* realized) {
  if (num_trials < 1) {
    throw std::invalid_argument("measure_snr: num_trials must be >= 1");
  }
  if (mode == SymbolMode::realized &&
      (realized == nullptr || realized->dimension() == 0)) {
    throw std::invalid_argument(
        "measure_snr: realized mode needs a nonempty update");
  }

  const std::size_t clients = static_cast<std::size_t>(params.num_clients);
  const std::vector<double> weights = path_gain_weights(params);
  const double s_max = target.clip_threshold;
  const double gb = params.antenna_gain * params.ref_path_loss;

  std::vector<std::complex<double>> gains(clients);
  std::vector<double> eff(clients);
  std::vector<double> column(clients, s_max);

  // Per-trial signal powers land in a trial-indexed buffer and are reduced
  // in index order afterwards, so the measurement is identical no matter
  // how trials would be scheduled.
  std::vector<double> power(static_cast<std::size_t>(num_trials));
  for (long t = 0; t < num_trials; ++t) {
    Rng rng(derive_seed(seed, kSnrTrialStream, static_cast<std::uint64_t>(t)));
    const double part_std = std::sqrt(0.5);
    for (auto& h : gains) {
      const double re = part_std * rng.next_gaussian();
      const double im = part_std * rng.next_gaussian();
      h = {re, im};
    }
    kernels::abs_squared(gains.data(), eff.data(), clients);
    for (std::size_t i = 0; i < clients; ++i) eff[i] *= weights[i];

    if (mode == SymbolMode::realized) {
      realized->slot_column(
          static_cast<std::size_t>(t) % realized->dimension(), column);
    }

    double rho = 0.0;
    switch (policy) {
      case PowerPolicy::dp_blind: {
        double g = eff[0];
        for (std::size_t i = 1; i < clients; ++i) g = std::min(g, eff[i]);
        rho = scaling_dp_blind(params, target, g).rho;
        break;
      }
      case PowerPolicy::dp_informed:
        rho = scaling_dp_informed(params, target, eff, column).rho;
        break;
      case PowerPolicy::conventional:
        rho = scaling_conventional(params, eff, column, s_max).rho;
        break;
    }
    const double signal_sum = kernels::sum(column.data(), clients);
    power[static_cast<std::size_t>(t)] = gb * rho * signal_sum * signal_sum;
  }

  const double n = static_cast<double>(num_trials);
  const double mean = kernels::sum(power.data(), power.size()) / n;
  double variance = 0.0;
  for (const double p : power) variance += (p - mean) * (p - mean);
  variance = num_trials > 1 ? variance / (n - 1.0) : 0.0;

  SnrReport report;
  report.epsilon = target.epsilon;
  report.delta = target.delta;
  report.num_clients = params.num_clients;
  report.p0_w = params.max_tx_power_w;
  report.policy = policy;
  report.mode = mode;
  report.trials = num_trials;
  report.measured_snr = mean / params.noise_power_w;
  report.measured_snr_db = linear_to_db(report.measured_snr);
  report.std_error = std::sqrt(variance / n) / params.noise_power_w;
  report.exact_bound = analysis::snr_bound(params, target);
  report.approx_bound =
      analysis::snr_bound_approx(params.num_clients, target.epsilon,
                                 target.delta);
  return report;
}

}  // namespace airfed
