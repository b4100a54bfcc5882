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

#ifndef AIRFED_AIRCOMP_HPP_
#define AIRFED_AIRCOMP_HPP_

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "airfed/privacy.hpp"
#include "airfed/rng.hpp"
#include "airfed/sysconfig.hpp"

namespace airfed {

// Post-matched-filter received symbol for one slot. After channel inversion
// every client's symbol arrives scaled by the common sqrt(G beta rho), so
//   value = sqrt(G beta rho) * sum_i s_i + noise_sample
// holds exactly by construction; noise_sample is kept for white-box tests.
struct ReceivedSymbol {
  std::complex<double> value;
  double rho_used = 0.0;
  std::complex<double> noise_sample;
};

// Decoded aggregate for a whole round: the estimate of sum_i s_i per slot,
// plus the designed noise level sigma_n / sqrt(2 G beta rho) that the decode
// step imprints on each slot.
struct AggregateEstimate {
  std::vector<double> estimate;
  std::vector<double> per_slot_noise_std;
};

// Simulates one slot: superposes the (already channel-inverted) symbols at
// common scale sqrt(G beta rho) and adds receiver noise CN(0, sigma_n^2)
// (zero when the scenario disables noise for verification).
ReceivedSymbol transmit_slot(std::span<const double> s_column, double rho,
                             const SystemParams& params, Rng& rng);

// Inverts the receive scale: Re(value) / sqrt(G beta rho). The real part
// keeps the signal and half the noise power. Rejects rho <= 0 — with no
// signal scale the decode is undefined.
double decode_slot(const ReceivedSymbol& received, double rho,
                   const SystemParams& params);

// Runs every coordinate of the round's update matrix through
// transmit + decode with independent noise per slot. rho holds either one
// scaling factor for the whole round or one per slot (size 1 or D).
AggregateEstimate aggregate_round(const ClippedUpdate& update,
                                  std::span<const double> rho,
                                  const SystemParams& params, Rng& rng);

// Monte Carlo SNR measurement plus the closed-form ceilings it is compared
// against, for one (params, target, policy, P0) operating point.
struct SnrReport {
  double epsilon = 0.0;
  double delta = 0.0;
  int num_clients = 0;
  double p0_w = 0.0;
  PowerPolicy policy = PowerPolicy::dp_blind;
  SymbolMode mode = SymbolMode::saturated;
  long trials = 0;
  double measured_snr = 0.0;     // linear
  double measured_snr_db = 0.0;
  double std_error = 0.0;        // standard error of measured_snr, linear
  double exact_bound = 0.0;      // closed-form ceiling
  double approx_bound = 0.0;     // privacy-only approximation
};

// Estimates the received SNR E[G beta rho |sum_i s_i|^2] / sigma_n^2 over
// num_trials independent channel draws.
//
// Saturated mode transmits s_i = S for every client — the coherent worst
// case the closed-form bound is built on, so measured values must stay at or
// under the bound. Realized mode cycles through the slot columns of
// `realized` (required non-null), measuring the operating point training
// actually visits.
//
// Trial t derives its child seed from (seed, t) only, never from the grid
// point, so a sweep over epsilon reuses identical channel draws: measured
// SNR is then exactly monotone in epsilon, and results are bitwise
// independent of worker count.
SnrReport measure_snr(const SystemParams& params, const PrivacyTarget& target,
                      PowerPolicy policy, long num_trials, std::uint64_t seed,
                      SymbolMode mode,
                      const ClippedUpdate* realized = nullptr);

}  // namespace airfed

#endif  // AIRFED_AIRCOMP_HPP_
