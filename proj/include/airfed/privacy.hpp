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

#ifndef AIRFED_PRIVACY_HPP_
#define AIRFED_PRIVACY_HPP_

#include <span>
#include <vector>

#include "airfed/channel.hpp"
#include "airfed/sysconfig.hpp"

namespace airfed {

// Clipped, weighted client updates for one round: by_client[i] is client i's
// transmit symbol vector s_i (length = model dimension). After clipping,
// |s_i[d]| <= S for every client and coordinate, which is what bounds the
// per-slot query sensitivity.
struct ClippedUpdate {
  std::vector<std::vector<double>> by_client;

  std::size_t num_clients() const { return by_client.size(); }
  std::size_t dimension() const {
    return by_client.empty() ? 0 : by_client.front().size();
  }
  // Gathers coordinate d of every client into out (size num_clients).
  void slot_column(std::size_t d, std::span<double> out) const;
};

// The chosen power-scaling factor for a slot (or a whole round), with the
// policy that produced it and whether the privacy cap was the binding branch.
struct PowerScaling {
  double rho = 0.0;
  PowerPolicy policy = PowerPolicy::conventional;
  bool dp_capped = false;
};

// Weighted clipping: s_i = (w_i * delta / w_sum) scaled (l2) or clamped
// (linf) so that |s_i[d]| <= clip_threshold everywhere. For l2 the whole
// vector is rescaled by min{1, S / ||w_i*delta/w_sum||}, which also bounds
// every coordinate. Rejects non-finite input coordinates.
std::vector<double> clip_update(std::span<const double> delta, double w_i,
                                double w_sum, double clip_threshold,
                                ClipNorm norm = ClipNorm::l2);

// Per-slot query sensitivity: max over clients of |s_i[d]|.
double sensitivity(const ClippedUpdate& update, std::size_t d);

// Per-client effective gains r_i^-alpha |h_i|^2 for one draw. The policy
// functions below accept these precomputed so a round's D slot evaluations
// share one pass over the draw.
std::vector<double> effective_gains(const ChannelDraw& draw,
                                    const SystemParams& params);

// The privacy ceiling on the power-scaling factor:
//   sigma_n^2 * eps^2 / (4 G beta S^2 ln(1.25/delta)).
// Any rho at or below this makes the receiver noise an adequate Gaussian
// mechanism for one slot. Rejects delta >= 1.25 (log term nonpositive).
double dp_scaling_cap(const SystemParams& params, const PrivacyTarget& target);

// Effective-gain threshold g_th = (sigma_n^2 / (4 G beta P0)) * eps^2 /
// ln(1.25/delta): below it the worst channel, above it the privacy cap,
// limits the symbol-blind policy.
double gain_threshold(const SystemParams& params, const PrivacyTarget& target);

// Privacy-preserving power control using every client's slot symbol:
//   rho = min{ min_i g_i P0 / s_i^2 , dp_scaling_cap }.
// Clients with s_i = 0 transmit nothing and impose no constraint; if all are
// zero the cap branch is returned. `gains` are effective_gains() values.
PowerScaling scaling_dp_informed(const SystemParams& params,
                                 const PrivacyTarget& target,
                                 std::span<const double> gains,
                                 std::span<const double> slot_symbols);

// Symbol-blind variant sized for the worst case |s_i| = S:
//   rho = (P0 / S^2) * min{ min_i g_i , g_th }.
// Needs only the channel, so the receiver learns nothing about symbol
// magnitudes; this is the simulation default policy.
PowerScaling scaling_dp_blind(const SystemParams& params,
                              const PrivacyTarget& target,
                              double min_effective_gain);

// Baseline without the privacy branch: full channel inversion at the power
// budget, rho = min_i g_i P0 / s_i^2. With every symbol zero the saturation
// value min_i g_i * P0 / S^2 is returned (nothing is transmitted; the value
// only sets the decode scale). clip_threshold supplies that fallback S.
PowerScaling scaling_conventional(const SystemParams& params,
                                  std::span<const double> gains,
                                  std::span<const double> slot_symbols,
                                  double clip_threshold);

// Convenience overloads computing effective gains from the draw.
PowerScaling scaling_dp_informed(const SystemParams& params,
                                 const PrivacyTarget& target,
                                 const ChannelDraw& draw,
                                 std::span<const double> slot_symbols);
PowerScaling scaling_dp_blind(const SystemParams& params,
                              const PrivacyTarget& target,
                              const ChannelDraw& draw);
PowerScaling scaling_conventional(const SystemParams& params,
                                  const ChannelDraw& draw,
                                  std::span<const double> slot_symbols,
                                  double clip_threshold);

// Privacy level actually delivered by a given scaling factor — the inverse
// of dp_scaling_cap at equality:
//   eps = 2 S sqrt(G beta rho ln(1.25/delta)) / sigma_n.
// Used with the running mean of the conventional policy's rho to report the
// privacy it forfeits.
double epsilon_achieved(const SystemParams& params, double rho,
                        double clip_threshold, double delta);

// Per-client transmit powers rho * s_i^2 / g_i in watts. Zero symbols give
// zero power; a zero effective gain with a nonzero symbol is rejected (the
// client cannot invert a dead channel).
std::vector<double> tx_power_per_client(double rho, const ChannelDraw& draw,
                                        std::span<const double> slot_symbols,
                                        const SystemParams& params);

}  // namespace airfed

#endif  // AIRFED_PRIVACY_HPP_
