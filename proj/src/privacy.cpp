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

#include "airfed/privacy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "airfed/kernels.hpp"

namespace airfed {
namespace {

// ln(1.25/delta), the recurring Gaussian-mechanism log factor. Positive for
// every delta < 1.25; larger deltas make the mechanism vacuous.
double log_term(double delta) {
  const double value = std::log(1.25 / delta);
  if (!(value > 0.0)) {
    throw std::domain_error(
        "privacy: delta >= 1.25 leaves no valid Gaussian mechanism");
  }
  return value;
}

void check_finite(std::span<const double> values, const char* what) {
  for (const double v : values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument(std::string(what) +
                                  ": non-finite coordinate");
    }
  }
}

}  // namespace

void ClippedUpdate::slot_column(std::size_t d, std::span<double> out) const {
  for (std::size_t i = 0; i < by_client.size(); ++i) {
    out[i] = by_client[i][d];
  }
}

std::vector<double> clip_update(std::span<const double> delta, double w_i,
                                double w_sum, double clip_threshold,
                                ClipNorm norm) {
  if (!(w_i > 0.0) || !(w_sum >= w_i)) {
    throw std::invalid_argument("clip_update: need 0 < w_i <= w_sum");
  }
  if (!(clip_threshold > 0.0)) {
    throw std::invalid_argument("clip_update: clip threshold must be > 0");
  }
  check_finite(delta, "clip_update");

  std::vector<double> s(delta.begin(), delta.end());
  kernels::scale(s.data(), s.size(), w_i / w_sum);
  if (norm == ClipNorm::linf) {
    kernels::clamp(s.data(), s.size(), -clip_threshold, clip_threshold);
    return s;
  }
  const double nrm = std::sqrt(kernels::squared_norm(s.data(), s.size()));
  if (nrm > clip_threshold) {
    kernels::scale(s.data(), s.size(), clip_threshold / nrm);
  }
  return s;
}

double sensitivity(const ClippedUpdate& update, std::size_t d) {
  if (d >= update.dimension()) {
    throw std::out_of_range("sensitivity: coordinate out of range");
  }
  double best = 0.0;
  for (const auto& client : update.by_client) {
    const double v = std::fabs(client[d]);
    if (v > best) best = v;
  }
  return best;
}

std::vector<double> effective_gains(const ChannelDraw& draw,
                                    const SystemParams& params) {
  const std::vector<double> weights = path_gain_weights(params);
  std::vector<double> gains(draw.gains.size());
  kernels::abs_squared(draw.gains.data(), gains.data(), gains.size());
  for (std::size_t i = 0; i < gains.size(); ++i) gains[i] *= weights[i];
  return gains;
}

double dp_scaling_cap(const SystemParams& params,
                      const PrivacyTarget& target) {
  const double s = target.clip_threshold;
  return params.noise_power_w * target.epsilon * target.epsilon /
         (4.0 * params.antenna_gain * params.ref_path_loss * s * s *
          log_term(target.delta));
}

double gain_threshold(const SystemParams& params,
                      const PrivacyTarget& target) {
  return params.noise_power_w /
         (4.0 * params.antenna_gain * params.ref_path_loss *
          params.max_tx_power_w) *
         target.epsilon * target.epsilon / log_term(target.delta);
}

PowerScaling scaling_dp_informed(const SystemParams& params,
                                 const PrivacyTarget& target,
                                 std::span<const double> gains,
                                 std::span<const double> slot_symbols) {
  const double cap = dp_scaling_cap(params, target);
  double channel_branch = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < gains.size(); ++i) {
    const double s = slot_symbols[i];
    if (s == 0.0) continue;  // silent client: no inversion constraint
    const double ratio = gains[i] * params.max_tx_power_w / (s * s);
    if (ratio < channel_branch) channel_branch = ratio;
  }
  PowerScaling out;
  out.policy = PowerPolicy::dp_informed;
  out.dp_capped = cap <= channel_branch;
  out.rho = out.dp_capped ? cap : channel_branch;
  return out;
}

PowerScaling scaling_dp_blind(const SystemParams& params,
                              const PrivacyTarget& target,
                              double min_effective_gain) {
  const double g_th = gain_threshold(params, target);
  const double s = target.clip_threshold;
  PowerScaling out;
  out.policy = PowerPolicy::dp_blind;
  out.dp_capped = g_th <= min_effective_gain;
  out.rho = params.max_tx_power_w / (s * s) *
            (out.dp_capped ? g_th : min_effective_gain);
  return out;
}

PowerScaling scaling_conventional(const SystemParams& params,
                                  std::span<const double> gains,
                                  std::span<const double> slot_symbols,
                                  double clip_threshold) {
  double channel_branch = std::numeric_limits<double>::infinity();
  double min_gain = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < gains.size(); ++i) {
    if (gains[i] < min_gain) min_gain = gains[i];
    const double s = slot_symbols[i];
    if (s == 0.0) continue;
    const double ratio = gains[i] * params.max_tx_power_w / (s * s);
    if (ratio < channel_branch) channel_branch = ratio;
  }
  PowerScaling out;
  out.policy = PowerPolicy::conventional;
  out.dp_capped = false;
  if (std::isinf(channel_branch)) {
    // Nothing is transmitted this slot; fall back to the saturation value so
    // the decode scale stays well defined.
    out.rho = min_gain * params.max_tx_power_w /
              (clip_threshold * clip_threshold);
  } else {
    out.rho = channel_branch;
  }
  return out;
}

PowerScaling scaling_dp_informed(const SystemParams& params,
                                 const PrivacyTarget& target,
                                 const ChannelDraw& draw,
                                 std::span<const double> slot_symbols) {
  return scaling_dp_informed(params, target, effective_gains(draw, params),
                             slot_symbols);
}

PowerScaling scaling_dp_blind(const SystemParams& params,
                              const PrivacyTarget& target,
                              const ChannelDraw& draw) {
  return scaling_dp_blind(params, target, min_effective_gain(draw, params));
}

PowerScaling scaling_conventional(const SystemParams& params,
                                  const ChannelDraw& draw,
                                  std::span<const double> slot_symbols,
                                  double clip_threshold) {
  return scaling_conventional(params, effective_gains(draw, params),
                              slot_symbols, clip_threshold);
}

double epsilon_achieved(const SystemParams& params, double rho,
                        double clip_threshold, double delta) {
  if (!(rho >= 0.0)) {
    throw std::domain_error("epsilon_achieved: rho must be >= 0");
  }
  return 2.0 * clip_threshold *
         std::sqrt(params.antenna_gain * params.ref_path_loss * rho *
                   log_term(delta)) /
         std::sqrt(params.noise_power_w);
}

std::vector<double> tx_power_per_client(double rho, const ChannelDraw& draw,
                                        std::span<const double> slot_symbols,
                                        const SystemParams& params) {
  const std::vector<double> gains = effective_gains(draw, params);
  std::vector<double> powers(gains.size(), 0.0);
  for (std::size_t i = 0; i < gains.size(); ++i) {
    const double s = slot_symbols[i];
    if (s == 0.0) continue;
    if (gains[i] == 0.0) {
      throw std::domain_error(
          "tx_power_per_client: zero channel gain for a transmitting client");
    }
    powers[i] = rho * s * s / gains[i];
  }
  return powers;
}

}  // namespace airfed
