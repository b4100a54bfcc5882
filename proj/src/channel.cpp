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

#include "airfed/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "airfed/kernels.hpp"

namespace airfed {

ChannelDraw draw_channel(Rng& rng, const SystemParams& params) {
  ChannelDraw draw;
  draw.gains.resize(static_cast<std::size_t>(params.num_clients));
  // CN(0,1): each part has variance 1/2 so E[|h|^2] = 1.
  const double part_std = std::sqrt(0.5);
  for (auto& gain : draw.gains) {
    const double re = part_std * rng.next_gaussian();
    const double im = part_std * rng.next_gaussian();
    gain = {re, im};
  }
  return draw;
}

std::vector<double> path_gain_weights(const SystemParams& params) {
  std::vector<double> weights;
  weights.reserve(params.distances_m.size());
  for (const double r : params.distances_m) {
    weights.push_back(std::pow(r, -params.path_loss_exponent));
  }
  return weights;
}

double min_effective_gain(const ChannelDraw& draw,
                          const SystemParams& params) {
  if (draw.gains.size() != params.distances_m.size()) {
    throw std::invalid_argument(
        "min_effective_gain: draw size does not match client count");
  }
  const std::vector<double> weights = path_gain_weights(params);
  return kernels::min_weighted_abs_squared(draw.gains.data(), weights.data(),
                                           draw.gains.size());
}

double effective_gain_ccdf(double x, const SystemParams& params) {
  if (x < 0.0) {
    throw std::domain_error("effective_gain_ccdf: x must be >= 0");
  }
  return std::exp(-x * params.sum_r_alpha());
}

}  // namespace airfed
