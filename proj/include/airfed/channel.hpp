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

#ifndef AIRFED_CHANNEL_HPP_
#define AIRFED_CHANNEL_HPP_

#include <complex>
#include <vector>

#include "airfed/rng.hpp"
#include "airfed/sysconfig.hpp"

namespace airfed {

// One Rayleigh-fading realization: an i.i.d. circularly symmetric complex
// Gaussian gain with unit variance per client.
struct ChannelDraw {
  std::vector<std::complex<double>> gains;
};

// Draws params.num_clients gains, each CN(0, 1): real and imaginary parts
// independent N(0, 1/2). Deterministic given the rng state.
ChannelDraw draw_channel(Rng& rng, const SystemParams& params);

// Effective gain of the weakest link: min over clients of r_i^-alpha |h_i|^2.
// Over draws this is exponentially distributed with rate sum_i r_i^alpha,
// which is what makes the closed-form SNR bound tractable.
double min_effective_gain(const ChannelDraw& draw, const SystemParams& params);

// P(min effective gain > x) = exp(-x * sum_i r_i^alpha). Rejects x < 0.
double effective_gain_ccdf(double x, const SystemParams& params);

// Per-client large-scale weights r_i^-alpha (cached by callers that evaluate
// many draws against the same geometry).
std::vector<double> path_gain_weights(const SystemParams& params);

}  // namespace airfed

#endif  // AIRFED_CHANNEL_HPP_
