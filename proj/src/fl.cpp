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

#include "airfed/fl.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "airfed/aircomp.hpp"
#include "airfed/kernels.hpp"
#include "airfed/privacy.hpp"

namespace airfed {

namespace {

// Seed-stream tags. Every random decision hangs off (master_seed, tag, ...)
// so reruns and different client schedules reproduce bit-identical runs, and
// none of them depends on the power policy (policies share data, init, and
// channel randomness by construction).
constexpr std::uint64_t kStreamInit = 0x1217;       // model initialization
constexpr std::uint64_t kStreamData = 0xDA7A;       // synthetic dataset
constexpr std::uint64_t kStreamPartition = 0x9A27;  // IID shard assignment
constexpr std::uint64_t kStreamRound = 0x52D0;      // per-round seed
// Sub-streams within one round seed.
constexpr std::uint64_t kRoundClient = 1;   // (kRoundClient, i): client i
constexpr std::uint64_t kRoundNoise = 2;    // receiver noise
constexpr std::uint64_t kRoundChannel = 3;  // (kRoundChannel, slot or 0)

Dataset slice_rows(const Dataset& data, std::size_t start, std::size_t count) {
  const std::size_t width = static_cast<std::size_t>(data.num_features);
  Dataset out;
  out.num_features = data.num_features;
  out.num_classes = data.num_classes;
  out.features.assign(data.features.begin() + start * width,
                      data.features.begin() + (start + count) * width);
  out.labels.assign(data.labels.begin() + start,
                    data.labels.begin() + (start + count));
  return out;
}

bool within_clip_bound(const std::vector<double>& s, double clip_threshold,
                       ClipNorm norm) {
  const double slack = clip_threshold * (1.0 + 1e-9);
  if (norm == ClipNorm::linf) {
    return kernels::max_abs(s.data(), s.size()) <= slack;
  }
  return std::sqrt(kernels::squared_norm(s.data(), s.size())) <= slack;
}

}  // namespace

std::uint64_t training_init_seed(std::uint64_t master_seed) {
  return derive_seed(master_seed, kStreamInit);
}

std::uint64_t training_partition_seed(std::uint64_t master_seed,
                                      int num_clients) {
  return derive_seed(master_seed, kStreamPartition,
                     static_cast<std::uint64_t>(num_clients));
}

std::uint64_t training_round_seed(std::uint64_t master_seed, int round) {
  return derive_seed(master_seed, kStreamRound,
                     static_cast<std::uint64_t>(round));
}

std::uint64_t round_client_seed(std::uint64_t round_seed, std::size_t client) {
  return derive_seed(round_seed, kRoundClient, client);
}

std::uint64_t round_channel_seed(std::uint64_t round_seed, std::size_t slot) {
  return derive_seed(round_seed, kRoundChannel, slot);
}

std::vector<double> local_train(const Mlp& model,
                                std::span<const double> theta0,
                                const Dataset& shard,
                                const TrainingConfig& cfg, Rng& rng) {
  if (shard.size() == 0) {
    throw std::invalid_argument("local_train: empty client shard");
  }
  const std::size_t dim = static_cast<std::size_t>(model.param_count());
  if (theta0.size() != dim) {
    throw std::invalid_argument("local_train: theta size mismatch");
  }
  if (cfg.local_steps_per_round == 0) {
    return std::vector<double>(dim, 0.0);
  }

  std::vector<double> theta(theta0.begin(), theta0.end());
  std::vector<double> grad(dim);
  std::vector<double> adam_m(dim, 0.0);
  std::vector<double> adam_v(dim, 0.0);
  const std::size_t batch_size =
      std::min<std::size_t>(static_cast<std::size_t>(cfg.batch_size),
                            shard.size());
  Mlp::Workspace ws = model.make_workspace(batch_size);
  std::vector<std::uint32_t> order(shard.size());
  std::iota(order.begin(), order.end(), 0u);

  double beta1_pow = 1.0;
  double beta2_pow = 1.0;
  for (int epoch = 0; epoch < cfg.local_steps_per_round; ++epoch) {
    shuffle_indices(order.data(), order.size(), rng);
    for (std::size_t start = 0; start < order.size(); start += batch_size) {
      const std::size_t count = std::min(batch_size, order.size() - start);
      const double loss = model.loss_and_grad(
          theta, shard, {order.data() + start, count}, grad, ws);
      if (!std::isfinite(loss)) {
        std::ostringstream msg;
        msg << "local_train: non-finite loss (" << loss << ") at epoch "
            << epoch << ", batch offset " << start << ", shard size "
            << shard.size();
        throw std::runtime_error(msg.str());
      }
      beta1_pow *= cfg.adam_beta1;
      beta2_pow *= cfg.adam_beta2;
      kernels::adam_step(theta.data(), grad.data(), adam_m.data(),
                         adam_v.data(), dim, cfg.learning_rate, cfg.adam_beta1,
                         cfg.adam_beta2, cfg.adam_epsilon,
                         1.0 / (1.0 - beta1_pow), 1.0 / (1.0 - beta2_pow));
    }
  }
  for (std::size_t k = 0; k < dim; ++k) theta[k] -= theta0[k];
  return theta;
}

RoundStats fed_round(const Mlp& model, std::vector<double>& theta,
                     const std::vector<Dataset>& clients,
                     std::span<const double> client_weights,
                     const SystemParams& params, const PrivacyTarget& target,
                     const TrainingConfig& cfg, PowerPolicy policy,
                     const ChannelDraw& draw, std::uint64_t round_seed) {
  const std::size_t num_clients = clients.size();
  if (num_clients == 0 ||
      num_clients != static_cast<std::size_t>(params.num_clients)) {
    throw std::invalid_argument(
        "fed_round: clients must match params.num_clients");
  }
  if (client_weights.size() != num_clients) {
    throw std::invalid_argument("fed_round: one weight per client required");
  }
  const std::size_t dim = static_cast<std::size_t>(model.param_count());
  if (theta.size() != dim) {
    throw std::invalid_argument("fed_round: theta size mismatch");
  }

  RoundStats stats;
  stats.policy = policy;
  stats.epsilon_target = target.epsilon;
  stats.slot_count = dim;
  stats.tx_power_w.assign(num_clients, 0.0);

  // Local training and clipping: s_i = clip(w_i delta_i / sum_j w_j).
  const double w_sum = kernels::sum(client_weights.data(), num_clients);
  ClippedUpdate update;
  update.by_client.resize(num_clients);
  for (std::size_t i = 0; i < num_clients; ++i) {
    Rng client_rng(round_client_seed(round_seed, i));
    const std::vector<double> delta =
        local_train(model, theta, clients[i], cfg, client_rng);
    update.by_client[i] = clip_update(delta, client_weights[i], w_sum,
                                      target.clip_threshold, cfg.clip_norm);
    if (!within_clip_bound(update.by_client[i], target.clip_threshold,
                           cfg.clip_norm)) {
      stats.clip_bound_ok = false;
    }
  }

  // Noiseless column sums feed the empirical SNR of the round.
  std::vector<double> colsum(dim, 0.0);
  for (const std::vector<double>& s : update.by_client) {
    kernels::axpy(1.0, s.data(), colsum.data(), dim);
  }

  // Power scaling on the round's channel, plus per-client transmit powers.
  std::vector<double> rho;
  std::vector<double> slot(num_clients);
  const bool blind_round = policy == PowerPolicy::dp_blind &&
                           params.fading == FadingMode::per_round;
  if (blind_round) {
    // Symbol-independent scaling: a single rho covers every slot.
    const PowerScaling scaling =
        scaling_dp_blind(params, target, min_effective_gain(draw, params));
    rho.assign(1, scaling.rho);
    stats.dp_capped_any = scaling.dp_capped;
  } else {
    rho.resize(dim);
  }

  std::vector<double> gains;
  if (params.fading == FadingMode::per_round) {
    gains = effective_gains(draw, params);
  }
  for (std::size_t d = 0; d < dim; ++d) {
    update.slot_column(d, slot);
    ChannelDraw slot_draw;
    const ChannelDraw* active_draw = &draw;
    if (params.fading == FadingMode::per_slot) {
      Rng channel_rng(round_channel_seed(round_seed, d));
      slot_draw = draw_channel(channel_rng, params);
      gains = effective_gains(slot_draw, params);
      active_draw = &slot_draw;
    }
    double rho_d;
    if (blind_round) {
      rho_d = rho[0];
    } else {
      PowerScaling scaling;
      switch (policy) {
        case PowerPolicy::dp_blind:
          scaling = scaling_dp_blind(params, target,
                                     min_effective_gain(*active_draw, params));
          break;
        case PowerPolicy::dp_informed:
          scaling = scaling_dp_informed(params, target, gains, slot);
          break;
        case PowerPolicy::conventional:
          scaling = scaling_conventional(params, gains, slot,
                                         target.clip_threshold);
          break;
        default:
          throw std::invalid_argument("fed_round: unknown power policy");
      }
      rho[d] = scaling.rho;
      rho_d = scaling.rho;
      stats.dp_capped_any = stats.dp_capped_any || scaling.dp_capped;
    }
    const std::vector<double> tx =
        tx_power_per_client(rho_d, *active_draw, slot, params);
    for (std::size_t i = 0; i < num_clients; ++i) {
      stats.tx_power_w[i] = std::max(stats.tx_power_w[i], tx[i]);
    }
  }
  stats.max_tx_power_w =
      kernels::max_abs(stats.tx_power_w.data(), num_clients);

  // Analog aggregation and the global step theta += decoded sum + noise.
  Rng noise_rng(derive_seed(round_seed, kRoundNoise));
  const AggregateEstimate aggregate =
      aggregate_round(update, rho, params, noise_rng);
  kernels::axpy(1.0, aggregate.estimate.data(), theta.data(), dim);

  // Round statistics over the per-slot scaling factors.
  if (rho.size() == 1) {
    stats.rho_mean = rho[0];
    stats.rho_min = rho[0];
    stats.rho_max = rho[0];
    stats.rho_slot_sum = rho[0] * static_cast<double>(dim);
  } else {
    stats.rho_slot_sum = kernels::sum(rho.data(), dim);
    stats.rho_mean = stats.rho_slot_sum / static_cast<double>(dim);
    const auto [lo, hi] = std::minmax_element(rho.begin(), rho.end());
    stats.rho_min = *lo;
    stats.rho_max = *hi;
  }
  stats.noise_std_mean =
      kernels::sum(aggregate.per_slot_noise_std.data(), dim) /
      static_cast<double>(dim);
  stats.epsilon_round = epsilon_achieved(params, stats.rho_mean,
                                         target.clip_threshold, target.delta);
  double signal_power = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    const double rho_d = rho.size() == 1 ? rho[0] : rho[d];
    signal_power += rho_d * colsum[d] * colsum[d];
  }
  stats.snr_estimate = params.antenna_gain * params.ref_path_loss *
                       signal_power /
                       (static_cast<double>(dim) * params.noise_power_w);
  return stats;
}

double evaluate(const Mlp& model, std::span<const double> theta,
                const Dataset& test) {
  return model.accuracy(theta, test);
}

DatasetBundle build_datasets(const TrainingConfig& cfg,
                             std::uint64_t master_seed) {
  DatasetBundle bundle;
  if (cfg.dataset == DatasetKind::mnist) {
    try {
      const int total = cfg.mnist_subset + cfg.test_samples;
      const Dataset all =
          load_mnist_idx(cfg.mnist_images, cfg.mnist_labels, total);
      if (all.size() < static_cast<std::size_t>(total)) {
        throw DataError("file holds " + std::to_string(all.size()) +
                        " samples, need " + std::to_string(total));
      }
      bundle.train = slice_rows(all, 0, cfg.mnist_subset);
      bundle.test = slice_rows(all, cfg.mnist_subset, cfg.test_samples);
      return bundle;
    } catch (const DataError& err) {
      bundle.mnist_fallback = true;
      bundle.fallback_reason = err.what();
    }
  }
  Rng rng(derive_seed(master_seed, kStreamData));
  const Dataset all =
      synth_dataset(rng, cfg.synth_samples + cfg.test_samples,
                    cfg.synth_features, cfg.synth_classes,
                    cfg.synth_separation);
  bundle.train = slice_rows(all, 0, cfg.synth_samples);
  bundle.test = slice_rows(all, cfg.synth_samples, cfg.test_samples);
  return bundle;
}

TrainingRunResult run_training(const SystemParams& params,
                               const PrivacyTarget& target,
                               const TrainingConfig& cfg, PowerPolicy policy,
                               const Dataset& train, const Dataset& test,
                               std::uint64_t master_seed,
                               const RowCallback& on_row) {
  params.validate();
  target.validate();
  cfg.validate();
  train.validate();
  test.validate();

  MlpSpec spec;
  spec.inputs = train.num_features;
  spec.hidden = cfg.hidden_layers;
  spec.outputs = train.num_classes;
  spec.activation = cfg.activation;
  const Mlp model(spec);

  std::vector<double> theta(model.param_count());
  Rng init_rng(training_init_seed(master_seed));
  model.init_params(theta, init_rng);

  Rng partition_rng(training_partition_seed(master_seed, params.num_clients));
  const std::vector<Dataset> clients =
      partition_iid(train, params.num_clients, partition_rng);

  std::vector<double> weights = cfg.client_weights;
  if (weights.empty()) {
    weights.reserve(clients.size());
    for (const Dataset& shard : clients) {
      weights.push_back(static_cast<double>(shard.size()));
    }
  } else if (weights.size() != clients.size()) {
    throw ConfigError("field 'client_weights': expected " +
                      std::to_string(clients.size()) + " entries, got " +
                      std::to_string(weights.size()));
  }
  for (const Dataset& shard : clients) {
    if (shard.size() < static_cast<std::size_t>(cfg.batch_size)) {
      throw ConfigError(
          "field 'batch_size': exceeds the smallest client shard (" +
          std::to_string(shard.size()) + " samples)");
    }
  }

  TrainingRunResult result;
  result.policy = policy;
  result.num_clients = params.num_clients;
  result.rows.reserve(static_cast<std::size_t>(cfg.rounds));

  double rho_slot_total = 0.0;
  double slot_total = 0.0;
  for (int round = 0; round < cfg.rounds; ++round) {
    const std::uint64_t round_seed = training_round_seed(master_seed, round);
    Rng channel_rng(round_channel_seed(round_seed, 0));
    const ChannelDraw draw = draw_channel(channel_rng, params);

    const RoundStats stats = fed_round(model, theta, clients, weights, params,
                                       target, cfg, policy, draw, round_seed);
    rho_slot_total += stats.rho_slot_sum;
    slot_total += static_cast<double>(stats.slot_count);
    result.clip_bound_ok = result.clip_bound_ok && stats.clip_bound_ok;
    result.max_tx_power_w = std::max(result.max_tx_power_w,
                                     stats.max_tx_power_w);
    result.epsilon_achieved =
        slot_total > 0.0
            ? epsilon_achieved(params, rho_slot_total / slot_total,
                               target.clip_threshold, target.delta)
            : 0.0;

    TrainTraceRow row;
    row.round = round;
    row.policy = policy;
    row.num_clients = params.num_clients;
    row.epsilon_target = target.epsilon;
    row.epsilon_achieved = result.epsilon_achieved;
    row.rho = stats.rho_mean;
    row.snr_estimate = stats.snr_estimate;
    row.test_accuracy = evaluate(model, theta, test);
    result.rows.push_back(row);
    if (on_row) on_row(row);
  }
  result.final_accuracy = result.rows.empty()
                              ? evaluate(model, theta, test)
                              : result.rows.back().test_accuracy;
  return result;
}

}  // namespace airfed
