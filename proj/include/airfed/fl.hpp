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

#ifndef AIRFED_FL_HPP_
#define AIRFED_FL_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "airfed/channel.hpp"
#include "airfed/dataset.hpp"
#include "airfed/model.hpp"
#include "airfed/rng.hpp"
#include "airfed/sysconfig.hpp"

namespace airfed {

// Everything the aggregation path recorded about one federated round.
struct RoundStats {
  PowerPolicy policy = PowerPolicy::dp_blind;
  double epsilon_target = 0.0;
  // Privacy level implied by this round's mean scaling factor alone.
  double epsilon_round = 0.0;
  double rho_mean = 0.0;
  double rho_min = 0.0;
  double rho_max = 0.0;
  // Sum of the per-slot scaling factors; callers accumulate it across rounds
  // to form the running-mean privacy accounting.
  double rho_slot_sum = 0.0;
  std::size_t slot_count = 0;  // model dimension D (analog releases per round)
  double noise_std_mean = 0.0;  // mean post-decode noise std across slots
  bool dp_capped_any = false;   // privacy cap was the binding limit somewhere
  std::vector<double> tx_power_w;  // per client, max instantaneous over slots
  double max_tx_power_w = 0.0;
  bool clip_bound_ok = true;  // every transmitted s_i respected the clip bound
  // Empirical receive SNR of this round's aggregate: the per-slot signal
  // power G beta rho_d (sum_i s_id)^2 averaged over slots, over sigma_n^2.
  double snr_estimate = 0.0;
};

// Seed-derivation helpers behind run_training/fed_round, exposed so
// reference implementations (e.g. a centralized FedAvg twin) can reproduce
// the exact same randomness stream by stream.
std::uint64_t training_init_seed(std::uint64_t master_seed);
std::uint64_t training_partition_seed(std::uint64_t master_seed,
                                      int num_clients);
std::uint64_t training_round_seed(std::uint64_t master_seed, int round);
std::uint64_t round_client_seed(std::uint64_t round_seed, std::size_t client);
std::uint64_t round_channel_seed(std::uint64_t round_seed, std::size_t slot);

// Runs `local_steps_per_round` epochs of mini-batch Adam on the client's
// shard, starting from theta0, and returns the parameter update
// delta_i = theta_after - theta0. Optimizer state starts fresh (no carry
// across rounds). Throws std::runtime_error if the loss turns non-finite.
std::vector<double> local_train(const Mlp& model,
                                std::span<const double> theta0,
                                const Dataset& shard,
                                const TrainingConfig& cfg, Rng& rng);

// One federated round over the analog aggregation channel: every client
// trains locally, clips its weighted update, the power-scaling policy is
// evaluated on the round's channel, and theta is incremented by the noisy
// decoded sum. `draw` is the round's channel when fading is per_round; in
// per_slot mode fresh draws are derived from round_seed for every slot and
// `draw` is ignored. All client, channel, and noise randomness is derived
// from round_seed, so rounds are reproducible regardless of how callers
// schedule the per-client work.
RoundStats fed_round(const Mlp& model, std::vector<double>& theta,
                     const std::vector<Dataset>& clients,
                     std::span<const double> client_weights,
                     const SystemParams& params, const PrivacyTarget& target,
                     const TrainingConfig& cfg, PowerPolicy policy,
                     const ChannelDraw& draw, std::uint64_t round_seed);

// Fraction of argmax-correct predictions of the model at theta.
double evaluate(const Mlp& model, std::span<const double> theta,
                const Dataset& test);

// One row of a training trace (the train CSV schema).
struct TrainTraceRow {
  int round = 0;
  PowerPolicy policy = PowerPolicy::dp_blind;
  int num_clients = 0;
  double epsilon_target = 0.0;
  double epsilon_achieved = 0.0;  // running-mean accounting up to this round
  double rho = 0.0;               // this round's mean scaling factor
  double snr_estimate = 0.0;
  double test_accuracy = 0.0;
};

struct TrainingRunResult {
  PowerPolicy policy = PowerPolicy::dp_blind;
  int num_clients = 0;
  std::vector<TrainTraceRow> rows;  // one per round
  double final_accuracy = 0.0;
  // Privacy level of the whole run: the epsilon implied by the mean power
  // scaling factor over every slot of every round.
  double epsilon_achieved = 0.0;
  bool clip_bound_ok = true;     // held in every round
  double max_tx_power_w = 0.0;   // largest instantaneous client power seen
};

// Train/test pair resolved from the config. When MNIST files are requested
// but unusable, falls back to the synthetic dataset and records why.
struct DatasetBundle {
  Dataset train;
  Dataset test;
  bool mnist_fallback = false;
  std::string fallback_reason;
};

DatasetBundle build_datasets(const TrainingConfig& cfg,
                             std::uint64_t master_seed);

using RowCallback = std::function<void(const TrainTraceRow&)>;

// Full training loop for one (policy, num_clients) cell: initializes the
// model, partitions the training set IID across params.num_clients clients,
// and runs cfg.rounds federated rounds. Model init, the partition, and the
// per-round seeds depend only on master_seed (not on the policy), so
// different policies face identical data, initialization, and channel
// randomness and differ only through the power scaling. on_row, when set,
// observes each trace row as it is produced.
TrainingRunResult run_training(const SystemParams& params,
                               const PrivacyTarget& target,
                               const TrainingConfig& cfg, PowerPolicy policy,
                               const Dataset& train, const Dataset& test,
                               std::uint64_t master_seed,
                               const RowCallback& on_row = {});

}  // namespace airfed

#endif  // AIRFED_FL_HPP_
