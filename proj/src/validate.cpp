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

#include "airfed/validate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "airfed/aircomp.hpp"
#include "airfed/analysis.hpp"
#include "airfed/channel.hpp"
#include "airfed/dataset.hpp"
#include "airfed/fl.hpp"
#include "airfed/model.hpp"
#include "airfed/privacy.hpp"
#include "airfed/rng.hpp"

namespace airfed::validate {

namespace {

// Seed stream tags for the suite's independent RNGs.
constexpr std::uint64_t kTagKs = 0x4B53;
constexpr std::uint64_t kTagMarginal = 0x4D47;
constexpr std::uint64_t kTagRhoMc = 0x524D;
constexpr std::uint64_t kTagPairs = 0x5052;
constexpr std::uint64_t kTagGradient = 0x4752;
constexpr std::uint64_t kTagTrain = 0x5452;

std::string format_double(double x) {
  std::ostringstream out;
  out.precision(6);
  out << x;
  return out.str();
}

// --- Distribution of the minimum effective gain ---------------------------

CheckResult check_min_gain_ks(const Scenario& sc, const Options& opt) {
  const SystemParams& params = sc.system;
  const double rate = params.sum_r_alpha();
  Rng rng(derive_seed(opt.seed, kTagKs));
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(opt.ks_draws));
  for (long t = 0; t < opt.ks_draws; ++t) {
    const ChannelDraw draw = draw_channel(rng, params);
    samples.push_back(min_effective_gain(draw, params));
  }
  const double stat = ks_statistic(
      samples, [rate](double x) { return -std::expm1(-rate * x); });
  const double critical = ks_critical_value(0.01, samples.size());
  CheckResult result;
  result.name = "min_gain_ks";
  result.value = stat;
  result.threshold = critical;
  result.passed = stat < critical;
  result.detail = "KS statistic vs Exponential(rate " + format_double(rate) +
                  ") over " + std::to_string(opt.ks_draws) + " draws";
  return result;
}

CheckResult check_client_gain_ks(const Scenario& sc, const Options& opt) {
  const SystemParams& params = sc.system;
  // Client 0's effective gain r^-alpha |h|^2 is Exponential(rate r^alpha).
  const double rate =
      std::pow(params.distances_m.front(), params.path_loss_exponent);
  Rng rng(derive_seed(opt.seed, kTagMarginal));
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(opt.ks_draws));
  for (long t = 0; t < opt.ks_draws; ++t) {
    const ChannelDraw draw = draw_channel(rng, params);
    samples.push_back(effective_gains(draw, params).front());
  }
  const double stat = ks_statistic(
      samples, [rate](double x) { return -std::expm1(-rate * x); });
  const double critical = ks_critical_value(0.01, samples.size());
  CheckResult result;
  result.name = "client_gain_ks";
  result.value = stat;
  result.threshold = critical;
  result.passed = stat < critical;
  result.detail = "per-client effective gain vs Exponential(rate " +
                  format_double(rate) + ")";
  return result;
}

// --- E[rho**] closed form vs Monte Carlo -----------------------------------

CheckResult check_expected_rho(const Scenario& sc, const Options& opt) {
  const SystemParams& params = sc.system;
  const PrivacyTarget& target = sc.privacy;
  const double closed_form = analysis::expected_scaling_dp_blind(params, target);
  Rng rng(derive_seed(opt.seed, kTagRhoMc));
  double total = 0.0;
  for (long t = 0; t < opt.rho_mc_draws; ++t) {
    const ChannelDraw draw = draw_channel(rng, params);
    total += scaling_dp_blind(params, target, min_effective_gain(draw, params))
                 .rho;
  }
  const double mc_mean = total / static_cast<double>(opt.rho_mc_draws);
  const double rel_err = std::abs(mc_mean - closed_form) / closed_form;
  CheckResult result;
  result.name = "expected_rho_mc";
  result.value = rel_err;
  result.threshold = 0.01;
  result.passed = rel_err < 0.01;
  result.detail = "MC mean " + format_double(mc_mean) + " vs closed form " +
                  format_double(closed_form) + " over " +
                  std::to_string(opt.rho_mc_draws) + " draws";
  return result;
}

// --- Measured SNR vs the analytical ceiling --------------------------------

double bound_or_default(const Hooks& hooks, const SystemParams& params,
                        const PrivacyTarget& target) {
  if (hooks.snr_bound) return hooks.snr_bound(params, target);
  return analysis::snr_bound(params, target);
}

void check_snr_grid(const Scenario& sc, const Options& opt, const Hooks& hooks,
                    std::vector<CheckResult>& results) {
  std::vector<double> eps_grid = sc.experiment.epsilon_grid;
  std::sort(eps_grid.begin(), eps_grid.end());
  std::vector<int> client_grid = sc.experiment.client_grid;
  std::sort(client_grid.begin(), client_grid.end());

  double worst_excess = -1e300;  // in standard errors above the bound
  std::string worst_point = "none";
  double min_step = 1e300;  // smallest adjacent epsilon increment
  std::string min_step_point = "none";
  for (const int num_clients : client_grid) {
    const SystemParams params = sc.system.with_num_clients(num_clients);
    double previous = -1e300;
    for (const double eps : eps_grid) {
      PrivacyTarget target = sc.privacy;
      target.epsilon = eps;
      const SnrReport report =
          measure_snr(params, target, PowerPolicy::dp_blind, opt.snr_trials,
                      opt.seed, SymbolMode::saturated);
      const double bound = bound_or_default(hooks, params, target);
      const double excess = (report.measured_snr - bound) / report.std_error;
      if (excess > worst_excess) {
        worst_excess = excess;
        worst_point = "eps=" + format_double(eps) +
                      ", I=" + std::to_string(num_clients);
      }
      if (previous > -1e300) {
        const double step = report.measured_snr - previous;
        if (step < min_step) {
          min_step = step;
          min_step_point = "eps=" + format_double(eps) +
                           ", I=" + std::to_string(num_clients);
        }
      }
      previous = report.measured_snr;
    }
  }

  CheckResult dominance;
  dominance.name = "snr_bound_dominance";
  dominance.value = worst_excess;
  dominance.threshold = 3.0;
  dominance.passed = worst_excess <= 3.0;
  dominance.detail = "largest (measured - bound)/SE at " + worst_point +
                     " over " + std::to_string(opt.snr_trials) + " trials";
  results.push_back(dominance);

  CheckResult monotone;
  monotone.name = "snr_epsilon_monotonicity";
  monotone.value = min_step;
  monotone.threshold = 0.0;
  monotone.passed = min_step >= 0.0;
  monotone.detail =
      "smallest measured-SNR increment between adjacent epsilons, at " +
      min_step_point;
  results.push_back(monotone);
}

// --- Scaling-factor ordering and the power budget ---------------------------

CheckResult check_rho_ordering(const Scenario& sc, const Options& opt) {
  const SystemParams& params = sc.system;
  const PrivacyTarget& target = sc.privacy;
  const double s_max = target.clip_threshold;
  const double cap = dp_scaling_cap(params, target);
  const double order_slack = 1.0 + 1e-12;
  const double power_slack = params.max_tx_power_w * (1.0 + 1e-9);

  Rng rng(derive_seed(opt.seed, kTagPairs));
  std::vector<double> slot(static_cast<std::size_t>(params.num_clients));
  long violations = 0;
  std::string first_violation;
  for (long t = 0; t < opt.pair_draws; ++t) {
    const ChannelDraw draw = draw_channel(rng, params);
    for (double& s : slot) {
      s = (2.0 * rng.next_double() - 1.0) * s_max;
      if (rng.next_double() < 0.05) s = 0.0;  // idle clients happen
    }
    const std::vector<double> gains = effective_gains(draw, params);
    const double min_gain = min_effective_gain(draw, params);
    const double rho_blind = scaling_dp_blind(params, target, min_gain).rho;
    const double rho_informed =
        scaling_dp_informed(params, target, gains, slot).rho;
    const double rho_conv =
        scaling_conventional(params, gains, slot, s_max).rho;

    std::string failure;
    if (rho_blind > rho_informed * order_slack) {
      failure = "rho_blind > rho_informed";
    } else if (rho_informed > rho_conv * order_slack) {
      failure = "rho_informed > rho_conv";
    } else if (rho_blind > cap * order_slack) {
      failure = "rho_blind > dp cap";
    } else {
      for (const double rho : {rho_blind, rho_informed, rho_conv}) {
        const std::vector<double> tx =
            tx_power_per_client(rho, draw, slot, params);
        for (const double p : tx) {
          if (p > power_slack) {
            failure = "tx power above budget";
            break;
          }
        }
        if (!failure.empty()) break;
      }
    }
    if (!failure.empty()) {
      ++violations;
      if (first_violation.empty()) {
        first_violation = failure + " at draw " + std::to_string(t);
      }
    }
  }

  CheckResult result;
  result.name = "rho_ordering_power_budget";
  result.value = static_cast<double>(violations);
  result.threshold = 0.0;
  result.passed = violations == 0;
  result.detail = violations == 0
                      ? "rho** <= rho* <= rho_conv, rho** <= cap, tx <= P0 on " +
                            std::to_string(opt.pair_draws) + " draws"
                      : first_violation;
  return result;
}

CheckResult check_epsilon_round_trip(const Scenario& sc) {
  const SystemParams& params = sc.system;
  double worst = 0.0;
  for (const double eps : sc.experiment.epsilon_grid) {
    PrivacyTarget target = sc.privacy;
    target.epsilon = eps;
    const double rho = dp_scaling_cap(params, target);
    const double eps_back = epsilon_achieved(params, rho,
                                             target.clip_threshold,
                                             target.delta);
    worst = std::max(worst, std::abs(eps_back - eps) / eps);
  }
  CheckResult result;
  result.name = "epsilon_round_trip";
  result.value = worst;
  result.threshold = 1e-9;
  result.passed = worst < 1e-9;
  result.detail = "max relative error of epsilon_achieved(dp_scaling_cap(eps))";
  return result;
}

// --- Gradient correctness ----------------------------------------------------

CheckResult check_gradients(const Options& opt) {
  double worst = 0.0;
  const double step = 1e-5;
  for (const Activation activation : {Activation::relu, Activation::tanh_act}) {
    for (std::uint64_t trial = 0; trial < 3; ++trial) {
      MlpSpec spec;
      spec.inputs = 4;
      spec.hidden = {5};
      spec.outputs = 3;
      spec.activation = activation;
      const Mlp model(spec);

      Rng rng(derive_seed(opt.seed, kTagGradient, trial,
                          activation == Activation::relu ? 0 : 1));
      const Dataset data = synth_dataset(rng, 32, spec.inputs, spec.outputs);
      std::vector<double> theta(model.param_count());
      model.init_params(theta, rng);
      const std::vector<std::uint32_t> batch = {0, 1, 2, 3, 4, 5, 6, 7};

      std::vector<double> grad(theta.size());
      Mlp::Workspace ws = model.make_workspace(batch.size());
      model.loss_and_grad(theta, data, batch, grad, ws);
      for (std::size_t k = 0; k < theta.size(); ++k) {
        const double saved = theta[k];
        theta[k] = saved + step;
        const double loss_hi = model.loss(theta, data, batch);
        theta[k] = saved - step;
        const double loss_lo = model.loss(theta, data, batch);
        theta[k] = saved;
        const double fd = (loss_hi - loss_lo) / (2.0 * step);
        const double scale = std::max(std::abs(grad[k]), std::abs(fd));
        if (scale > 1e-7) {
          worst = std::max(worst, std::abs(grad[k] - fd) / scale);
        }
      }
    }
  }
  CheckResult result;
  result.name = "gradient_backprop_fd";
  result.value = worst;
  result.threshold = 1e-4;
  result.passed = worst < 1e-4;
  result.detail = "backprop vs central differences (step 1e-5), relu and tanh";
  return result;
}

// --- Noiseless aggregation equals centralized FedAvg -------------------------

CheckResult check_noiseless_equivalence(const Scenario& sc,
                                        const Options& opt) {
  SystemParams params = sc.system.with_num_clients(3);
  params.noise_enabled = false;
  params.fading = FadingMode::per_round;
  PrivacyTarget target = sc.privacy;
  target.clip_threshold = 1e9;  // clipping never binds

  TrainingConfig cfg;
  cfg.hidden_layers = {6};
  cfg.batch_size = 16;
  cfg.local_steps_per_round = 2;
  cfg.rounds = 10;
  cfg.clip_norm = ClipNorm::l2;

  const std::uint64_t master = derive_seed(opt.seed, kTagTrain);
  Rng data_rng(derive_seed(master, 0xD5));
  const Dataset train = synth_dataset(data_rng, 120, 8, 3);

  MlpSpec spec;
  spec.inputs = train.num_features;
  spec.hidden = cfg.hidden_layers;
  spec.outputs = train.num_classes;
  spec.activation = cfg.activation;
  const Mlp model(spec);

  std::vector<double> theta_fed(model.param_count());
  Rng init_rng(training_init_seed(master));
  model.init_params(theta_fed, init_rng);
  std::vector<double> theta_ref = theta_fed;

  Rng partition_rng(training_partition_seed(master, params.num_clients));
  const std::vector<Dataset> clients =
      partition_iid(train, params.num_clients, partition_rng);
  std::vector<double> weights;
  double w_sum = 0.0;
  for (const Dataset& shard : clients) {
    weights.push_back(static_cast<double>(shard.size()));
    w_sum += weights.back();
  }

  for (int round = 0; round < cfg.rounds; ++round) {
    const std::uint64_t round_seed = training_round_seed(master, round);
    Rng channel_rng(round_channel_seed(round_seed, 0));
    const ChannelDraw draw = draw_channel(channel_rng, params);
    fed_round(model, theta_fed, clients, weights, params, target, cfg,
              PowerPolicy::conventional, draw, round_seed);

    // Centralized twin: every client trains from the common round-start
    // parameters; their weighted shares are averaged into one step.
    const std::vector<double> theta_start = theta_ref;
    for (std::size_t i = 0; i < clients.size(); ++i) {
      Rng client_rng(round_client_seed(round_seed, i));
      const std::vector<double> delta =
          local_train(model, theta_start, clients[i], cfg, client_rng);
      const std::vector<double> share = clip_update(
          delta, weights[i], w_sum, target.clip_threshold, cfg.clip_norm);
      for (std::size_t k = 0; k < theta_ref.size(); ++k) {
        theta_ref[k] += share[k];
      }
    }
  }

  double worst = 0.0;
  for (std::size_t k = 0; k < theta_fed.size(); ++k) {
    worst = std::max(worst, std::abs(theta_fed[k] - theta_ref[k]));
  }
  CheckResult result;
  result.name = "noiseless_fedavg_equivalence";
  result.value = worst;
  result.threshold = 1e-8;
  result.passed = worst < 1e-8;
  result.detail = "max |coordinate difference| after " +
                  std::to_string(cfg.rounds) + " noiseless unclipped rounds";
  return result;
}

}  // namespace

double ks_statistic(std::vector<double>& samples,
                    const std::function<double(double)>& cdf) {
  if (samples.empty()) {
    throw std::invalid_argument("ks_statistic: no samples");
  }
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double stat = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double value = cdf(samples[i]);
    const double above = (static_cast<double>(i) + 1.0) / n - value;
    const double below = value - static_cast<double>(i) / n;
    stat = std::max({stat, above, below});
  }
  return stat;
}

double ks_critical_value(double alpha, std::size_t num_samples) {
  if (!(alpha > 0.0 && alpha < 1.0) || num_samples == 0) {
    throw std::invalid_argument("ks_critical_value: bad arguments");
  }
  return std::sqrt(-std::log(alpha / 2.0) /
                   (2.0 * static_cast<double>(num_samples)));
}

std::vector<CheckResult> run_suite(const Scenario& scenario,
                                   const Options& options,
                                   const Hooks& hooks) {
  std::vector<CheckResult> results;
  results.push_back(check_min_gain_ks(scenario, options));
  results.push_back(check_client_gain_ks(scenario, options));
  results.push_back(check_expected_rho(scenario, options));
  check_snr_grid(scenario, options, hooks, results);
  results.push_back(check_rho_ordering(scenario, options));
  results.push_back(check_epsilon_round_trip(scenario));
  results.push_back(check_gradients(options));
  results.push_back(check_noiseless_equivalence(scenario, options));
  return results;
}

}  // namespace airfed::validate
