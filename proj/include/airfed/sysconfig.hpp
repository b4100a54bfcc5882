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

#ifndef AIRFED_SYSCONFIG_HPP_
#define AIRFED_SYSCONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace airfed {

// Raised for scenario-file problems: parse failures, missing or unknown
// keys, and invariant violations. The message always names the field.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& message)
      : std::runtime_error(message) {}
};

// Channel coherence model: gains held fixed for all slots of a round, or
// redrawn for every slot.
enum class FadingMode { per_round, per_slot };

// Physical-layer parameters. Everything is stored in strict SI units
// (watts, meters, linear power ratios); dB and dBm exist only in the config
// file and in reports.
struct SystemParams {
  int num_clients = 0;             // I
  double antenna_gain = 1.0;       // combined tx*rx gain, linear
  double ref_path_loss = 1.0;      // path loss at unit distance, linear
  double path_loss_exponent = 2.0;
  double noise_power_w = 0.0;      // receiver noise variance, watts
  double max_tx_power_w = 0.0;     // per-client power budget, watts
  double carrier_freq_hz = 2.4e9;  // informational only
  std::vector<double> distances_m;  // one entry per client
  bool distances_uniform = true;    // config gave a scalar distance
  bool noise_enabled = true;        // `noise = off` is a verification aid
  FadingMode fading = FadingMode::per_round;

  // sum_i r_i^alpha — the rate of the min-effective-gain exponential and the
  // recurring constant in the closed-form bounds.
  double sum_r_alpha() const;

  // Copy with a different client count. Requires a uniform distance config
  // (a scalar in the scenario file) unless the count already matches.
  SystemParams with_num_clients(int count) const;

  // Throws ConfigError naming the offending field.
  void validate() const;
};

// Differential-privacy target for one aggregation slot.
struct PrivacyTarget {
  double epsilon = 0.0;
  double delta = 0.0;
  double clip_threshold = 0.0;  // S, in model-update units

  void validate() const;
};

enum class ClipNorm { l2, linf };
enum class Activation { relu, tanh_act };
enum class DatasetKind { synthetic, mnist };

// Local-training and round-loop hyperparameters.
struct TrainingConfig {
  std::vector<int> hidden_layers = {32};
  Activation activation = Activation::relu;
  double learning_rate = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  int batch_size = 32;
  int local_steps_per_round = 20;  // local passes (epochs) per round
  int rounds = 50;
  ClipNorm clip_norm = ClipNorm::l2;
  std::vector<double> client_weights;  // empty = |D_i| (auto)

  DatasetKind dataset = DatasetKind::synthetic;
  std::string mnist_images;
  std::string mnist_labels;
  int mnist_subset = 6000;  // 0 = use the full file
  int test_samples = 2000;  // held-out evaluation samples (either kind)
  int synth_samples = 6000;
  int synth_features = 32;
  int synth_classes = 5;
  double synth_separation = 2.0;

  void validate() const;
};

enum class PowerPolicy { conventional, dp_informed, dp_blind };
enum class SymbolMode { saturated, realized };

const char* policy_name(PowerPolicy policy);
PowerPolicy policy_from_name(const std::string& name);

// Experiment orchestration: grids, trial counts, seeding, output.
struct ExperimentConfig {
  std::vector<double> epsilon_grid;
  std::vector<int> client_grid;
  std::vector<double> p0_grid_dbm;
  long num_trials = 100000;
  std::uint64_t master_seed = 1;
  std::string output_path;
  std::vector<PowerPolicy> policies = {PowerPolicy::dp_blind,
                                       PowerPolicy::conventional};
  SymbolMode symbol_mode = SymbolMode::saturated;

  void validate() const;
};

struct Scenario {
  SystemParams system;
  PrivacyTarget privacy;
  TrainingConfig training;
  ExperimentConfig experiment;
};

// Parses and validates a scenario file.
//
// Format: one `key = value` pair per line; `#` starts a comment; blank lines
// ignored. Keys carry explicit unit suffixes (noise_power_dbm,
// ref_path_loss_db, ...) and are converted to SI on load. Lists are
// comma-separated. Unknown and duplicate keys are errors.
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace airfed

#endif  // AIRFED_SYSCONFIG_HPP_
