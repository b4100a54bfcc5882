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

// Scenario runner: `tradeoff` sweeps the analytical SNR-privacy bounds and
// verifies them against Monte Carlo channel draws, `train` runs federated
// learning through the noisy analog aggregation channel, and `validate`
// executes the built-in oracle suite. Every command is deterministic for a
// fixed scenario and master seed. Exit codes: 0 success, 1 validation or
// runtime failure, 2 configuration error.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "airfed/aircomp.hpp"
#include "airfed/analysis.hpp"
#include "airfed/csv.hpp"
#include "airfed/fl.hpp"
#include "airfed/sysconfig.hpp"
#include "airfed/units.hpp"
#include "airfed/validate.hpp"

namespace {

using airfed::csv::number;

// Flags shared by every subcommand; CLI values override the scenario file.
struct CommonArgs {
  std::string scenario_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  long trials = 0;
  bool trials_set = false;
  std::string out_path;
};

void add_common_flags(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("--scenario", args->scenario_path, "Scenario file (key = value format)")
      ->required();
  cmd->add_option("--seed", args->seed, "Master seed override")
      ->each([args](const std::string&) { args->seed_set = true; });
  cmd->add_option("--trials", args->trials, "Monte Carlo trial count override")
      ->check(CLI::PositiveNumber)
      ->each([args](const std::string&) { args->trials_set = true; });
  cmd->add_option("--out", args->out_path, "Output CSV path (default: scenario's, else stdout)");
}

// Loads the scenario and applies flag precedence (CLI > file).
airfed::Scenario load_with_overrides(const CommonArgs& args) {
  airfed::Scenario scenario = airfed::load_scenario(args.scenario_path);
  if (args.seed_set) scenario.experiment.master_seed = args.seed;
  if (args.trials_set) scenario.experiment.num_trials = args.trials;
  if (!args.out_path.empty()) scenario.experiment.output_path = args.out_path;
  return scenario;
}

// Opens the output target: a file when a path is configured, else stdout.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) {
        throw std::runtime_error("cannot open output file: " + path);
      }
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void finish() {
    if (file_.is_open()) {
      file_.flush();
      if (!file_) throw std::runtime_error("write to output file failed");
    }
  }

 private:
  std::ofstream file_;
};

int cmd_tradeoff(const CommonArgs& args) {
  const airfed::Scenario scenario = load_with_overrides(args);

  std::vector<double> eps_grid = scenario.experiment.epsilon_grid;
  std::sort(eps_grid.begin(), eps_grid.end());
  std::vector<int> client_grid = scenario.experiment.client_grid;
  std::sort(client_grid.begin(), client_grid.end());
  std::vector<double> p0_grid = scenario.experiment.p0_grid_dbm;
  std::sort(p0_grid.begin(), p0_grid.end());

  OutputTarget out(scenario.experiment.output_path);
  std::ostream& os = out.stream();
  os << "epsilon, delta, num_clients, p0_dbm, g_th, exact_bound, "
        "exact_bound_db, approx_bound, expected_rho, measured_snr, "
        "measured_snr_db, std_error\n";

  for (const int num_clients : client_grid) {
    for (const double eps : eps_grid) {
      for (const double p0_dbm : p0_grid) {
        airfed::SystemParams params =
            scenario.system.with_num_clients(num_clients);
        params.max_tx_power_w = airfed::dbm_to_watts(p0_dbm);
        airfed::PrivacyTarget target = scenario.privacy;
        target.epsilon = eps;

        const double g_th = airfed::gain_threshold(params, target);
        const double exact = airfed::analysis::snr_bound(params, target);
        const double approx = airfed::analysis::snr_bound_approx(
            num_clients, eps, target.delta);
        const double expected_rho =
            airfed::analysis::expected_scaling_dp_blind(params, target);
        const airfed::SnrReport report = airfed::measure_snr(
            params, target, airfed::PowerPolicy::dp_blind,
            scenario.experiment.num_trials, scenario.experiment.master_seed,
            scenario.experiment.symbol_mode);

        os << number(eps) << ", " << number(target.delta) << ", "
           << num_clients << ", " << number(p0_dbm) << ", " << number(g_th)
           << ", " << number(exact) << ", "
           << number(airfed::linear_to_db(exact)) << ", " << number(approx)
           << ", " << number(expected_rho) << ", "
           << number(report.measured_snr) << ", "
           << number(report.measured_snr_db) << ", "
           << number(report.std_error) << "\n";
      }
    }
  }
  out.finish();
  return 0;
}

int cmd_train(const CommonArgs& args) {
  const airfed::Scenario scenario = load_with_overrides(args);

  const airfed::DatasetBundle data = airfed::build_datasets(
      scenario.training, scenario.experiment.master_seed);

  std::vector<int> client_grid = scenario.experiment.client_grid;
  std::sort(client_grid.begin(), client_grid.end());

  OutputTarget out(scenario.experiment.output_path);
  std::ostream& os = out.stream();
  os << "round, policy, num_clients, epsilon_target, epsilon_achieved, rho, "
        "snr_estimate, test_accuracy\n";
  if (data.mnist_fallback) {
    os << "# warning: mnist unavailable (" << data.fallback_reason
       << "); using the synthetic dataset\n";
    std::cerr << "train: mnist unavailable (" << data.fallback_reason
              << "); using the synthetic dataset\n";
  }

  for (const airfed::PowerPolicy policy : scenario.experiment.policies) {
    for (const int num_clients : client_grid) {
      const airfed::SystemParams params =
          scenario.system.with_num_clients(num_clients);
      const airfed::TrainingRunResult result = airfed::run_training(
          params, scenario.privacy, scenario.training, policy, data.train,
          data.test, scenario.experiment.master_seed,
          [&os](const airfed::TrainTraceRow& row) {
            os << row.round << ", " << airfed::policy_name(row.policy) << ", "
               << row.num_clients << ", " << number(row.epsilon_target)
               << ", " << number(row.epsilon_achieved) << ", "
               << number(row.rho) << ", " << number(row.snr_estimate) << ", "
               << number(row.test_accuracy) << "\n";
          });
      std::cerr << "train: policy=" << airfed::policy_name(policy)
                << " clients=" << num_clients
                << " final_accuracy=" << result.final_accuracy
                << " epsilon_achieved=" << result.epsilon_achieved << "\n";
    }
  }
  out.finish();
  return 0;
}

int cmd_validate(const CommonArgs& args) {
  const airfed::Scenario scenario = load_with_overrides(args);

  airfed::validate::Options options;
  options.seed = scenario.experiment.master_seed;
  options.snr_trials = scenario.experiment.num_trials;
  options.ks_draws = scenario.experiment.num_trials;
  if (args.trials_set) {
    options.rho_mc_draws = std::min<long>(10 * args.trials, 1000000);
  }

  const std::vector<airfed::validate::CheckResult> results =
      airfed::validate::run_suite(scenario, options);

  bool all_passed = true;
  for (const airfed::validate::CheckResult& check : results) {
    all_passed = all_passed && check.passed;
    std::cout << (check.passed ? "[PASS] " : "[FAIL] ") << check.name << ": "
              << check.detail << " (value=" << number(check.value)
              << ", threshold=" << number(check.threshold) << ")\n";
  }
  std::cout << (all_passed ? "validate: all checks passed\n"
                           : "validate: FAILURES present\n");

  if (!scenario.experiment.output_path.empty()) {
    OutputTarget out(scenario.experiment.output_path);
    std::ostream& os = out.stream();
    os << "check, passed, value, threshold, detail\n";
    for (const airfed::validate::CheckResult& check : results) {
      os << check.name << ", " << (check.passed ? 1 : 0) << ", "
         << number(check.value) << ", " << number(check.threshold) << ", \""
         << check.detail << "\"\n";
    }
    out.finish();
  }
  return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Differentially private over-the-air federated learning simulator"};
  app.require_subcommand(1);

  CommonArgs tradeoff_args;
  CLI::App* tradeoff = app.add_subcommand(
      "tradeoff", "Analytical SNR-privacy bounds vs Monte Carlo measurement");
  add_common_flags(tradeoff, &tradeoff_args);

  CommonArgs train_args;
  CLI::App* train = app.add_subcommand(
      "train", "Federated training through the analog aggregation channel");
  add_common_flags(train, &train_args);

  CommonArgs validate_args;
  CLI::App* validate = app.add_subcommand(
      "validate", "Run the built-in oracle suite against a scenario");
  add_common_flags(validate, &validate_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad flags are configuration errors
  }

  try {
    if (tradeoff->parsed()) return cmd_tradeoff(tradeoff_args);
    if (train->parsed()) return cmd_train(train_args);
    if (validate->parsed()) return cmd_validate(validate_args);
  } catch (const airfed::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;  // no subcommand parsed; require_subcommand should prevent this
}
