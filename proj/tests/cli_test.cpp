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

// End-to-end checks of the `airfed` binary: exit codes, output schemas, and
// byte-level determinism. The binary path and scenario directory come in
// through compile definitions so the test works from any build directory.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

namespace {

namespace fs = std::filesystem;

const char kTrainScenario[] =
    "num_clients = 5\n"
    "antenna_gain_dbi = 0\n"
    "ref_path_loss_db = -46\n"
    "path_loss_exponent = 2\n"
    "noise_power_dbm = -60\n"
    "max_tx_power_dbm = 10\n"
    "distances_m = 100\n"
    "epsilon = 0.01\n"
    "delta = 0.1\n"
    "clip_threshold = 5e-5\n"
    "hidden_layers = 6\n"
    "batch_size = 8\n"
    "local_steps_per_round = 1\n"
    "rounds = 2\n"
    "synth_samples = 200\n"
    "synth_features = 8\n"
    "synth_classes = 3\n"
    "test_samples = 60\n"
    "client_grid = 5\n"
    "policies = dp_blind\n";

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

class TempDir {
 public:
  TempDir() {
    dir_ = fs::temp_directory_path() /
           ("airfed_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  fs::path file(const std::string& name) const { return dir_ / name; }

 private:
  fs::path dir_;
};

// Runs the CLI with the given arguments, capturing stdout; stderr goes to a
// scratch file to keep test output readable.
RunResult run_cli(const TempDir& tmp, const std::string& args) {
  const fs::path out_path = tmp.file("stdout.capture");
  const fs::path err_path = tmp.file("stderr.capture");
  const std::string command = std::string(AIRFED_CLI_PATH) + " " + args +
                              " > " + out_path.string() + " 2> " +
                              err_path.string();
  const int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.stdout_text = read_file(out_path);
  return result;
}

std::string scenario(const std::string& name) {
  return (fs::path(AIRFED_SCENARIO_DIR) / name).string();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

TEST_CASE("cli: bad invocations exit with the usage code") {
  TempDir tmp;
  CHECK(run_cli(tmp, "").exit_code == 2);
  CHECK(run_cli(tmp, "conjure").exit_code == 2);
  CHECK(run_cli(tmp, "tradeoff").exit_code == 2);  // --scenario is required
  CHECK(run_cli(tmp, "tradeoff --scenario " + scenario("reference_ring.cfg") +
                         " --frobnicate")
            .exit_code == 2);
  CHECK(run_cli(tmp, "tradeoff --scenario /nonexistent.cfg").exit_code == 2);
  CHECK(run_cli(tmp, "--help").exit_code == 0);
}

TEST_CASE("cli: invalid scenario values exit with the config code") {
  TempDir tmp;
  const fs::path bad = tmp.file("bad_delta.cfg");
  {
    std::ofstream out(bad);
    std::string text = kTrainScenario;
    text.replace(text.find("delta = 0.1"), 11, "delta = 1.3");
    out << text;
  }
  CHECK(run_cli(tmp, "tradeoff --scenario " + bad.string()).exit_code == 2);
  CHECK(run_cli(tmp, "train --scenario " + bad.string()).exit_code == 2);
  CHECK(run_cli(tmp, "validate --scenario " + bad.string()).exit_code == 2);
}

TEST_CASE("cli: tradeoff sweep has the documented schema and is reproducible") {
  TempDir tmp;
  const fs::path out = tmp.file("tradeoff.csv");
  const std::string args = "tradeoff --scenario " +
                           scenario("reference_ring.cfg") +
                           " --trials 2000 --out " + out.string();
  const RunResult first = run_cli(tmp, args);
  REQUIRE(first.exit_code == 0);
  const std::string first_bytes = read_file(out);

  const std::vector<std::string> lines = lines_of(first_bytes);
  REQUIRE(lines.size() == 9);  // header + 4 epsilon x 2 client counts
  CHECK(lines[0] ==
        "epsilon, delta, num_clients, p0_dbm, g_th, exact_bound, "
        "exact_bound_db, approx_bound, expected_rho, measured_snr, "
        "measured_snr_db, std_error");
  // Closed-form columns carry full precision: the frozen I=5, eps=0.01
  // bound appears verbatim in the first data row.
  CHECK(lines[1].find("0.00024720973079684136") != std::string::npos);

  // Byte-identical on a rerun.
  const RunResult second = run_cli(tmp, args);
  REQUIRE(second.exit_code == 0);
  CHECK(read_file(out) == first_bytes);

  // Without --out the same table goes to stdout.
  const RunResult streamed = run_cli(
      tmp, "tradeoff --scenario " + scenario("reference_ring.cfg") +
               " --trials 2000");
  REQUIRE(streamed.exit_code == 0);
  CHECK(streamed.stdout_text == first_bytes);
}

TEST_CASE("cli: train trace has the documented schema and is reproducible") {
  TempDir tmp;
  const fs::path cfg = tmp.file("train.cfg");
  {
    std::ofstream out(cfg);
    out << kTrainScenario;
  }
  const fs::path out = tmp.file("train.csv");
  const std::string args =
      "train --scenario " + cfg.string() + " --out " + out.string();
  const RunResult run = run_cli(tmp, args);
  REQUIRE(run.exit_code == 0);
  const std::string bytes = read_file(out);
  const std::vector<std::string> lines = lines_of(bytes);
  REQUIRE(lines.size() == 3);  // header + 2 rounds for one policy/cell
  CHECK(lines[0] ==
        "round, policy, num_clients, epsilon_target, epsilon_achieved, rho, "
        "snr_estimate, test_accuracy");
  CHECK(lines[1].substr(0, 12) == "0, dp_blind,");
  CHECK(lines[2].substr(0, 12) == "1, dp_blind,");

  const RunResult again = run_cli(tmp, args);
  REQUIRE(again.exit_code == 0);
  CHECK(read_file(out) == bytes);
}

TEST_CASE("cli: train with zero rounds writes a header-only trace") {
  TempDir tmp;
  const fs::path cfg = tmp.file("zero_rounds.cfg");
  {
    std::ofstream out(cfg);
    std::string text = kTrainScenario;
    text.replace(text.find("rounds = 2"), 10, "rounds = 0");
    out << text;
  }
  const fs::path out = tmp.file("zero.csv");
  const RunResult run =
      run_cli(tmp, "train --scenario " + cfg.string() + " --out " +
                       out.string());
  REQUIRE(run.exit_code == 0);
  const std::vector<std::string> lines = lines_of(read_file(out));
  REQUIRE(lines.size() == 1);
  CHECK(lines[0].substr(0, 5) == "round");
}

TEST_CASE("cli: validate prints one verdict per check and exits by outcome") {
  TempDir tmp;
  const fs::path out = tmp.file("validate.csv");
  const RunResult run = run_cli(
      tmp, "validate --scenario " + scenario("reference_ring.cfg") +
               " --trials 4000 --out " + out.string());
  REQUIRE(run.exit_code == 0);
  // Nine verdict lines followed by a one-line overall summary.
  const std::vector<std::string> verdicts = lines_of(run.stdout_text);
  REQUIRE(verdicts.size() == 10);
  for (std::size_t i = 0; i + 1 < verdicts.size(); ++i) {
    CHECK(verdicts[i].substr(0, 7) == "[PASS] ");
  }
  CHECK(verdicts.back() == "validate: all checks passed");
  const std::vector<std::string> csv = lines_of(read_file(out));
  REQUIRE(csv.size() == 10);
  CHECK(csv[0] == "check, passed, value, threshold, detail");
}

TEST_CASE("cli: seed override changes measurements, same seed repeats them") {
  TempDir tmp;
  const std::string base = "tradeoff --scenario " +
                           scenario("reference_ring.cfg") + " --trials 2000";
  const RunResult s1 = run_cli(tmp, base + " --seed 11");
  const RunResult s1_again = run_cli(tmp, base + " --seed 11");
  const RunResult s2 = run_cli(tmp, base + " --seed 12");
  REQUIRE(s1.exit_code == 0);
  REQUIRE(s2.exit_code == 0);
  CHECK(s1.stdout_text == s1_again.stdout_text);
  CHECK(s1.stdout_text != s2.stdout_text);
}

}  // namespace
