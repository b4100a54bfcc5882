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

#include "airfed/sysconfig.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "airfed/units.hpp"

namespace airfed {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double parsed = std::stod(value, &used);
    if (used != value.size() || !std::isfinite(parsed)) {
      throw std::invalid_argument("");
    }
    return parsed;
  } catch (const std::exception&) {
    throw ConfigError("field '" + key + "': expected a finite number, got '" +
                      value + "'");
  }
}

long parse_long(const std::string& key, const std::string& value) {
  long parsed = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), parsed);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("field '" + key + "': expected an integer, got '" +
                      value + "'");
  }
  return parsed;
}

int parse_int(const std::string& key, const std::string& value) {
  const long parsed = parse_long(key, value);
  if (parsed < std::numeric_limits<int>::min() ||
      parsed > std::numeric_limits<int>::max()) {
    throw ConfigError("field '" + key + "': value out of range");
  }
  return static_cast<int>(parsed);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t parsed = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), parsed);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("field '" + key +
                      "': expected an unsigned integer, got '" + value + "'");
  }
  return parsed;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream stream(value);
  std::string item;
  while (std::getline(stream, item, ',')) items.push_back(trim(item));
  return items;
}

std::vector<double> parse_double_list(const std::string& key,
                                      const std::string& value) {
  std::vector<double> out;
  for (const auto& item : split_list(value)) {
    out.push_back(parse_double(key, item));
  }
  if (out.empty()) throw ConfigError("field '" + key + "': empty list");
  return out;
}

std::vector<int> parse_int_list(const std::string& key,
                                const std::string& value) {
  std::vector<int> out;
  for (const auto& item : split_list(value)) {
    out.push_back(parse_int(key, item));
  }
  if (out.empty()) throw ConfigError("field '" + key + "': empty list");
  return out;
}

bool parse_on_off(const std::string& key, const std::string& value) {
  if (value == "on") return true;
  if (value == "off") return false;
  throw ConfigError("field '" + key + "': expected 'on' or 'off', got '" +
                    value + "'");
}

// Raw key/value view of the file with strict unknown/duplicate detection.
class KeyValueFile {
 public:
  explicit KeyValueFile(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
      throw ConfigError("scenario file not readable: " + path.string());
    }
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string::npos) {
        line.erase(hash);
      }
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("line " + std::to_string(line_no) +
                          ": expected 'key = value', got '" + line + "'");
      }
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty() || value.empty()) {
        throw ConfigError("line " + std::to_string(line_no) +
                          ": empty key or value");
      }
      if (!entries_.emplace(key, value).second) {
        throw ConfigError("duplicate key '" + key + "'");
      }
    }
  }

  bool has(const std::string& key) const {
    consumed_.insert(key);
    return entries_.count(key) != 0;
  }

  const std::string& get(const std::string& key) const {
    consumed_.insert(key);
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
      throw ConfigError("missing required field '" + key + "'");
    }
    return it->second;
  }

  // Every key must have been looked up by the schema at least once.
  void reject_unknown() const {
    for (const auto& [key, value] : entries_) {
      if (consumed_.count(key) == 0) {
        throw ConfigError("unknown key '" + key + "'");
      }
    }
  }

 private:
  std::map<std::string, std::string> entries_;
  mutable std::set<std::string> consumed_;
};

}  // namespace

double SystemParams::sum_r_alpha() const {
  double total = 0.0;
  for (const double r : distances_m) total += std::pow(r, path_loss_exponent);
  return total;
}

SystemParams SystemParams::with_num_clients(int count) const {
  SystemParams out = *this;
  out.num_clients = count;
  if (static_cast<int>(distances_m.size()) == count) return out;
  if (!distances_uniform) {
    throw ConfigError(
        "field 'client_grid': cannot resize a heterogeneous distances_m "
        "vector; give a scalar distance to sweep client counts");
  }
  out.distances_m.assign(static_cast<std::size_t>(count), distances_m.at(0));
  return out;
}

void SystemParams::validate() const {
  if (num_clients < 1) {
    throw ConfigError("field 'num_clients': must be >= 1");
  }
  if (!(antenna_gain > 0.0)) {
    throw ConfigError("field 'antenna_gain_dbi': linear gain must be > 0");
  }
  if (!(ref_path_loss > 0.0)) {
    throw ConfigError("field 'ref_path_loss_db': linear value must be > 0");
  }
  if (!(path_loss_exponent >= 0.0)) {
    throw ConfigError("field 'path_loss_exponent': must be >= 0");
  }
  if (!(noise_power_w > 0.0)) {
    throw ConfigError("field 'noise_power_dbm': noise power must be > 0 W");
  }
  if (!(max_tx_power_w > 0.0)) {
    throw ConfigError("field 'max_tx_power_dbm': power budget must be > 0 W");
  }
  if (!(carrier_freq_hz > 0.0)) {
    throw ConfigError("field 'carrier_freq_ghz': must be > 0");
  }
  if (static_cast<int>(distances_m.size()) != num_clients) {
    throw ConfigError(
        "field 'distances_m': need one distance per client (or a scalar)");
  }
  for (const double r : distances_m) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw ConfigError("field 'distances_m': every distance must be > 0");
    }
  }
}

void PrivacyTarget::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ConfigError("field 'epsilon': must be finite and > 0");
  }
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw ConfigError("field 'delta': must lie in (0, 1)");
  }
  if (!(clip_threshold > 0.0) || !std::isfinite(clip_threshold)) {
    throw ConfigError("field 'clip_threshold': must be finite and > 0");
  }
}

void TrainingConfig::validate() const {
  if (hidden_layers.empty()) {
    throw ConfigError("field 'hidden_layers': at least one hidden layer");
  }
  for (const int width : hidden_layers) {
    if (width < 1) throw ConfigError("field 'hidden_layers': widths >= 1");
  }
  if (!(learning_rate > 0.0)) {
    throw ConfigError("field 'learning_rate': must be > 0");
  }
  if (!(adam_beta1 > 0.0 && adam_beta1 < 1.0) ||
      !(adam_beta2 > 0.0 && adam_beta2 < 1.0)) {
    throw ConfigError("field 'adam_beta1/adam_beta2': must lie in (0, 1)");
  }
  if (!(adam_epsilon > 0.0)) {
    throw ConfigError("field 'adam_epsilon': must be > 0");
  }
  if (batch_size < 1) throw ConfigError("field 'batch_size': must be >= 1");
  if (local_steps_per_round < 0) {
    throw ConfigError("field 'local_steps_per_round': must be >= 0");
  }
  if (rounds < 0) throw ConfigError("field 'rounds': must be >= 0");
  for (const double w : client_weights) {
    if (!(w > 0.0)) {
      throw ConfigError("field 'client_weights': weights must be > 0");
    }
  }
  if (dataset == DatasetKind::mnist && mnist_images.empty() !=
      mnist_labels.empty()) {
    throw ConfigError(
        "field 'mnist_images/mnist_labels': give both paths or neither");
  }
  if (mnist_subset < 0) {
    throw ConfigError("field 'mnist_subset': must be >= 0");
  }
  if (synth_classes < 2) {
    throw ConfigError("field 'synth_classes': must be >= 2");
  }
  if (synth_features < 1) {
    throw ConfigError("field 'synth_features': must be >= 1");
  }
  if (synth_samples < synth_classes) {
    throw ConfigError("field 'synth_samples': must be >= synth_classes");
  }
  if (test_samples < 1) {
    throw ConfigError("field 'test_samples': must be >= 1");
  }
  if (!(synth_separation > 0.0)) {
    throw ConfigError("field 'synth_separation': must be > 0");
  }
}

void ExperimentConfig::validate() const {
  if (epsilon_grid.empty()) {
    throw ConfigError("field 'epsilon_grid': must be nonempty");
  }
  for (const double eps : epsilon_grid) {
    if (!(eps > 0.0)) {
      throw ConfigError("field 'epsilon_grid': entries must be > 0");
    }
  }
  if (client_grid.empty()) {
    throw ConfigError("field 'client_grid': must be nonempty");
  }
  for (const int count : client_grid) {
    if (count < 1) {
      throw ConfigError("field 'client_grid': entries must be >= 1");
    }
  }
  if (p0_grid_dbm.empty()) {
    throw ConfigError("field 'p0_grid_dbm': must be nonempty");
  }
  if (num_trials < 1) {
    throw ConfigError("field 'num_trials': must be >= 1");
  }
  if (policies.empty()) {
    throw ConfigError("field 'policies': must be nonempty");
  }
}

const char* policy_name(PowerPolicy policy) {
  switch (policy) {
    case PowerPolicy::conventional:
      return "conventional";
    case PowerPolicy::dp_informed:
      return "dp_informed";
    case PowerPolicy::dp_blind:
      return "dp_blind";
  }
  return "unknown";
}

PowerPolicy policy_from_name(const std::string& name) {
  if (name == "conventional") return PowerPolicy::conventional;
  if (name == "dp_informed") return PowerPolicy::dp_informed;
  if (name == "dp_blind") return PowerPolicy::dp_blind;
  throw ConfigError("field 'policies': unknown policy '" + name +
                    "' (expected conventional, dp_informed, or dp_blind)");
}

Scenario load_scenario(const std::filesystem::path& path) {
  const KeyValueFile file(path);
  Scenario scenario;

  // --- system ---
  SystemParams& sys = scenario.system;
  sys.num_clients = parse_int("num_clients", file.get("num_clients"));
  sys.antenna_gain =
      db_to_linear(parse_double("antenna_gain_dbi", file.get("antenna_gain_dbi")));
  sys.ref_path_loss =
      db_to_linear(parse_double("ref_path_loss_db", file.get("ref_path_loss_db")));
  sys.path_loss_exponent =
      parse_double("path_loss_exponent", file.get("path_loss_exponent"));
  sys.noise_power_w =
      dbm_to_watts(parse_double("noise_power_dbm", file.get("noise_power_dbm")));
  sys.max_tx_power_w =
      dbm_to_watts(parse_double("max_tx_power_dbm", file.get("max_tx_power_dbm")));
  if (file.has("carrier_freq_ghz")) {
    sys.carrier_freq_hz =
        parse_double("carrier_freq_ghz", file.get("carrier_freq_ghz")) * 1e9;
  }
  {
    const auto distances =
        parse_double_list("distances_m", file.get("distances_m"));
    sys.distances_uniform = distances.size() == 1;
    if (sys.distances_uniform && sys.num_clients >= 1) {
      sys.distances_m.assign(static_cast<std::size_t>(sys.num_clients),
                             distances[0]);
    } else {
      sys.distances_m = distances;
    }
  }
  if (file.has("noise")) {
    sys.noise_enabled = parse_on_off("noise", file.get("noise"));
  }
  if (file.has("fading")) {
    const std::string& mode = file.get("fading");
    if (mode == "per_round") {
      sys.fading = FadingMode::per_round;
    } else if (mode == "per_slot") {
      sys.fading = FadingMode::per_slot;
    } else {
      throw ConfigError("field 'fading': expected per_round or per_slot");
    }
  }

  // --- privacy ---
  PrivacyTarget& privacy = scenario.privacy;
  privacy.epsilon = parse_double("epsilon", file.get("epsilon"));
  privacy.delta = parse_double("delta", file.get("delta"));
  privacy.clip_threshold =
      parse_double("clip_threshold", file.get("clip_threshold"));

  // --- training ---
  TrainingConfig& train = scenario.training;
  if (file.has("hidden_layers")) {
    train.hidden_layers =
        parse_int_list("hidden_layers", file.get("hidden_layers"));
  }
  if (file.has("activation")) {
    const std::string& act = file.get("activation");
    if (act == "relu") {
      train.activation = Activation::relu;
    } else if (act == "tanh") {
      train.activation = Activation::tanh_act;
    } else {
      throw ConfigError("field 'activation': expected relu or tanh");
    }
  }
  if (file.has("learning_rate")) {
    train.learning_rate = parse_double("learning_rate", file.get("learning_rate"));
  }
  if (file.has("adam_beta1")) {
    train.adam_beta1 = parse_double("adam_beta1", file.get("adam_beta1"));
  }
  if (file.has("adam_beta2")) {
    train.adam_beta2 = parse_double("adam_beta2", file.get("adam_beta2"));
  }
  if (file.has("adam_epsilon")) {
    train.adam_epsilon = parse_double("adam_epsilon", file.get("adam_epsilon"));
  }
  if (file.has("batch_size")) {
    train.batch_size = parse_int("batch_size", file.get("batch_size"));
  }
  if (file.has("local_steps_per_round")) {
    train.local_steps_per_round =
        parse_int("local_steps_per_round", file.get("local_steps_per_round"));
  }
  if (file.has("rounds")) {
    train.rounds = parse_int("rounds", file.get("rounds"));
  }
  if (file.has("clip_norm")) {
    const std::string& norm = file.get("clip_norm");
    if (norm == "l2") {
      train.clip_norm = ClipNorm::l2;
    } else if (norm == "linf") {
      train.clip_norm = ClipNorm::linf;
    } else {
      throw ConfigError("field 'clip_norm': expected l2 or linf");
    }
  }
  if (file.has("client_weights")) {
    const std::string& weights = file.get("client_weights");
    if (weights != "auto") {
      train.client_weights = parse_double_list("client_weights", weights);
      if (static_cast<int>(train.client_weights.size()) != sys.num_clients) {
        throw ConfigError(
            "field 'client_weights': need one weight per client or 'auto'");
      }
    }
  }
  if (file.has("dataset")) {
    const std::string& kind = file.get("dataset");
    if (kind == "synthetic") {
      train.dataset = DatasetKind::synthetic;
    } else if (kind == "mnist") {
      train.dataset = DatasetKind::mnist;
    } else {
      throw ConfigError("field 'dataset': expected synthetic or mnist");
    }
  }
  if (file.has("mnist_images")) train.mnist_images = file.get("mnist_images");
  if (file.has("mnist_labels")) train.mnist_labels = file.get("mnist_labels");
  if (file.has("mnist_subset")) {
    train.mnist_subset = parse_int("mnist_subset", file.get("mnist_subset"));
  }
  if (file.has("synth_samples")) {
    train.synth_samples = parse_int("synth_samples", file.get("synth_samples"));
  }
  if (file.has("test_samples")) {
    train.test_samples = parse_int("test_samples", file.get("test_samples"));
  }
  if (file.has("synth_features")) {
    train.synth_features =
        parse_int("synth_features", file.get("synth_features"));
  }
  if (file.has("synth_classes")) {
    train.synth_classes = parse_int("synth_classes", file.get("synth_classes"));
  }
  if (file.has("synth_separation")) {
    train.synth_separation =
        parse_double("synth_separation", file.get("synth_separation"));
  }

  // --- experiment ---
  ExperimentConfig& experiment = scenario.experiment;
  experiment.epsilon_grid =
      file.has("epsilon_grid")
          ? parse_double_list("epsilon_grid", file.get("epsilon_grid"))
          : std::vector<double>{privacy.epsilon};
  experiment.client_grid =
      file.has("client_grid")
          ? parse_int_list("client_grid", file.get("client_grid"))
          : std::vector<int>{sys.num_clients};
  experiment.p0_grid_dbm =
      file.has("p0_grid_dbm")
          ? parse_double_list("p0_grid_dbm", file.get("p0_grid_dbm"))
          : std::vector<double>{watts_to_dbm(sys.max_tx_power_w)};
  if (file.has("num_trials")) {
    experiment.num_trials = parse_long("num_trials", file.get("num_trials"));
  }
  if (file.has("master_seed")) {
    experiment.master_seed = parse_u64("master_seed", file.get("master_seed"));
  }
  if (file.has("output")) experiment.output_path = file.get("output");
  if (file.has("policies")) {
    experiment.policies.clear();
    for (const auto& name : split_list(file.get("policies"))) {
      experiment.policies.push_back(policy_from_name(name));
    }
  }
  if (file.has("symbol_mode")) {
    const std::string& mode = file.get("symbol_mode");
    if (mode == "saturated") {
      experiment.symbol_mode = SymbolMode::saturated;
    } else if (mode == "realized") {
      experiment.symbol_mode = SymbolMode::realized;
    } else {
      throw ConfigError("field 'symbol_mode': expected saturated or realized");
    }
  }

  file.reject_unknown();

  sys.validate();
  privacy.validate();
  train.validate();
  experiment.validate();
  return scenario;
}

}  // namespace airfed
