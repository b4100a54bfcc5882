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

#ifndef AIRFED_DATASET_HPP_
#define AIRFED_DATASET_HPP_

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "airfed/rng.hpp"

namespace airfed {

// Raised for malformed or inconsistent dataset files.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& message)
      : std::runtime_error(message) {}
};

// Dense classification dataset: one row of `features` per sample, labels in
// [0, num_classes).
struct Dataset {
  int num_features = 0;
  int num_classes = 0;
  std::vector<double> features;  // size() x num_features, row-major
  std::vector<std::int32_t> labels;

  std::size_t size() const { return labels.size(); }
  const double* row(std::size_t index) const {
    return features.data() + index * static_cast<std::size_t>(num_features);
  }
  void validate() const;  // throws DataError on inconsistency
};

// Reads the classic IDX image/label pair (magic 0x00000803 / 0x00000801,
// big-endian dimensions). Pixels are scaled to [0, 1]. `subset` > 0 keeps
// only the first `subset` samples. Errors: bad magic, dimension or length
// mismatch, truncated file.
Dataset load_mnist_idx(const std::filesystem::path& images_path,
                       const std::filesystem::path& labels_path,
                       int subset = 0);

// Desk-scale stand-in when no image files are around: Gaussian clusters with
// unit within-class variance whose class means are drawn uniformly on the
// sphere of radius `separation`. Labels uniform. Deterministic per rng state.
Dataset synth_dataset(Rng& rng, int num_samples, int num_features,
                      int num_classes, double separation = 2.0);

// Random IID split into `num_clients` disjoint shards whose sizes differ by
// at most one (largest-remainder). The union is the input multiset. Errors:
// num_clients < 1 or more clients than samples.
std::vector<Dataset> partition_iid(const Dataset& dataset, int num_clients,
                                   Rng& rng);

}  // namespace airfed

#endif  // AIRFED_DATASET_HPP_
