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

#ifndef AIRFED_MODEL_HPP_
#define AIRFED_MODEL_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "airfed/dataset.hpp"
#include "airfed/rng.hpp"
#include "airfed/sysconfig.hpp"

namespace airfed {

// Fully connected softmax classifier shape.
struct MlpSpec {
  int inputs = 0;
  std::vector<int> hidden;
  int outputs = 0;
  Activation activation = Activation::relu;
};

// Multilayer perceptron over a flat parameter vector.
//
// Parameter layout (fixed, so update vectors are comparable across clients):
// layers in forward order; within a layer the weight matrix W (fan_in x
// fan_out, row-major) followed by the bias vector (fan_out). The model does
// not own parameters — every method takes the flat vector, which is what the
// aggregation path transmits.
class Mlp {
 public:
  explicit Mlp(MlpSpec spec);

  const MlpSpec& spec() const { return spec_; }
  int param_count() const { return param_count_; }

  // Reusable forward/backward buffers for one batch size. Scratch only; no
  // statistics are carried between calls.
  struct Workspace {
    std::size_t capacity = 0;
    std::vector<std::vector<double>> pre;    // per layer, batch x width
    std::vector<std::vector<double>> act;    // per layer, batch x width
    std::vector<std::vector<double>> delta;  // per layer, batch x width
  };
  Workspace make_workspace(std::size_t max_batch) const;

  // Weights ~ N(0, sqrt(2/fan_in)) for relu (He), N(0, sqrt(1/fan_in)) for
  // tanh (Xavier); biases zero. theta.size() must equal param_count().
  void init_params(std::span<double> theta, Rng& rng) const;

  // Mean softmax cross-entropy of the batch rows `batch` (dataset indices).
  double loss(std::span<const double> theta, const Dataset& data,
              std::span<const std::uint32_t> batch) const;

  // Loss plus its gradient with respect to theta (same layout), averaged
  // over the batch. grad must have param_count() entries.
  double loss_and_grad(std::span<const double> theta, const Dataset& data,
                       std::span<const std::uint32_t> batch,
                       std::span<double> grad, Workspace& ws) const;

  // Fraction of argmax-correct predictions (ties resolve to the lowest
  // class index).
  double accuracy(std::span<const double> theta, const Dataset& data) const;

 private:
  struct Layer {
    int fan_in = 0;
    int fan_out = 0;
    std::size_t weight_offset = 0;  // into theta
    std::size_t bias_offset = 0;
  };

  void forward(std::span<const double> theta, const Dataset& data,
               std::span<const std::uint32_t> batch, Workspace& ws) const;

  MlpSpec spec_;
  std::vector<Layer> layers_;
  int param_count_ = 0;
};

}  // namespace airfed

#endif  // AIRFED_MODEL_HPP_
