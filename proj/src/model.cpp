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

#include "airfed/model.hpp"

#include <cmath>
#include <cstring>
#include <numeric>
#include <stdexcept>

#include "airfed/kernels.hpp"

namespace airfed {

Mlp::Mlp(MlpSpec spec) : spec_(std::move(spec)) {
  if (spec_.inputs < 1 || spec_.outputs < 2) {
    throw std::invalid_argument("Mlp: need >= 1 input and >= 2 outputs");
  }
  std::vector<int> widths;
  widths.push_back(spec_.inputs);
  for (const int h : spec_.hidden) {
    if (h < 1) throw std::invalid_argument("Mlp: hidden width must be >= 1");
    widths.push_back(h);
  }
  widths.push_back(spec_.outputs);

  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    Layer layer;
    layer.fan_in = widths[l];
    layer.fan_out = widths[l + 1];
    layer.weight_offset = offset;
    offset += static_cast<std::size_t>(layer.fan_in) * layer.fan_out;
    layer.bias_offset = offset;
    offset += static_cast<std::size_t>(layer.fan_out);
    layers_.push_back(layer);
  }
  param_count_ = static_cast<int>(offset);
}

Mlp::Workspace Mlp::make_workspace(std::size_t max_batch) const {
  Workspace ws;
  ws.capacity = max_batch;
  ws.pre.resize(layers_.size());
  ws.act.resize(layers_.size());
  ws.delta.resize(layers_.size());
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const std::size_t width = static_cast<std::size_t>(layers_[l].fan_out);
    ws.pre[l].resize(max_batch * width);
    ws.act[l].resize(max_batch * width);
    ws.delta[l].resize(max_batch * width);
  }
  // act[0]'s input-side buffer: gathered batch rows.
  ws.act.insert(ws.act.begin(), std::vector<double>(
      max_batch * static_cast<std::size_t>(spec_.inputs)));
  return ws;
}

void Mlp::init_params(std::span<double> theta, Rng& rng) const {
  if (theta.size() != static_cast<std::size_t>(param_count_)) {
    throw std::invalid_argument("init_params: theta size mismatch");
  }
  for (const Layer& layer : layers_) {
    const double fan_in = static_cast<double>(layer.fan_in);
    const double stddev = spec_.activation == Activation::relu
                              ? std::sqrt(2.0 / fan_in)
                              : std::sqrt(1.0 / fan_in);
    double* w = theta.data() + layer.weight_offset;
    const std::size_t count =
        static_cast<std::size_t>(layer.fan_in) * layer.fan_out;
    for (std::size_t k = 0; k < count; ++k) w[k] = stddev * rng.next_gaussian();
    double* b = theta.data() + layer.bias_offset;
    std::memset(b, 0, static_cast<std::size_t>(layer.fan_out) *
                          sizeof(double));
  }
}

// Fills ws.act[0] with the batch rows and runs every layer; pre-activations
// land in ws.pre[l], activations in ws.act[l + 1].
void Mlp::forward(std::span<const double> theta, const Dataset& data,
                  std::span<const std::uint32_t> batch, Workspace& ws) const {
  const std::size_t b = batch.size();
  if (b == 0 || b > ws.capacity) {
    throw std::invalid_argument("Mlp: batch empty or beyond workspace");
  }
  if (theta.size() != static_cast<std::size_t>(param_count_)) {
    throw std::invalid_argument("Mlp: theta size mismatch");
  }
  if (data.num_features != spec_.inputs) {
    throw std::invalid_argument("Mlp: dataset feature width mismatch");
  }

  const std::size_t in_width = static_cast<std::size_t>(spec_.inputs);
  for (std::size_t row = 0; row < b; ++row) {
    std::memcpy(ws.act[0].data() + row * in_width, data.row(batch[row]),
                in_width * sizeof(double));
  }

  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    const double* input = ws.act[l].data();
    const double* weights = theta.data() + layer.weight_offset;
    const double* bias = theta.data() + layer.bias_offset;
    double* pre = ws.pre[l].data();
    const std::size_t out_width = static_cast<std::size_t>(layer.fan_out);

    kernels::matmul(input, weights, pre, b,
                    static_cast<std::size_t>(layer.fan_in), out_width);
    for (std::size_t row = 0; row < b; ++row) {
      kernels::axpy(1.0, bias, pre + row * out_width, out_width);
    }
    if (l + 1 < layers_.size()) {
      double* act = ws.act[l + 1].data();
      std::memcpy(act, pre, b * out_width * sizeof(double));
      if (spec_.activation == Activation::relu) {
        kernels::relu(act, b * out_width);
      } else {
        for (std::size_t k = 0; k < b * out_width; ++k) {
          act[k] = std::tanh(act[k]);
        }
      }
    }
  }
}

namespace {

// Mean cross-entropy from logits; optionally writes softmax probabilities
// (for the backward pass) over the logits buffer's mirror.
double softmax_cross_entropy(const double* logits, std::size_t batch,
                             std::size_t classes,
                             const std::int32_t* labels, double* probs_out) {
  double total = 0.0;
  for (std::size_t row = 0; row < batch; ++row) {
    const double* z = logits + row * classes;
    double z_max = z[0];
    for (std::size_t c = 1; c < classes; ++c) z_max = std::max(z_max, z[c]);
    double sum_exp = 0.0;
    for (std::size_t c = 0; c < classes; ++c) sum_exp += std::exp(z[c] - z_max);
    const double lse = z_max + std::log(sum_exp);
    total += lse - z[static_cast<std::size_t>(labels[row])];
    if (probs_out != nullptr) {
      double* p = probs_out + row * classes;
      for (std::size_t c = 0; c < classes; ++c) p[c] = std::exp(z[c] - lse);
    }
  }
  return total / static_cast<double>(batch);
}

}  // namespace

double Mlp::loss(std::span<const double> theta, const Dataset& data,
                 std::span<const std::uint32_t> batch) const {
  Workspace ws = make_workspace(batch.size());
  forward(theta, data, batch, ws);
  std::vector<std::int32_t> labels(batch.size());
  for (std::size_t row = 0; row < batch.size(); ++row) {
    labels[row] = data.labels[batch[row]];
  }
  return softmax_cross_entropy(ws.pre.back().data(), batch.size(),
                               static_cast<std::size_t>(spec_.outputs),
                               labels.data(), nullptr);
}

double Mlp::loss_and_grad(std::span<const double> theta, const Dataset& data,
                          std::span<const std::uint32_t> batch,
                          std::span<double> grad, Workspace& ws) const {
  if (grad.size() != static_cast<std::size_t>(param_count_)) {
    throw std::invalid_argument("loss_and_grad: grad size mismatch");
  }
  forward(theta, data, batch, ws);

  const std::size_t b = batch.size();
  const std::size_t classes = static_cast<std::size_t>(spec_.outputs);
  const std::size_t last = layers_.size() - 1;

  std::vector<std::int32_t> labels(b);
  for (std::size_t row = 0; row < b; ++row) labels[row] = data.labels[batch[row]];

  double* out_delta = ws.delta[last].data();
  const double loss_value =
      softmax_cross_entropy(ws.pre[last].data(), b, classes, labels.data(),
                            out_delta);
  // dL/dz = (softmax - onehot) / batch
  const double inv_b = 1.0 / static_cast<double>(b);
  for (std::size_t row = 0; row < b; ++row) {
    double* d = out_delta + row * classes;
    d[static_cast<std::size_t>(labels[row])] -= 1.0;
    kernels::scale(d, classes, inv_b);
  }

  for (std::size_t l = layers_.size(); l-- > 0;) {
    const Layer& layer = layers_[l];
    const std::size_t in_width = static_cast<std::size_t>(layer.fan_in);
    const std::size_t out_width = static_cast<std::size_t>(layer.fan_out);
    const double* input = ws.act[l].data();  // act[l] feeds layer l
    const double* delta = ws.delta[l].data();

    kernels::matmul_at_b(input, delta, grad.data() + layer.weight_offset, b,
                         in_width, out_width);
    double* bias_grad = grad.data() + layer.bias_offset;
    std::memset(bias_grad, 0, out_width * sizeof(double));
    for (std::size_t row = 0; row < b; ++row) {
      kernels::axpy(1.0, delta + row * out_width, bias_grad, out_width);
    }

    if (l > 0) {
      double* prev_delta = ws.delta[l - 1].data();
      kernels::matmul_a_bt(delta, theta.data() + layer.weight_offset,
                           prev_delta, b, out_width, in_width);
      if (spec_.activation == Activation::relu) {
        kernels::relu_backward(ws.pre[l - 1].data(), prev_delta, b * in_width);
      } else {
        const double* act = ws.act[l].data();
        for (std::size_t k = 0; k < b * in_width; ++k) {
          prev_delta[k] *= 1.0 - act[k] * act[k];
        }
      }
    }
  }
  return loss_value;
}

double Mlp::accuracy(std::span<const double> theta, const Dataset& data) const {
  constexpr std::size_t kChunk = 256;
  Workspace ws = make_workspace(kChunk);
  const std::size_t classes = static_cast<std::size_t>(spec_.outputs);
  std::vector<std::uint32_t> batch(kChunk);
  std::size_t correct = 0;
  for (std::size_t start = 0; start < data.size(); start += kChunk) {
    const std::size_t count = std::min(kChunk, data.size() - start);
    std::iota(batch.begin(), batch.begin() + count,
              static_cast<std::uint32_t>(start));
    forward(theta, data, {batch.data(), count}, ws);
    const double* logits = ws.pre.back().data();
    for (std::size_t row = 0; row < count; ++row) {
      const double* z = logits + row * classes;
      std::size_t arg = 0;
      for (std::size_t c = 1; c < classes; ++c) {
        if (z[c] > z[arg]) arg = c;
      }
      if (static_cast<std::int32_t>(arg) == data.labels[start + row]) {
        ++correct;
      }
    }
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace airfed
