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

#include "airfed/dataset.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

namespace airfed {
namespace {

std::uint32_t read_u32_be(std::istream& in, const std::string& path,
                          const char* what) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4)) {
    throw DataError(path + ": truncated while reading " + what);
  }
  return (static_cast<std::uint32_t>(bytes[0]) << 24) |
         (static_cast<std::uint32_t>(bytes[1]) << 16) |
         (static_cast<std::uint32_t>(bytes[2]) << 8) |
         static_cast<std::uint32_t>(bytes[3]);
}

constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;

}  // namespace

void Dataset::validate() const {
  if (labels.empty()) throw DataError("dataset: empty");
  if (num_features < 1 || num_classes < 2) {
    throw DataError("dataset: need >= 1 feature and >= 2 classes");
  }
  if (features.size() !=
      labels.size() * static_cast<std::size_t>(num_features)) {
    throw DataError("dataset: feature matrix does not match sample count");
  }
  for (const std::int32_t label : labels) {
    if (label < 0 || label >= num_classes) {
      throw DataError("dataset: label out of range");
    }
  }
}

Dataset load_mnist_idx(const std::filesystem::path& images_path,
                       const std::filesystem::path& labels_path, int subset) {
  std::ifstream images(images_path, std::ios::binary);
  if (!images) throw DataError(images_path.string() + ": cannot open");
  std::ifstream labels(labels_path, std::ios::binary);
  if (!labels) throw DataError(labels_path.string() + ": cannot open");

  const std::uint32_t images_magic =
      read_u32_be(images, images_path.string(), "magic");
  if (images_magic != kImagesMagic) {
    throw DataError(images_path.string() + ": bad magic (not an IDX3 file)");
  }
  const std::uint32_t image_count =
      read_u32_be(images, images_path.string(), "count");
  const std::uint32_t rows = read_u32_be(images, images_path.string(), "rows");
  const std::uint32_t cols = read_u32_be(images, images_path.string(), "cols");

  const std::uint32_t labels_magic =
      read_u32_be(labels, labels_path.string(), "magic");
  if (labels_magic != kLabelsMagic) {
    throw DataError(labels_path.string() + ": bad magic (not an IDX1 file)");
  }
  const std::uint32_t label_count =
      read_u32_be(labels, labels_path.string(), "count");
  if (label_count != image_count) {
    throw DataError("mnist: image count " + std::to_string(image_count) +
                    " does not match label count " +
                    std::to_string(label_count));
  }

  // Whole-file length checks catch truncation up front, including samples a
  // subset read would never touch.
  const std::uintmax_t pixels =
      static_cast<std::uintmax_t>(image_count) * rows * cols;
  if (std::filesystem::file_size(images_path) != 16 + pixels) {
    throw DataError(images_path.string() + ": truncated or padded file");
  }
  if (std::filesystem::file_size(labels_path) != 8 + image_count) {
    throw DataError(labels_path.string() + ": truncated or padded file");
  }

  std::uint32_t take = image_count;
  if (subset > 0 && static_cast<std::uint32_t>(subset) < take) {
    take = static_cast<std::uint32_t>(subset);
  }

  Dataset out;
  out.num_features = static_cast<int>(rows * cols);
  out.num_classes = 10;
  out.labels.resize(take);
  out.features.resize(static_cast<std::size_t>(take) * rows * cols);

  std::vector<unsigned char> buffer(static_cast<std::size_t>(rows) * cols);
  for (std::uint32_t i = 0; i < take; ++i) {
    if (!images.read(reinterpret_cast<char*>(buffer.data()),
                     static_cast<std::streamsize>(buffer.size()))) {
      throw DataError(images_path.string() + ": truncated image data");
    }
    double* row = out.features.data() + static_cast<std::size_t>(i) *
                                            buffer.size();
    for (std::size_t p = 0; p < buffer.size(); ++p) {
      row[p] = static_cast<double>(buffer[p]) / 255.0;
    }
    unsigned char label = 0;
    if (!labels.read(reinterpret_cast<char*>(&label), 1)) {
      throw DataError(labels_path.string() + ": truncated label data");
    }
    if (label > 9) {
      throw DataError(labels_path.string() + ": label out of range [0, 9]");
    }
    out.labels[i] = label;
  }
  out.validate();
  return out;
}

Dataset synth_dataset(Rng& rng, int num_samples, int num_features,
                      int num_classes, double separation) {
  if (num_samples < 1 || num_features < 1 || num_classes < 2) {
    throw std::invalid_argument("synth_dataset: degenerate shape");
  }
  if (!(separation > 0.0)) {
    throw std::invalid_argument("synth_dataset: separation must be > 0");
  }

  // Class means: isotropic Gaussian directions normalized to length
  // `separation`, so the separation-to-noise ratio is the single knob that
  // sets task difficulty.
  std::vector<double> means(
      static_cast<std::size_t>(num_classes) * num_features);
  for (int c = 0; c < num_classes; ++c) {
    double* mean = means.data() + static_cast<std::size_t>(c) * num_features;
    double norm_sq = 0.0;
    for (int f = 0; f < num_features; ++f) {
      mean[f] = rng.next_gaussian();
      norm_sq += mean[f] * mean[f];
    }
    const double norm = std::sqrt(norm_sq);
    const double scale = norm > 1e-12 ? separation / norm : 0.0;
    for (int f = 0; f < num_features; ++f) mean[f] *= scale;
  }

  Dataset out;
  out.num_features = num_features;
  out.num_classes = num_classes;
  out.labels.resize(static_cast<std::size_t>(num_samples));
  out.features.resize(static_cast<std::size_t>(num_samples) * num_features);
  for (int i = 0; i < num_samples; ++i) {
    const auto label = static_cast<std::int32_t>(
        rng.next_below(static_cast<std::uint64_t>(num_classes)));
    out.labels[static_cast<std::size_t>(i)] = label;
    const double* mean =
        means.data() + static_cast<std::size_t>(label) * num_features;
    double* row =
        out.features.data() + static_cast<std::size_t>(i) * num_features;
    for (int f = 0; f < num_features; ++f) {
      row[f] = mean[f] + rng.next_gaussian();
    }
  }
  out.validate();
  return out;
}

std::vector<Dataset> partition_iid(const Dataset& dataset, int num_clients,
                                   Rng& rng) {
  dataset.validate();
  if (num_clients < 1) {
    throw std::invalid_argument("partition_iid: need num_clients >= 1");
  }
  if (static_cast<std::size_t>(num_clients) > dataset.size()) {
    throw DataError("partition_iid: more clients than samples");
  }

  std::vector<std::uint32_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  shuffle_indices(order.data(), order.size(), rng);

  const std::size_t base = dataset.size() / num_clients;
  const std::size_t remainder = dataset.size() % num_clients;
  std::vector<Dataset> shards;
  shards.reserve(static_cast<std::size_t>(num_clients));
  std::size_t cursor = 0;
  for (int i = 0; i < num_clients; ++i) {
    const std::size_t count =
        base + (static_cast<std::size_t>(i) < remainder ? 1 : 0);
    Dataset shard;
    shard.num_features = dataset.num_features;
    shard.num_classes = dataset.num_classes;
    shard.labels.reserve(count);
    shard.features.reserve(count *
                           static_cast<std::size_t>(dataset.num_features));
    for (std::size_t k = 0; k < count; ++k) {
      const std::uint32_t src = order[cursor++];
      shard.labels.push_back(dataset.labels[src]);
      const double* row = dataset.row(src);
      shard.features.insert(shard.features.end(), row,
                            row + dataset.num_features);
    }
    shards.push_back(std::move(shard));
  }
  return shards;
}

}  // namespace airfed
