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

// Private dispatch table shared by the kernel backends. Each backend fills
// one of these with its entry points; the public functions in kernels.hpp
// forward through the active table.

#ifndef AIRFED_SRC_KERNELS_TABLE_HPP_
#define AIRFED_SRC_KERNELS_TABLE_HPP_

#include <complex>
#include <cstddef>

namespace airfed::kernels::detail {

struct KernelTable {
  double (*sum)(const double*, std::size_t);
  double (*squared_norm)(const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*min_weighted_abs_squared)(const std::complex<double>*,
                                     const double*, std::size_t);
  double (*max_abs)(const double*, std::size_t);
  void (*scale)(double*, std::size_t, double);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*abs_squared)(const std::complex<double>*, double*, std::size_t);
  void (*clamp)(double*, std::size_t, double, double);
  void (*relu)(double*, std::size_t);
  void (*relu_backward)(const double*, double*, std::size_t);
  void (*adam_step)(double*, const double*, double*, double*, std::size_t,
                    double, double, double, double, double, double);
  void (*matmul)(const double*, const double*, double*, std::size_t,
                 std::size_t, std::size_t);
  void (*matmul_at_b)(const double*, const double*, double*, std::size_t,
                      std::size_t, std::size_t);
  void (*matmul_a_bt)(const double*, const double*, double*, std::size_t,
                      std::size_t, std::size_t);
};

const KernelTable& scalar_table();

// Null when the build or CPU cannot run AVX2+FMA.
const KernelTable* avx2_table();

}  // namespace airfed::kernels::detail

#endif  // AIRFED_SRC_KERNELS_TABLE_HPP_
