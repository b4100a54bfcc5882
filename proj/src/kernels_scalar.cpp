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

// Portable reference implementations. These define the semantics the
// vectorized backend must reproduce; keep them straightforward.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstring>

#include "kernels_table.hpp"

namespace airfed::kernels::detail {
namespace {

double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double squared_norm_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double min_weighted_abs_squared_scalar(const std::complex<double>* h,
                                       const double* w, std::size_t n) {
  double best = w[0] * std::norm(h[0]);
  for (std::size_t i = 1; i < n; ++i) {
    const double v = w[i] * std::norm(h[i]);
    if (v < best) best = v;
  }
  return best;
}

double max_abs_scalar(const double* x, std::size_t n) {
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::fabs(x[i]);
    if (v > best) best = v;
  }
  return best;
}

void scale_scalar(double* x, std::size_t n, double a) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void abs_squared_scalar(const std::complex<double>* h, double* out,
                        std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::norm(h[i]);
}

void clamp_scalar(double* x, std::size_t n, double lo, double hi) {
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = x[i] < lo ? lo : (x[i] > hi ? hi : x[i]);
  }
}

void relu_scalar(double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] < 0.0) x[i] = 0.0;
  }
}

void relu_backward_scalar(const double* pre, double* grad, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (pre[i] <= 0.0) grad[i] = 0.0;
  }
}

void adam_step_scalar(double* param, const double* grad, double* m, double* v,
                      std::size_t n, double lr, double beta1, double beta2,
                      double eps, double inv_bias1, double inv_bias2) {
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
    const double m_hat = m[i] * inv_bias1;
    const double v_hat = v[i] * inv_bias2;
    param[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
  }
}

// c[m,n] = a[m,k] b[k,n]. Accumulating over rows of b keeps the inner loop
// contiguous in both b and c.
void matmul_scalar(const double* a, const double* b, double* c, std::size_t m,
                   std::size_t k, std::size_t n) {
  std::memset(c, 0, m * n * sizeof(double));
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * n;
    for (std::size_t l = 0; l < k; ++l) {
      const double aval = a[i * k + l];
      const double* brow = b + l * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aval * brow[j];
    }
  }
}

// c[k,n] = a[m,k]^T b[m,n]
void matmul_at_b_scalar(const double* a, const double* b, double* c,
                        std::size_t m, std::size_t k, std::size_t n) {
  std::memset(c, 0, k * n * sizeof(double));
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * k;
    const double* brow = b + i * n;
    for (std::size_t l = 0; l < k; ++l) {
      const double aval = arow[l];
      double* crow = c + l * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aval * brow[j];
    }
  }
}

// c[m,k] = a[m,n] b[k,n]^T — rows of a dotted with rows of b.
void matmul_a_bt_scalar(const double* a, const double* b, double* c,
                        std::size_t m, std::size_t n, std::size_t k) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * n;
    for (std::size_t l = 0; l < k; ++l) {
      c[i * k + l] = dot_scalar(arow, b + l * n, n);
    }
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table = {
      sum_scalar,
      squared_norm_scalar,
      dot_scalar,
      min_weighted_abs_squared_scalar,
      max_abs_scalar,
      scale_scalar,
      axpy_scalar,
      abs_squared_scalar,
      clamp_scalar,
      relu_scalar,
      relu_backward_scalar,
      adam_step_scalar,
      matmul_scalar,
      matmul_at_b_scalar,
      matmul_a_bt_scalar,
  };
  return table;
}

}  // namespace airfed::kernels::detail
