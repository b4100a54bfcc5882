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

#ifndef AIRFED_KERNELS_HPP_
#define AIRFED_KERNELS_HPP_

#include <complex>
#include <cstddef>
#include <string>

namespace airfed::kernels {

// Numeric inner loops used by the simulator and the trainer. Every kernel has
// a portable scalar reference implementation and, on x86-64 with AVX2+FMA, a
// vectorized variant. The backend is chosen once at startup from CPU
// capabilities and may be overridden (environment variable AIRFED_KERNELS or
// set_backend) — primarily so tests can compare the two implementations on
// identical inputs.
//
// Contract shared by both backends: results are deterministic for fixed
// inputs, and reductions use a fixed association (lane accumulators combined
// in index order), so the vector and scalar answers agree to a few ulp but
// are not required to be bit-identical.

enum class Backend { scalar, avx2 };

// Active backend for this process.
Backend active_backend();

// True when the CPU (and build) support the AVX2 backend.
bool avx2_supported();

// Force a backend. Throws std::runtime_error if it is not supported here.
void set_backend(Backend backend);

const char* backend_name(Backend backend);

// ---- Reductions ----

// Sum of x[0..n).
double sum(const double* x, std::size_t n);

// Sum of squares of x[0..n).
double squared_norm(const double* x, std::size_t n);

// Dot product of x and y.
double dot(const double* x, const double* y, std::size_t n);

// min over i of w[i] * |h[i]|^2 for complex h. n must be >= 1.
double min_weighted_abs_squared(const std::complex<double>* h,
                                const double* w, std::size_t n);

// Largest absolute value in x[0..n); 0 for n == 0.
double max_abs(const double* x, std::size_t n);

// ---- Elementwise transforms ----

// x[i] *= a.
void scale(double* x, std::size_t n, double a);

// y[i] += a * x[i].
void axpy(double a, const double* x, double* y, std::size_t n);

// out[i] = |h[i]|^2.
void abs_squared(const std::complex<double>* h, double* out, std::size_t n);

// x[i] = min(max(x[i], lo), hi).
void clamp(double* x, std::size_t n, double lo, double hi);

// In-place ReLU: x[i] = max(x[i], 0).
void relu(double* x, std::size_t n);

// grad[i] = pre[i] > 0 ? grad[i] : 0. Backward pass masked by the forward
// pre-activation sign.
void relu_backward(const double* pre, double* grad, std::size_t n);

// One Adam update step over n parameters. m/v are the first/second moment
// accumulators; inv_bias1 = 1/(1-beta1^t), inv_bias2 = 1/(1-beta2^t) carry
// the step-count bias correction.
void adam_step(double* param, const double* grad, double* m, double* v,
               std::size_t n, double lr, double beta1, double beta2,
               double eps, double inv_bias1, double inv_bias2);

// ---- Small dense matrix products (row-major, fully contiguous) ----

// c[m,n] = a[m,k] * b[k,n]
void matmul(const double* a, const double* b, double* c, std::size_t m,
            std::size_t k, std::size_t n);

// c[k,n] = a[m,k]^T * b[m,n]   (weight-gradient shape)
void matmul_at_b(const double* a, const double* b, double* c, std::size_t m,
                 std::size_t k, std::size_t n);

// c[m,k] = a[m,n] * b[k,n]^T   (input-gradient shape)
void matmul_a_bt(const double* a, const double* b, double* c, std::size_t m,
                 std::size_t n, std::size_t k);

}  // namespace airfed::kernels

#endif  // AIRFED_KERNELS_HPP_
