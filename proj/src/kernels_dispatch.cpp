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

#include "airfed/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <string>

#include "kernels_table.hpp"

namespace airfed::kernels {
namespace {

using detail::KernelTable;

std::atomic<const KernelTable*> g_active{nullptr};
std::atomic<Backend> g_backend{Backend::scalar};

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

void activate(Backend backend) {
  if (backend == Backend::avx2) {
    const KernelTable* table = detail::avx2_table();
    if (table == nullptr || !cpu_has_avx2()) {
      throw std::runtime_error(
          "kernels: avx2 backend requested but not supported on this CPU");
    }
    g_active.store(table, std::memory_order_release);
  } else {
    g_active.store(&detail::scalar_table(), std::memory_order_release);
  }
  g_backend.store(backend, std::memory_order_release);
}

// First use picks the backend: AIRFED_KERNELS=scalar|avx2 wins if set and
// valid, otherwise the best supported backend.
const KernelTable& active() {
  const KernelTable* table = g_active.load(std::memory_order_acquire);
  if (table != nullptr) return *table;

  static std::once_flag once;
  std::call_once(once, [] {
    Backend pick = avx2_supported() ? Backend::avx2 : Backend::scalar;
    if (const char* env = std::getenv("AIRFED_KERNELS")) {
      const std::string value(env);
      if (value == "scalar") {
        pick = Backend::scalar;
      } else if (value == "avx2" && avx2_supported()) {
        pick = Backend::avx2;
      }
      // Unknown or unsupported values fall through to the automatic pick.
    }
    activate(pick);
  });
  return *g_active.load(std::memory_order_acquire);
}

}  // namespace

bool avx2_supported() {
  return detail::avx2_table() != nullptr && cpu_has_avx2();
}

Backend active_backend() {
  active();  // force initialization
  return g_backend.load(std::memory_order_acquire);
}

void set_backend(Backend backend) { activate(backend); }

const char* backend_name(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
  }
  return "unknown";
}

double sum(const double* x, std::size_t n) { return active().sum(x, n); }

double squared_norm(const double* x, std::size_t n) {
  return active().squared_norm(x, n);
}

double dot(const double* x, const double* y, std::size_t n) {
  return active().dot(x, y, n);
}

double min_weighted_abs_squared(const std::complex<double>* h,
                                const double* w, std::size_t n) {
  return active().min_weighted_abs_squared(h, w, n);
}

double max_abs(const double* x, std::size_t n) {
  return active().max_abs(x, n);
}

void scale(double* x, std::size_t n, double a) { active().scale(x, n, a); }

void axpy(double a, const double* x, double* y, std::size_t n) {
  active().axpy(a, x, y, n);
}

void abs_squared(const std::complex<double>* h, double* out, std::size_t n) {
  active().abs_squared(h, out, n);
}

void clamp(double* x, std::size_t n, double lo, double hi) {
  active().clamp(x, n, lo, hi);
}

void relu(double* x, std::size_t n) { active().relu(x, n); }

void relu_backward(const double* pre, double* grad, std::size_t n) {
  active().relu_backward(pre, grad, n);
}

void adam_step(double* param, const double* grad, double* m, double* v,
               std::size_t n, double lr, double beta1, double beta2,
               double eps, double inv_bias1, double inv_bias2) {
  active().adam_step(param, grad, m, v, n, lr, beta1, beta2, eps, inv_bias1,
                     inv_bias2);
}

void matmul(const double* a, const double* b, double* c, std::size_t m,
            std::size_t k, std::size_t n) {
  active().matmul(a, b, c, m, k, n);
}

void matmul_at_b(const double* a, const double* b, double* c, std::size_t m,
                 std::size_t k, std::size_t n) {
  active().matmul_at_b(a, b, c, m, k, n);
}

void matmul_a_bt(const double* a, const double* b, double* c, std::size_t m,
                 std::size_t n, std::size_t k) {
  active().matmul_a_bt(a, b, c, m, n, k);
}

}  // namespace airfed::kernels
