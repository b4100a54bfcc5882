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

// AVX2+FMA backend. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after a runtime CPU check (see kernels_dispatch.cpp).
//
// Reductions keep four lane accumulators and combine them in lane order, so
// results are deterministic for a given input; they differ from the scalar
// backend only by floating-point reassociation.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstring>

#include "kernels_table.hpp"

namespace airfed::kernels::detail {
namespace {

inline double hsum_ordered(__m256d v) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, v);
  return ((lane[0] + lane[1]) + lane[2]) + lane[3];
}

inline double hmin(__m256d v) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, v);
  double best = lane[0];
  for (int i = 1; i < 4; ++i) {
    if (lane[i] < best) best = lane[i];
  }
  return best;
}

inline double hmax(__m256d v) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, v);
  double best = lane[0];
  for (int i = 1; i < 4; ++i) {
    if (lane[i] > best) best = lane[i];
  }
  return best;
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  }
  double total = hsum_ordered(acc);
  for (; i < n; ++i) total += x[i];
  return total;
}

double squared_norm_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double total = hsum_ordered(acc);
  for (; i < n; ++i) total += x[i] * x[i];
  return total;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  }
  double total = hsum_ordered(acc);
  for (; i < n; ++i) total += x[i] * y[i];
  return total;
}

double min_weighted_abs_squared_avx2(const std::complex<double>* h,
                                     const double* w, std::size_t n) {
  const double* hd = reinterpret_cast<const double*>(h);
  __m256d best = _mm256_set1_pd(HUGE_VAL);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // Two loads cover four interleaved (re, im) pairs.
    const __m256d lo = _mm256_loadu_pd(hd + 2 * i);      // re0 im0 re1 im1
    const __m256d hi = _mm256_loadu_pd(hd + 2 * i + 4);  // re2 im2 re3 im3
    const __m256d sq_lo = _mm256_mul_pd(lo, lo);
    const __m256d sq_hi = _mm256_mul_pd(hi, hi);
    // hadd yields |h0|^2 |h2|^2 |h1|^2 |h3|^2; restore index order.
    const __m256d mags = _mm256_permute4x64_pd(
        _mm256_hadd_pd(sq_lo, sq_hi), _MM_SHUFFLE(3, 1, 2, 0));
    best = _mm256_min_pd(best, _mm256_mul_pd(mags, _mm256_loadu_pd(w + i)));
  }
  double result = hmin(best);
  for (; i < n; ++i) {
    const double v = w[i] * std::norm(h[i]);
    if (v < result) result = v;
  }
  return result;
}

double max_abs_avx2(const double* x, std::size_t n) {
  const __m256d abs_mask =
      _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  __m256d best = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    best = _mm256_max_pd(best,
                         _mm256_and_pd(abs_mask, _mm256_loadu_pd(x + i)));
  }
  double result = hmax(best);
  for (; i < n; ++i) {
    const double v = std::fabs(x[i]);
    if (v > result) result = v;
  }
  return result;
}

void scale_avx2(double* x, std::size_t n, double a) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), av));
  }
  for (; i < n; ++i) x[i] *= a;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(
        y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i),
                               _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void abs_squared_avx2(const std::complex<double>* h, double* out,
                      std::size_t n) {
  const double* hd = reinterpret_cast<const double*>(h);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d lo = _mm256_loadu_pd(hd + 2 * i);
    const __m256d hi = _mm256_loadu_pd(hd + 2 * i + 4);
    const __m256d mags = _mm256_permute4x64_pd(
        _mm256_hadd_pd(_mm256_mul_pd(lo, lo), _mm256_mul_pd(hi, hi)),
        _MM_SHUFFLE(3, 1, 2, 0));
    _mm256_storeu_pd(out + i, mags);
  }
  for (; i < n; ++i) out[i] = std::norm(h[i]);
}

void clamp_avx2(double* x, std::size_t n, double lo, double hi) {
  const __m256d lov = _mm256_set1_pd(lo);
  const __m256d hiv = _mm256_set1_pd(hi);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(
        x + i,
        _mm256_min_pd(hiv, _mm256_max_pd(lov, _mm256_loadu_pd(x + i))));
  }
  for (; i < n; ++i) x[i] = x[i] < lo ? lo : (x[i] > hi ? hi : x[i]);
}

void relu_avx2(double* x, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_max_pd(zero, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) {
    if (x[i] < 0.0) x[i] = 0.0;
  }
}

void relu_backward_avx2(const double* pre, double* grad, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d mask =
        _mm256_cmp_pd(_mm256_loadu_pd(pre + i), zero, _CMP_GT_OQ);
    _mm256_storeu_pd(grad + i,
                     _mm256_and_pd(mask, _mm256_loadu_pd(grad + i)));
  }
  for (; i < n; ++i) {
    if (pre[i] <= 0.0) grad[i] = 0.0;
  }
}

void adam_step_avx2(double* param, const double* grad, double* m, double* v,
                    std::size_t n, double lr, double beta1, double beta2,
                    double eps, double inv_bias1, double inv_bias2) {
  const __m256d b1 = _mm256_set1_pd(beta1);
  const __m256d b2 = _mm256_set1_pd(beta2);
  const __m256d one_minus_b1 = _mm256_set1_pd(1.0 - beta1);
  const __m256d one_minus_b2 = _mm256_set1_pd(1.0 - beta2);
  const __m256d lrv = _mm256_set1_pd(lr);
  const __m256d epsv = _mm256_set1_pd(eps);
  const __m256d ib1 = _mm256_set1_pd(inv_bias1);
  const __m256d ib2 = _mm256_set1_pd(inv_bias2);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d g = _mm256_loadu_pd(grad + i);
    const __m256d mv =
        _mm256_fmadd_pd(b1, _mm256_loadu_pd(m + i),
                        _mm256_mul_pd(one_minus_b1, g));
    const __m256d vv = _mm256_fmadd_pd(
        b2, _mm256_loadu_pd(v + i),
        _mm256_mul_pd(one_minus_b2, _mm256_mul_pd(g, g)));
    _mm256_storeu_pd(m + i, mv);
    _mm256_storeu_pd(v + i, vv);
    const __m256d m_hat = _mm256_mul_pd(mv, ib1);
    const __m256d v_hat = _mm256_mul_pd(vv, ib2);
    const __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(v_hat), epsv);
    const __m256d step = _mm256_div_pd(_mm256_mul_pd(lrv, m_hat), denom);
    _mm256_storeu_pd(param + i,
                     _mm256_sub_pd(_mm256_loadu_pd(param + i), step));
  }
  for (; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
    const double m_hat = m[i] * inv_bias1;
    const double v_hat = v[i] * inv_bias2;
    param[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
  }
}

// Shared inner pattern for c_row[j] += a_val * b_row[j].
inline void fma_row(const double a_val, const double* b_row, double* c_row,
                    std::size_t n) {
  const __m256d av = _mm256_set1_pd(a_val);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    _mm256_storeu_pd(
        c_row + j, _mm256_fmadd_pd(av, _mm256_loadu_pd(b_row + j),
                                   _mm256_loadu_pd(c_row + j)));
  }
  for (; j < n; ++j) c_row[j] += a_val * b_row[j];
}

void matmul_avx2(const double* a, const double* b, double* c, std::size_t m,
                 std::size_t k, std::size_t n) {
  std::memset(c, 0, m * n * sizeof(double));
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * n;
    for (std::size_t l = 0; l < k; ++l) {
      fma_row(a[i * k + l], b + l * n, crow, n);
    }
  }
}

void matmul_at_b_avx2(const double* a, const double* b, double* c,
                      std::size_t m, std::size_t k, std::size_t n) {
  std::memset(c, 0, k * n * sizeof(double));
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * k;
    const double* brow = b + i * n;
    for (std::size_t l = 0; l < k; ++l) {
      fma_row(arow[l], brow, c + l * n, n);
    }
  }
}

void matmul_a_bt_avx2(const double* a, const double* b, double* c,
                      std::size_t m, std::size_t n, std::size_t k) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * n;
    for (std::size_t l = 0; l < k; ++l) {
      c[i * k + l] = dot_avx2(arow, b + l * n, n);
    }
  }
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable table = {
      sum_avx2,
      squared_norm_avx2,
      dot_avx2,
      min_weighted_abs_squared_avx2,
      max_abs_avx2,
      scale_avx2,
      axpy_avx2,
      abs_squared_avx2,
      clamp_avx2,
      relu_avx2,
      relu_backward_avx2,
      adam_step_avx2,
      matmul_avx2,
      matmul_at_b_avx2,
      matmul_a_bt_avx2,
  };
  return &table;
}

}  // namespace airfed::kernels::detail

#else  // non-x86 build: no AVX2 backend.

#include "kernels_table.hpp"

namespace airfed::kernels::detail {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace airfed::kernels::detail

#endif
