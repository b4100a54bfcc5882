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

#include <cmath>
#include <complex>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>

#include "airfed/rng.hpp"

namespace {

using namespace airfed;

// Restores whatever backend was active when the test started, so one test
// cannot leak a forced backend into the next.
class BackendGuard {
 public:
  BackendGuard() : saved_(kernels::active_backend()) {}
  ~BackendGuard() { kernels::set_backend(saved_); }

 private:
  kernels::Backend saved_;
};

std::vector<double> random_vector(Rng& rng, std::size_t n, double scale = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = scale * rng.next_gaussian();
  return v;
}

// Sizes chosen to hit empty input, sub-lane lengths, exact lane multiples,
// and ragged tails of the 4-wide AVX2 loops.
const std::size_t kSizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 32, 33, 100, 257};

bool close_rel(double a, double b, double rel) {
  const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
  return std::fabs(a - b) <= rel * scale;
}

// Relative tolerance plus an absolute floor.  Cross-backend checks need the
// floor because the AVX2 paths contract multiply-add pairs into FMAs: when a
// result lands near zero through cancellation the one-ulp intermediate
// difference is huge *relative* to the output while still tiny on the scale
// of the inputs.
bool close_mix(double a, double b, double rel, double abs_tol) {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return std::fabs(a - b) <= abs_tol + rel * scale;
}

TEST_CASE("kernels: backend control and names") {
  BackendGuard guard;
  kernels::set_backend(kernels::Backend::scalar);
  CHECK(kernels::active_backend() == kernels::Backend::scalar);
  CHECK(std::string(kernels::backend_name(kernels::Backend::scalar)) ==
        "scalar");
  CHECK(std::string(kernels::backend_name(kernels::Backend::avx2)) == "avx2");
  if (kernels::avx2_supported()) {
    kernels::set_backend(kernels::Backend::avx2);
    CHECK(kernels::active_backend() == kernels::Backend::avx2);
  }
}

TEST_CASE("kernels: scalar reductions match hand-rolled references") {
  BackendGuard guard;
  kernels::set_backend(kernels::Backend::scalar);
  Rng rng(101);
  for (std::size_t n : kSizes) {
    const std::vector<double> x = random_vector(rng, n);
    const std::vector<double> y = random_vector(rng, n);
    double sum = 0.0, sq = 0.0, dot = 0.0, mx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += x[i];
      sq += x[i] * x[i];
      dot += x[i] * y[i];
      mx = std::max(mx, std::fabs(x[i]));
    }
    CHECK(close_rel(kernels::sum(x.data(), n), sum, 1e-13));
    CHECK(close_rel(kernels::squared_norm(x.data(), n), sq, 1e-13));
    CHECK(close_rel(kernels::dot(x.data(), y.data(), n), dot, 1e-12));
    CHECK(kernels::max_abs(x.data(), n) == mx);
  }
}

TEST_CASE("kernels: min_weighted_abs_squared picks the weakest link") {
  BackendGuard guard;
  kernels::set_backend(kernels::Backend::scalar);
  Rng rng(103);
  for (std::size_t n : {1, 2, 3, 4, 5, 8, 9, 33, 100}) {
    std::vector<std::complex<double>> h(n);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
      h[i] = {rng.next_gaussian(), rng.next_gaussian()};
      w[i] = 0.1 + rng.next_double();
    }
    double ref = w[0] * std::norm(h[0]);
    for (std::size_t i = 1; i < n; ++i) {
      ref = std::min(ref, w[i] * std::norm(h[i]));
    }
    CHECK(close_rel(kernels::min_weighted_abs_squared(h.data(), w.data(), n),
                    ref, 1e-14));
  }
}

TEST_CASE("kernels: elementwise transforms behave as documented") {
  BackendGuard guard;
  kernels::set_backend(kernels::Backend::scalar);
  Rng rng(105);
  std::vector<double> x = random_vector(rng, 33);
  std::vector<double> orig = x;

  kernels::scale(x.data(), x.size(), 2.5);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i] == orig[i] * 2.5);

  std::vector<double> y = random_vector(rng, 33);
  std::vector<double> y0 = y;
  kernels::axpy(-1.5, x.data(), y.data(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(y[i] == doctest::Approx(y0[i] - 1.5 * x[i]).epsilon(1e-15));
  }

  std::vector<std::complex<double>> h(9);
  for (auto& c : h) c = {rng.next_gaussian(), rng.next_gaussian()};
  std::vector<double> mag(9);
  kernels::abs_squared(h.data(), mag.data(), h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    CHECK(mag[i] == doctest::Approx(std::norm(h[i])).epsilon(1e-15));
  }

  std::vector<double> c = {-3.0, -0.5, 0.0, 0.4, 2.0};
  kernels::clamp(c.data(), c.size(), -0.5, 0.5);
  CHECK(c == std::vector<double>{-0.5, -0.5, 0.0, 0.4, 0.5});

  std::vector<double> r = {-1.0, 0.0, 2.0, -0.25, 5.0};
  kernels::relu(r.data(), r.size());
  CHECK(r == std::vector<double>{0.0, 0.0, 2.0, 0.0, 5.0});

  std::vector<double> pre = {-1.0, 0.0, 2.0, -0.25, 5.0};
  std::vector<double> grad = {1.0, 2.0, 3.0, 4.0, 5.0};
  kernels::relu_backward(pre.data(), grad.data(), pre.size());
  CHECK(grad == std::vector<double>{0.0, 0.0, 3.0, 0.0, 5.0});
}

// Frozen single-step oracle for Adam (lr=0.01, beta1=0.9, beta2=0.999,
// eps=1e-8, step t=3 entering with m=0.1, v=0.2, grad=0.5, param=1.0).
TEST_CASE("kernels: adam_step matches the frozen update") {
  BackendGuard guard;
  kernels::set_backend(kernels::Backend::scalar);
  const double beta1 = 0.9, beta2 = 0.999, lr = 0.01, eps = 1e-8;
  const int t = 3;
  double param = 1.0, grad = 0.5, m = 0.1, v = 0.2;
  const double inv_bias1 = 1.0 / (1.0 - std::pow(beta1, t));
  const double inv_bias2 = 1.0 / (1.0 - std::pow(beta2, t));
  kernels::adam_step(&param, &grad, &m, &v, 1, lr, beta1, beta2, eps,
                     inv_bias1, inv_bias2);
  CHECK(m == doctest::Approx(0.14).epsilon(1e-15));
  CHECK(v == doctest::Approx(0.20005).epsilon(1e-15));
  CHECK(param == doctest::Approx(0.9993676858358368).epsilon(1e-12));
}

TEST_CASE("kernels: matmul variants match naive triple loops") {
  BackendGuard guard;
  kernels::set_backend(kernels::Backend::scalar);
  Rng rng(107);
  const std::size_t dims[][3] = {
      {1, 1, 1}, {2, 3, 4}, {4, 4, 4}, {3, 7, 5}, {8, 16, 4}, {5, 9, 13},
  };
  for (const auto& d : dims) {
    const std::size_t m = d[0], k = d[1], n = d[2];
    const std::vector<double> a = random_vector(rng, m * k);
    const std::vector<double> b = random_vector(rng, k * n);

    std::vector<double> c(m * n, 123.0);
    kernels::matmul(a.data(), b.data(), c.data(), m, k, n);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double ref = 0.0;
        for (std::size_t p = 0; p < k; ++p) ref += a[i * k + p] * b[p * n + j];
        CHECK(close_rel(c[i * n + j], ref, 1e-12));
      }
    }

    // a[m,k]^T * bb[m,n] -> ct[k,n]
    const std::vector<double> bb = random_vector(rng, m * n);
    std::vector<double> ct(k * n, -7.0);
    kernels::matmul_at_b(a.data(), bb.data(), ct.data(), m, k, n);
    for (std::size_t p = 0; p < k; ++p) {
      for (std::size_t j = 0; j < n; ++j) {
        double ref = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          ref += a[i * k + p] * bb[i * n + j];
        }
        CHECK(close_rel(ct[p * n + j], ref, 1e-12));
      }
    }

    // aa[m,n] * b2[k,n]^T -> cb[m,k]
    const std::vector<double> aa = random_vector(rng, m * n);
    const std::vector<double> b2 = random_vector(rng, k * n);
    std::vector<double> cb(m * k, 0.25);
    kernels::matmul_a_bt(aa.data(), b2.data(), cb.data(), m, n, k);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t p = 0; p < k; ++p) {
        double ref = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          ref += aa[i * n + j] * b2[p * n + j];
        }
        CHECK(close_rel(cb[i * k + p], ref, 1e-12));
      }
    }
  }
}

// The core property of the SIMD port: on identical inputs the two backends
// agree to a few ulp for every kernel. Skipped silently on machines without
// AVX2 (the scalar path is then the only implementation).
TEST_CASE("kernels: scalar and avx2 backends are equivalent") {
  if (!kernels::avx2_supported()) return;
  BackendGuard guard;
  Rng rng(109);

  for (std::size_t n : kSizes) {
    const std::vector<double> x = random_vector(rng, n, 3.0);
    const std::vector<double> y = random_vector(rng, n, 0.5);
    std::vector<std::complex<double>> h(n);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
      h[i] = {rng.next_gaussian(), rng.next_gaussian()};
      w[i] = 0.05 + rng.next_double();
    }

    kernels::set_backend(kernels::Backend::scalar);
    const double s_sum = kernels::sum(x.data(), n);
    const double s_sq = kernels::squared_norm(x.data(), n);
    const double s_dot = kernels::dot(x.data(), y.data(), n);
    const double s_max = kernels::max_abs(x.data(), n);
    const double s_min =
        n > 0 ? kernels::min_weighted_abs_squared(h.data(), w.data(), n) : 0.0;

    kernels::set_backend(kernels::Backend::avx2);
    CHECK(close_rel(kernels::sum(x.data(), n), s_sum, 1e-13));
    CHECK(close_rel(kernels::squared_norm(x.data(), n), s_sq, 1e-13));
    CHECK(close_rel(kernels::dot(x.data(), y.data(), n), s_dot, 1e-13));
    CHECK(kernels::max_abs(x.data(), n) == s_max);
    if (n > 0) {
      CHECK(close_rel(kernels::min_weighted_abs_squared(h.data(), w.data(), n),
                      s_min, 1e-13));
    }

    // Elementwise kernels must agree exactly: no reassociation is involved.
    std::vector<double> xs = x, xv = x;
    kernels::set_backend(kernels::Backend::scalar);
    kernels::scale(xs.data(), n, 1.7);
    kernels::set_backend(kernels::Backend::avx2);
    kernels::scale(xv.data(), n, 1.7);
    CHECK(xs == xv);

    std::vector<double> ys = y, yv = y;
    kernels::set_backend(kernels::Backend::scalar);
    kernels::axpy(0.3, x.data(), ys.data(), n);
    kernels::set_backend(kernels::Backend::avx2);
    kernels::axpy(0.3, x.data(), yv.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      // Inputs are O(1) gaussians, so 1e-14 absolute slack is a few ulps of
      // the products being accumulated.
      CHECK(close_mix(ys[i], yv[i], 1e-15, 1e-14));
    }

    std::vector<double> cs = x, cv = x;
    kernels::set_backend(kernels::Backend::scalar);
    kernels::clamp(cs.data(), n, -0.8, 0.8);
    kernels::relu(cs.data(), n);
    kernels::set_backend(kernels::Backend::avx2);
    kernels::clamp(cv.data(), n, -0.8, 0.8);
    kernels::relu(cv.data(), n);
    CHECK(cs == cv);

    std::vector<double> gs = y, gv = y;
    kernels::set_backend(kernels::Backend::scalar);
    kernels::relu_backward(x.data(), gs.data(), n);
    kernels::set_backend(kernels::Backend::avx2);
    kernels::relu_backward(x.data(), gv.data(), n);
    CHECK(gs == gv);

    std::vector<double> ms(n, 0.0), vs(n, 0.0), ps = x, gr = y;
    std::vector<double> mv(n, 0.0), vv(n, 0.0), pv = x;
    kernels::set_backend(kernels::Backend::scalar);
    kernels::adam_step(ps.data(), gr.data(), ms.data(), vs.data(), n, 1e-3,
                       0.9, 0.999, 1e-8, 10.0, 1000.0);
    kernels::set_backend(kernels::Backend::avx2);
    kernels::adam_step(pv.data(), gr.data(), mv.data(), vv.data(), n, 1e-3,
                       0.9, 0.999, 1e-8, 10.0, 1000.0);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(close_rel(ps[i], pv[i], 1e-14));
      CHECK(close_rel(ms[i], mv[i], 1e-15));
      CHECK(close_rel(vs[i], vv[i], 1e-15));
    }
  }

  // Matrix products across ragged shapes.
  const std::size_t dims[][3] = {
      {1, 1, 1}, {2, 3, 4}, {5, 9, 13}, {8, 16, 4}, {16, 33, 7}, {32, 32, 32},
  };
  for (const auto& d : dims) {
    const std::size_t m = d[0], k = d[1], n = d[2];
    const std::vector<double> a = random_vector(rng, m * k);
    const std::vector<double> b = random_vector(rng, k * n);
    const std::vector<double> bb = random_vector(rng, m * n);
    const std::vector<double> b2 = random_vector(rng, k * n);

    std::vector<double> c1(m * n), c2(m * n);
    std::vector<double> t1(k * n), t2(k * n);
    std::vector<double> u1(m * k), u2(m * k);

    kernels::set_backend(kernels::Backend::scalar);
    kernels::matmul(a.data(), b.data(), c1.data(), m, k, n);
    kernels::matmul_at_b(a.data(), bb.data(), t1.data(), m, k, n);
    kernels::matmul_a_bt(bb.data(), b2.data(), u1.data(), m, n, k);

    kernels::set_backend(kernels::Backend::avx2);
    kernels::matmul(a.data(), b.data(), c2.data(), m, k, n);
    kernels::matmul_at_b(a.data(), bb.data(), t2.data(), m, k, n);
    kernels::matmul_a_bt(bb.data(), b2.data(), u2.data(), m, n, k);

    for (std::size_t i = 0; i < c1.size(); ++i) {
      CHECK(close_mix(c1[i], c2[i], 1e-12, 1e-12));
    }
    for (std::size_t i = 0; i < t1.size(); ++i) {
      CHECK(close_mix(t1[i], t2[i], 1e-12, 1e-12));
    }
    for (std::size_t i = 0; i < u1.size(); ++i) {
      CHECK(close_mix(u1[i], u2[i], 1e-12, 1e-12));
    }
  }
}

TEST_CASE("kernels: empty inputs are harmless") {
  BackendGuard guard;
  kernels::set_backend(kernels::Backend::scalar);
  CHECK(kernels::sum(nullptr, 0) == 0.0);
  CHECK(kernels::squared_norm(nullptr, 0) == 0.0);
  CHECK(kernels::dot(nullptr, nullptr, 0) == 0.0);
  CHECK(kernels::max_abs(nullptr, 0) == 0.0);
  kernels::scale(nullptr, 0, 2.0);
  kernels::axpy(1.0, nullptr, nullptr, 0);
  kernels::relu(nullptr, 0);
}

}  // namespace
