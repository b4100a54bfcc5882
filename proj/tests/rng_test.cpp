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

#include "airfed/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include <doctest.h>

namespace {

using namespace airfed;

TEST_CASE("rng: identical seeds replay identical streams") {
  Rng a(12345);
  Rng b(12345);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  Rng c(12345);
  Rng d(12345);
  for (int i = 0; i < 1000; ++i) {
    CHECK(c.next_gaussian() == d.next_gaussian());
  }
}

// Regression freeze: these values pin the generator's exact output stream so
// accidental changes to the seeding or mixing path cannot slip through.  Any
// intentional algorithm change must re-freeze them and is a breaking change
// for every stored scenario result.
TEST_CASE("rng: frozen output stream") {
  Rng r(42);
  CHECK(r.next_u64() == 15021278609987233951ULL);
  CHECK(r.next_u64() == 5881210131331364753ULL);
  CHECK(r.next_u64() == 18149643915985481100ULL);

  Rng d(42);
  CHECK(d.next_double() == 0.81430514512290986);
  CHECK(d.next_double() == 0.31882104006166112);

  Rng g(7);
  CHECK(g.next_gaussian() == 1.1308649617728406);
  CHECK(g.next_gaussian() == 2.1234228511806612);
  CHECK(g.next_gaussian() == -0.73097737981595057);

  CHECK(derive_seed(1, 2, 3, 4) == 4692530696005671549ULL);
  CHECK(derive_seed(1, 2, 3) == 178227681319352057ULL);
}

TEST_CASE("rng: next_double stays in [0, 1)") {
  Rng r(9);
  for (int i = 0; i < 200000; ++i) {
    const double u = r.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("rng: next_double moments match uniform(0, 1)") {
  Rng r(11);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = r.next_double();
    sum += u;
    sumsq += u * u;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  // Standard error of the mean is ~0.00065; allow five of them.
  CHECK(mean == doctest::Approx(0.5).epsilon(0.007));
  CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}

TEST_CASE("rng: next_gaussian moments match standard normal") {
  Rng r(13);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0, sumcube = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = r.next_gaussian();
    CHECK(std::isfinite(g));
    sum += g;
    sumsq += g * g;
    sumcube += g * g * g;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::fabs(mean) < 0.02);
  CHECK(var == doctest::Approx(1.0).epsilon(0.03));
  // Skewness of the normal is zero.
  CHECK(std::fabs(sumcube / n) < 0.05);
}

TEST_CASE("rng: next_below respects the bound and covers the range") {
  Rng r(17);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 5000; ++i) {
    const std::uint64_t v = r.next_below(7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
  // Degenerate bound of one has a single admissible value.
  for (int i = 0; i < 10; ++i) CHECK(r.next_below(1) == 0);
}

TEST_CASE("rng: derive_seed separates streams") {
  // Distinct tags produce distinct child seeds, and the derivation is a pure
  // function of its inputs.
  std::set<std::uint64_t> seeds;
  for (std::uint64_t a = 0; a < 8; ++a) {
    for (std::uint64_t b = 0; b < 8; ++b) {
      seeds.insert(derive_seed(99, a, b));
    }
  }
  CHECK(seeds.size() == 64);
  CHECK(derive_seed(99, 3, 4) == derive_seed(99, 3, 4));
  CHECK(derive_seed(99, 3, 4) != derive_seed(100, 3, 4));
  CHECK(derive_seed(99, 3, 4) != derive_seed(99, 4, 3));
  CHECK(derive_seed(99, 3, 4, 5) != derive_seed(99, 3, 4, 6));
}

TEST_CASE("rng: derived streams look independent") {
  // Correlation between two sibling streams should be at noise level.
  Rng a(derive_seed(1, 101));
  Rng b(derive_seed(1, 102));
  const int n = 50000;
  double dot = 0.0;
  for (int i = 0; i < n; ++i) dot += a.next_gaussian() * b.next_gaussian();
  CHECK(std::fabs(dot / n) < 0.02);
}

TEST_CASE("rng: shuffle_indices yields a uniform-looking permutation") {
  const std::uint32_t n = 257;
  std::vector<std::uint32_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0u);
  Rng r(23);
  shuffle_indices(idx.data(), n, r);

  // Still a permutation of 0..n-1.
  std::vector<std::uint32_t> sorted = idx;
  std::sort(sorted.begin(), sorted.end());
  for (std::uint32_t i = 0; i < n; ++i) CHECK(sorted[i] == i);

  // Deterministic under the same seed, different under another.
  std::vector<std::uint32_t> again(n);
  std::iota(again.begin(), again.end(), 0u);
  Rng r2(23);
  shuffle_indices(again.data(), n, r2);
  CHECK(again == idx);

  std::vector<std::uint32_t> other(n);
  std::iota(other.begin(), other.end(), 0u);
  Rng r3(24);
  shuffle_indices(other.data(), n, r3);
  CHECK(other != idx);

  // Position bias check: the average displacement of a Fisher-Yates shuffle
  // leaves each slot's expected value at (n-1)/2.
  Rng r4(29);
  std::vector<double> slot_mean(8, 0.0);
  const int reps = 4000;
  std::vector<std::uint32_t> work(n);
  for (int rep = 0; rep < reps; ++rep) {
    std::iota(work.begin(), work.end(), 0u);
    shuffle_indices(work.data(), n, r4);
    for (int s = 0; s < 8; ++s) slot_mean[s] += work[s];
  }
  for (int s = 0; s < 8; ++s) {
    CHECK(slot_mean[s] / reps == doctest::Approx((n - 1) / 2.0).epsilon(0.05));
  }
}

}  // namespace
