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

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace airfed {
namespace {

inline std::uint64_t splitmix64_next(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
  // Expand the 64-bit seed into 256 bits of state. splitmix64 guarantees the
  // state is never all-zero for any seed.
  std::uint64_t s = seed;
  for (auto& word : state_) word = splitmix64_next(s);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 is drawn from (0, 1] so the log never sees zero.
  const double u1 =
      (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = next_double();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t Rng::next_below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::next_below: n must be > 0");
  // Rejection sampling over the largest multiple of n below 2^64.
  const std::uint64_t limit = (0 - n) % n;  // == 2^64 mod n
  std::uint64_t draw;
  do {
    draw = next_u64();
  } while (draw < limit);
  return draw % n;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                          std::uint64_t b, std::uint64_t c) {
  // Feed each component through splitmix64 with distinct round constants, so
  // (master, a, b, c) tuples that differ in any position give unrelated
  // child streams.
  std::uint64_t x = master ^ 0x6a09e667f3bcc908ULL;
  std::uint64_t h = splitmix64_next(x);
  x ^= a + 0xbb67ae8584caa73bULL + (h << 6) + (h >> 2);
  h ^= splitmix64_next(x);
  x ^= b + 0x3c6ef372fe94f82bULL + (h << 6) + (h >> 2);
  h ^= splitmix64_next(x);
  x ^= c + 0xa54ff53a5f1d36f1ULL + (h << 6) + (h >> 2);
  h ^= splitmix64_next(x);
  return h;
}

void shuffle_indices(std::uint32_t* idx, std::size_t n, Rng& rng) {
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    const std::uint32_t tmp = idx[i - 1];
    idx[i - 1] = idx[j];
    idx[j] = tmp;
  }
}

}  // namespace airfed
