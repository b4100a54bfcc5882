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

#ifndef AIRFED_RNG_HPP_
#define AIRFED_RNG_HPP_

#include <cstdint>
#include <cstddef>

namespace airfed {

// Deterministic random source. xoshiro256++ seeded through splitmix64, with
// Gaussian variates generated by an explicit Box-Muller transform.
//
// The standard <random> distributions are implementation-defined, so two
// standard libraries fed the same engine produce different streams. Every
// simulator output here must be bit-reproducible from a seed across
// platforms, which forces the generator and the distributions to be spelled
// out in full.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Uniform on the full 64-bit range.
  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random mantissa bits.
  double next_double();

  // Standard normal. Box-Muller produces pairs; the spare is cached, so
  // draws alternate between computing a fresh pair and returning the spare.
  double next_gaussian();

  // Uniform on [0, n) without modulo bias (rejection sampling). n must be
  // nonzero.
  std::uint64_t next_below(std::uint64_t n);

 private:
  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Stateless seed derivation: hashes (master, a, b, c) into a child seed.
// Parallel and sequential consumers that derive their own child seeds by
// index get identical streams regardless of scheduling, which is what makes
// Monte Carlo results independent of worker count.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                          std::uint64_t b = 0, std::uint64_t c = 0);

// Fisher-Yates shuffle of indices [0, n) stored in `idx`, driven by `rng`.
void shuffle_indices(std::uint32_t* idx, std::size_t n, Rng& rng);

}  // namespace airfed

#endif  // AIRFED_RNG_HPP_
