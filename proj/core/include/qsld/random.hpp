// Copyright 2026 The qsld Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>

#include "qsld/hermitian.hpp"

namespace qsld {

/// Counter-based 64-bit generator: draw k of stream s under seed is a pure
/// function of (seed, s, k), so sharded sampling is reproducible no matter
/// how shards are scheduled.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

    std::uint64_t next_u64() noexcept;
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Standard normal (Box-Muller, both halves used).
    double normal() noexcept;

    [[nodiscard]] std::uint64_t counter() const noexcept { return counter_; }

    /// Independent stream derived from this generator's seed.
    [[nodiscard]] CounterRng substream(std::uint64_t index) const noexcept;

  private:
    std::uint64_t seed_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Hermitian matrix with i.i.d. Gaussian entries (GUE-like), unnormalized.
HermitianOperator random_hermitian(std::size_t dim, CounterRng &rng);

/// Random strictly positive state: a point drawn from the Hilbert-Schmidt
/// ball, with its spectrum shifted up so that the minimum eigenvalue is at
/// least `min_eig`.
DensityOperator random_state(std::size_t dim, CounterRng &rng, double min_eig = 1e-2);

/// Haar-ish random unitary from the QR decomposition of a Ginibre matrix.
CMatrix random_unitary(std::size_t dim, CounterRng &rng);

RVector random_unit_vector(std::size_t dim, CounterRng &rng);

} // namespace qsld
