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

#include "qsld/random.hpp"

#include <cmath>
#include <numbers>

namespace qsld {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
} // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : seed_(seed), key_(mix64(seed ^ mix64(stream + kGolden))) {}

std::uint64_t CounterRng::next_u64() noexcept {
    const std::uint64_t c = counter_++;
    return mix64(key_ + c * kGolden);
}

double CounterRng::uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) {
        u1 = uniform();
    }
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
}

CounterRng CounterRng::substream(std::uint64_t index) const noexcept {
    return CounterRng(seed_, mix64(key_ ^ mix64(index)));
}

HermitianOperator random_hermitian(std::size_t dim, CounterRng &rng) {
    const auto d = static_cast<Eigen::Index>(dim);
    CMatrix m(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index k = 0; k < d; ++k) {
            const double re = rng.normal();
            const double im = rng.normal();
            m(j, k) = Complex(re, im);
        }
    }
    return HermitianOperator(m);
}

DensityOperator random_state(std::size_t dim, CounterRng &rng, double min_eig) {
    const double d = static_cast<double>(dim);
    // Direction uniform on the traceless sphere, radius uniform in the HS ball.
    HermitianOperator h = random_hermitian(dim, rng);
    h = h.shifted(-h.trace() / d);
    const double norm = h.hs_norm();
    const double radius = std::pow(rng.uniform(), 1.0 / (d * d - 1.0));
    HermitianOperator x = HermitianOperator::identity(dim) * (1.0 / d) +
                          h * (radius * std::sqrt(1.0 - 1.0 / d) / norm);
    auto es = eigh(x);
    const double lo = es.values.minCoeff();
    if (lo < min_eig) {
        // Shift the spectrum so the minimum eigenvalue becomes min_eig, then renormalize.
        x = x.shifted(min_eig - lo);
    }
    return DensityOperator::normalized(x);
}

CMatrix random_unitary(std::size_t dim, CounterRng &rng) {
    const auto d = static_cast<Eigen::Index>(dim);
    CMatrix g(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index k = 0; k < d; ++k) {
            const double re = rng.normal();
            const double im = rng.normal();
            g(j, k) = Complex(re, im);
        }
    }
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < d; ++j) {
        const Complex rjj = r(j, j);
        if (std::abs(rjj) > 0.0) {
            q.col(j) *= rjj / std::abs(rjj);
        }
    }
    return q;
}

RVector random_unit_vector(std::size_t dim, CounterRng &rng) {
    RVector v(static_cast<Eigen::Index>(dim));
    do {
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            v[i] = rng.normal();
        }
    } while (v.norm() < 1e-12);
    return v / v.norm();
}

} // namespace qsld
