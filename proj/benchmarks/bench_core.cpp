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

#include <benchmark/benchmark.h>

#include <cstddef>

#include "qsld/autoparallel.hpp"
#include "qsld/catalog.hpp"
#include "qsld/estimation.hpp"
#include "qsld/hermitian.hpp"
#include "qsld/model.hpp"
#include "qsld/random.hpp"

namespace {

using namespace qsld;

void BM_SolveSld(benchmark::State &state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    CounterRng rng(1);
    const DensityOperator rho = random_state(d, rng);
    HermitianOperator x = random_hermitian(d, rng);
    x = x.shifted(-x.trace() / static_cast<double>(d));
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_sld(rho, x));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveSld)->RangeMultiplier(2)->Range(2, 64)->Complexity(benchmark::oNCubed);

void BM_FisherMatrix(benchmark::State &state) {
    const ParametricModel m = make_model("full(d=" + std::to_string(state.range(0)) + ")");
    const RVector xi = domain_center(m);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fisher_matrix(m, xi));
    }
}
BENCHMARK(BM_FisherMatrix)->DenseRange(2, 5);

void BM_CovariantDerivative(benchmark::State &state) {
    const ParametricModel m = make_model("bloch-full");
    const RVector xi = domain_center(m);
    for (auto _ : state) {
        benchmark::DoNotOptimize(e_covariant_derivative(m, xi, 0, 1));
    }
}
BENCHMARK(BM_CovariantDerivative);

void BM_Involutivity(benchmark::State &state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    const OperatorSubspace s = real_subspace(CMatrix::Identity(static_cast<Eigen::Index>(d),
                                                               static_cast<Eigen::Index>(d)));
    const auto states = default_state_sample(d, 10, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(involutivity_check(s, states, 1e-10));
    }
}
BENCHMARK(BM_Involutivity)->DenseRange(2, 5);

void BM_CheckAutoparallel(benchmark::State &state) {
    const ParametricModel m = make_model("bloch-ellipsoid(c=0.3)");
    const auto grid = domain_grid(m, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(check_e_autoparallel_m_affine(m, grid, 1e-8));
    }
}
BENCHMARK(BM_CheckAutoparallel)->Arg(3)->Arg(6)->Arg(12);

void BM_MonteCarloMoments(benchmark::State &state) {
    const RMatrix u = RMatrix::Identity(2, 2);
    const DiscreteEstimator pi = filtration_estimator(u, {pauli(0), pauli(1)}, 0.05);
    const ParametricModel m = make_model("bloch-ellipsoid(c=0.3)");
    const RVector xi = domain_center(m);
    const DensityOperator rho = m.state(xi);
    const auto shots = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(monte_carlo_moments(rho, pi, shots, 3, xi));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarloMoments)->Arg(10000)->Arg(100000);

} // namespace
BENCHMARK_MAIN();
