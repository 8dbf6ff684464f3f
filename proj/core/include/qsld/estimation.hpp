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

/**
 * @file
 * POVM estimators, their moments, local unbiasedness and the SLD
 * Cramer-Rao machinery, plus the randomized and filtration constructions
 * that attain the bound.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "qsld/hermitian.hpp"
#include "qsld/model.hpp"
#include "qsld/random.hpp"

namespace qsld {

inline constexpr double kPovmCompletenessTol = 1e-10;
inline constexpr double kPovmPositivityTol = 1e-12;

/// A finite POVM with a value vector attached to every outcome.
class DiscreteEstimator {
  public:
    DiscreteEstimator(std::vector<HermitianOperator> elements, std::vector<RVector> values);

    [[nodiscard]] std::size_t size() const noexcept { return elements_.size(); }
    [[nodiscard]] std::size_t dim() const noexcept { return elements_.front().dim(); }
    [[nodiscard]] std::size_t n() const noexcept {
        return static_cast<std::size_t>(values_.front().size());
    }
    [[nodiscard]] const std::vector<HermitianOperator> &elements() const noexcept {
        return elements_;
    }
    [[nodiscard]] const std::vector<RVector> &values() const noexcept { return values_; }

    /// A^i = sum_w f^i(w) pi_w
    [[nodiscard]] std::vector<HermitianOperator> observables() const;

  private:
    std::vector<HermitianOperator> elements_;
    std::vector<RVector> values_;
};

/// Tr(rho pi_w); tiny negatives down to -1e-12 are clamped to zero.
RVector outcome_probabilities(const DensityOperator &rho, const DiscreteEstimator &pi);

struct Moments {
    RVector mean;
    RMatrix mse; ///< sum_w (f - xi)(f - xi)^T p_w
};

Moments estimator_moments(const DensityOperator &rho, const DiscreteEstimator &pi,
                          const RVector &xi_true);

struct UnbiasednessResidual {
    double mean;       ///< max_i |<A^i> - xi^i|
    double derivative; ///< max_ij |<A^i, L_j> - delta_ij|
};

UnbiasednessResidual local_unbiasedness_residual(const ParametricModel &model, const RVector &xi,
                                                 const DiscreteEstimator &pi);

bool check_locally_unbiased(const ParametricModel &model, const RVector &xi,
                            const DiscreteEstimator &pi, double tol);

/// V - G^{-1}; throws NotLocallyUnbiased when the residual exceeds `tol`.
RMatrix cr_gap(const ParametricModel &model, const RVector &xi, const DiscreteEstimator &pi,
               double tol = 1e-8);

/// Randomized estimator: pick k with probability p_k, measure
/// X^k = sum_i u^k_i L^i and report f^i = gamma_k^i + (w^i_k / p_k) x,
/// with W = U^{-1}. `gamma(k, i)` must satisfy sum_k p_k gamma_k^i = xi^i.
DiscreteEstimator build_local_random_estimator(const ParametricModel &model, const RVector &xi,
                                               const RMatrix &u_basis, const RVector &probs,
                                               const RMatrix &gamma);

/// (1/p_k) u^kT G^{-1} u^k + sum_l p_l (a_l^k)^2 with
/// a_l^k = sum_i u^k_i (gamma_l^i - xi^i).
double local_random_variance(const FisherMatrix &g, const RVector &xi, const RMatrix &u_basis,
                             const RVector &probs, const RMatrix &gamma, std::size_t k);

struct FiltrationSpec {
    /// Optional; when set, F_ops are checked against its dimensions.
    std::shared_ptr<const ParametricModel> model;
    RMatrix u_basis; ///< rows u^k
    std::vector<HermitianOperator> f_ops;
    std::vector<double> eps_schedule = {0.2, 0.1, 0.05, 0.02, 0.01};

    void validate() const;
};

/// Probabilities p_1 = 1 - eps, the rest split evenly. For n = 1 the single
/// direction carries all the mass.
RVector filtration_probabilities(std::size_t n, double eps);

/// One state-independent estimator per eps in the schedule.
std::vector<DiscreteEstimator> build_filtration(const FiltrationSpec &spec);

DiscreteEstimator filtration_estimator(const RMatrix &u_basis,
                                       const std::vector<HermitianOperator> &f_ops, double eps);

/// u^T G^{-1} u / (1 - eps) + eps / (1 - eps) (sum_i u_i xi^i)^2
double filtration_variance(const FisherMatrix &g, const RVector &xi, const RVector &u, double eps);

/// F = f I + sum_i (d_i f) L^i, whose spectral measure estimates f
/// efficiently at xi.
HermitianOperator scalar_efficient_estimator(const ParametricModel &model, const RVector &xi,
                                             double f_value, const RVector &grad_f);

/// sum_ij g^{ij} d_i f d_j f
double scalar_cr_bound(const ParametricModel &model, const RVector &xi, const RVector &grad_f);

std::size_t efficient_function_space_dim(const ParametricModel &model,
                                         const std::vector<RVector> &samples, double tol = 1e-8);

struct MonteCarloMoments {
    RVector mean;
    RMatrix mse;
    RVector stderr_mean;
    RMatrix stderr_mse;
    std::vector<std::uint64_t> counts; ///< per outcome
    std::uint64_t shots;
    std::uint64_t seed;
};

/// Samples `shots` outcomes with probability Tr(rho pi_w). Shots are split
/// into fixed-size shards, each drawn from its own counter substream, so the
/// result depends only on (seed, shots).
MonteCarloMoments monte_carlo_moments(const DensityOperator &rho, const DiscreteEstimator &pi,
                                      std::uint64_t shots, std::uint64_t seed,
                                      const RVector &xi_true);

struct ScalarEstimate {
    double value;
    double std_error;
};

/// Sample mean and standard error of (u . (f - xi))^2 from outcome counts.
ScalarEstimate quadratic_form_estimate(const DiscreteEstimator &pi,
                                       const std::vector<std::uint64_t> &counts,
                                       const RVector &xi_true, const RVector &u);

/// Random POVM with `outcomes` elements and values chosen so the estimator
/// is locally unbiased at xi: min-norm solution of the linear constraints
/// plus a random null-space component.
DiscreteEstimator random_locally_unbiased_estimator(const ParametricModel &model,
                                                    const RVector &xi, CounterRng &rng,
                                                    std::size_t outcomes = 6,
                                                    double spread = 0.5);

/// Random POVM with `outcomes` full-rank elements.
std::vector<HermitianOperator> random_povm(std::size_t dim, std::size_t outcomes, CounterRng &rng);

} // namespace qsld
