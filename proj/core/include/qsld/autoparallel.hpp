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
 * Deciders and constructors for e-autoparallel submanifolds.
 *
 * All verdicts here are evidence gathered on finite samples (a coordinate
 * grid or a set of states) at an explicit tolerance, not proofs: the
 * underlying conditions quantify over every point of a manifold.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "qsld/hermitian.hpp"
#include "qsld/model.hpp"
#include "qsld/subspace.hpp"

namespace qsld {

/// Observables F^i with sum_j g^{ij} L_j = F^i - xi^i I on every grid point,
/// up to max_residual in HS norm.
struct AutoparallelCertificate {
    std::vector<HermitianOperator> observables;
    double max_residual = 0.0;
    std::vector<RVector> grid;
};

/// The pair of grid points where the candidate F^component drifts most.
struct AutoparallelWitness {
    std::size_t component;
    RVector xi_a;
    RVector xi_b;
    double distance;
};

struct AutoparallelVerdict {
    bool verdict;
    double max_pairwise; ///< max over i and grid pairs of |F^i(a) - F^i(b)|_HS
    double tol;
    AutoparallelCertificate certificate; ///< grid-averaged F^i
    std::optional<AutoparallelWitness> witness;
};

/// Tests whether the model is e-autoparallel with m-affine coordinates:
/// F^i(xi) := L^i_xi + xi^i I must not depend on xi. Needs |grid| >= 2.
AutoparallelVerdict check_e_autoparallel_m_affine(const ParametricModel &model,
                                                  const std::vector<RVector> &grid, double tol);

struct InvolutivityWitness {
    std::size_t state_index;
    std::size_t a;
    std::size_t b;
    double residual;
};

struct InvolutivityResult {
    bool involutive;
    double worst_residual; ///< relative: |C - P(C)| / max(1, |C|)
    double tol;
    std::size_t states_checked;
    std::optional<InvolutivityWitness> witness;
};

/// Checks {[[A,B],rho]} within {rho o C : C in A + R} on each supplied
/// state, via C = solve_sld(rho, [[A_a, A_b], rho]) for basis pairs.
InvolutivityResult involutivity_check(const OperatorSubspace &subspace,
                                      const std::vector<DensityOperator> &states, double tol);

/// The default state sample for involutivity checks: `count` random states
/// from the Hilbert-Schmidt ball with spectrum shifted to stay positive.
std::vector<DensityOperator> default_state_sample(std::size_t dim, std::size_t count = 20,
                                                  std::uint64_t seed = 20240601);

/// exp[(sum theta_i F^i - psi)/2] P exp[(...)/2] with psi fixing unit trace.
/// The F^i must commute (max commutator norm <= 1e-10).
DensityOperator quasi_exponential_state(const DensityOperator &p,
                                        const std::vector<HermitianOperator> &f,
                                        const RVector &theta);

/// Quasi-classical exponential family in its expectation coordinates
/// xi^i = <F^i>, the natural parameters recovered by Newton's method.
class QuasiExponentialFamily {
  public:
    QuasiExponentialFamily(DensityOperator p, std::vector<HermitianOperator> f);

    [[nodiscard]] std::size_t n() const noexcept { return f_.size(); }
    [[nodiscard]] const std::vector<HermitianOperator> &observables() const noexcept { return f_; }
    [[nodiscard]] const DensityOperator &reference() const noexcept { return p_; }

    [[nodiscard]] DensityOperator state_at_theta(const RVector &theta) const;
    [[nodiscard]] RVector expectation_at_theta(const RVector &theta) const;
    /// d xi / d theta, the covariance matrix of the F^i.
    [[nodiscard]] RMatrix jacobian_at_theta(const RVector &theta) const;
    /// Inverse of the expectation map; throws OutsideDomain if Newton fails.
    [[nodiscard]] RVector theta_from_expectation(const RVector &xi) const;

    /// The family as a model in expectation coordinates, analytic partials.
    [[nodiscard]] ParametricModel model(std::vector<Interval> domain, std::string name) const;

  private:
    DensityOperator p_;
    std::vector<HermitianOperator> f_;
};

/// L_h^B: real span of |b_i><b_j| + |b_j><b_i| (i <= j) for the columns b
/// of the unitary `basis`. Dimension d(d+1)/2, contains I.
OperatorSubspace real_subspace(const CMatrix &basis);

struct Counterexample {
    double residual; ///< min over real symmetric C of |rho o C - [[A,B],rho]|_HS
    HermitianOperator a;
    HermitianOperator b;
    DensityOperator rho;
};

/// The block construction showing L_h^B is not involutive for d >= 3.
Counterexample counterexample_dim_ge3(double eps, std::size_t dim);

struct ParallelFieldDimension {
    std::size_t dimension;
    bool upper_bound_only; ///< fewer than three samples
    double smallest_kept;
    double largest_null;
};

/// dim of {F in L_h : F - <F>_rho in span{L_i(rho)} at every sample} / R.
ParallelFieldDimension parallel_field_dimension(const ParametricModel &model,
                                                const std::vector<RVector> &samples,
                                                double tol = 1e-8);

} // namespace qsld
