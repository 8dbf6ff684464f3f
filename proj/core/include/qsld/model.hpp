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
 * Parametric models xi -> rho_xi, tangent vectors in their m- and
 * e-representations, the SLD Fisher metric, e/m parallel transport, the
 * e-covariant derivative, the SLD torsion and exact e-geodesics.
 */

#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qsld/hermitian.hpp"

namespace qsld {

struct Interval {
    double lo;
    double hi;
};

class ParametricModel {
  public:
    using StateFn = std::function<DensityOperator(const RVector &)>;
    using PartialsFn = std::function<std::vector<HermitianOperator>(const RVector &)>;

    static constexpr double kDefaultFdStep = 1e-5;

    /// `partials` may be empty, in which case central finite differences
    /// with step fd_step * max(1, |xi_i|) are used. Both callbacks must be
    /// reentrant.
    ParametricModel(std::size_t hilbert_dim, std::vector<Interval> domain, StateFn state,
                    PartialsFn partials = {}, std::string name = {});

    [[nodiscard]] std::size_t n() const noexcept { return domain_.size(); }
    [[nodiscard]] std::size_t hilbert_dim() const noexcept { return hilbert_dim_; }
    [[nodiscard]] const std::vector<Interval> &domain() const noexcept { return domain_; }
    [[nodiscard]] const std::string &name() const noexcept { return name_; }
    [[nodiscard]] bool has_analytic_partials() const noexcept { return static_cast<bool>(partials_); }
    [[nodiscard]] double fd_step() const noexcept { return fd_step_; }

    /// Copy of this model using the given finite-difference step.
    [[nodiscard]] ParametricModel with_fd_step(double h) const;
    /// Copy of this model with the analytic partials dropped.
    [[nodiscard]] ParametricModel finite_difference_only() const;

    [[nodiscard]] bool contains(const RVector &xi) const noexcept;
    [[nodiscard]] double distance_to_boundary(const RVector &xi) const noexcept;

    /// rho_xi; throws OutsideDomain when xi is not in the open box.
    [[nodiscard]] DensityOperator state(const RVector &xi) const;

    /// d rho / d xi^i, i = 1..n, projected onto traceless operators after
    /// the tracelessness check (1e-8 for finite differences, 1e-12 analytic).
    [[nodiscard]] std::vector<HermitianOperator> partials(const RVector &xi) const;

  private:
    std::size_t hilbert_dim_;
    std::vector<Interval> domain_;
    StateFn state_;
    PartialsFn partials_;
    std::string name_;
    double fd_step_ = kDefaultFdStep;
};

/// A tangent vector of S at `base`, stored in both representations:
/// m_rep (traceless) and sld, related by base o sld = m_rep.
class TangentVector {
  public:
    /// Requires |Tr m_rep| <= tol * max(1, |m_rep|).
    static TangentVector from_m_rep(std::shared_ptr<const DensityOperator> base,
                                    HermitianOperator m_rep, double tol = 1e-10);
    /// Requires |<sld>_base| <= tol * max(1, |sld|).
    static TangentVector from_sld(std::shared_ptr<const DensityOperator> base,
                                  HermitianOperator sld, double tol = 1e-9);

    [[nodiscard]] const DensityOperator &base() const noexcept { return *base_; }
    [[nodiscard]] const std::shared_ptr<const DensityOperator> &base_ptr() const noexcept {
        return base_;
    }
    [[nodiscard]] const HermitianOperator &m_rep() const noexcept { return m_rep_; }
    [[nodiscard]] const HermitianOperator &sld() const noexcept { return sld_; }

  private:
    TangentVector(std::shared_ptr<const DensityOperator> base, HermitianOperator m_rep,
                  HermitianOperator sld)
        : base_(std::move(base)), m_rep_(std::move(m_rep)), sld_(std::move(sld)) {}

    std::shared_ptr<const DensityOperator> base_;
    HermitianOperator m_rep_;
    HermitianOperator sld_;
};

/// g(X, Y) = <L_X, L_Y>_rho
double metric(const TangentVector &x, const TangentVector &y);

class FisherMatrix {
  public:
    /// Symmetrizes; throws SingularModel unless every eigenvalue exceeds
    /// 1e-12 * max(1, largest eigenvalue).
    explicit FisherMatrix(const RMatrix &g);

    [[nodiscard]] const RMatrix &matrix() const noexcept { return g_; }
    [[nodiscard]] const RMatrix &inverse() const noexcept { return inv_; }
    [[nodiscard]] std::size_t n() const noexcept { return static_cast<std::size_t>(g_.rows()); }

  private:
    RMatrix g_;
    RMatrix inv_;
};

/// Everything the estimation and autoparallel modules need at one point.
struct PointGeometry {
    RVector xi;
    std::shared_ptr<const DensityOperator> state;
    std::vector<TangentVector> tangents; ///< coordinate fields d_i
    FisherMatrix fisher;
    std::vector<HermitianOperator> dual_slds; ///< L^i = sum_j g^{ij} L_j
};

PointGeometry evaluate(const ParametricModel &model, const RVector &xi);

std::vector<TangentVector> tangent_basis(const ParametricModel &model, const RVector &xi);
FisherMatrix fisher_matrix(const ParametricModel &model, const RVector &xi);

/// Parallel transport for the e-connection: L -> L - <L>_sigma.
TangentVector e_transport(const TangentVector &x, std::shared_ptr<const DensityOperator> sigma);
/// Parallel transport for the m-connection: constant m-representation.
TangentVector m_transport(const TangentVector &x, std::shared_ptr<const DensityOperator> sigma);

/// nabla^e_{d_i} d_j at rho_xi as a tangent vector of S, with
/// sld = d_i L_j + g_ij I. d_i L_j is a Richardson-extrapolated central
/// difference with step h_cov * max(1, |xi_i|), shrunk to fit the domain.
TangentVector e_covariant_derivative(const ParametricModel &model, const RVector &xi,
                                     std::size_t i, std::size_t j, double h_cov = 1e-4);

/// SLD torsion: m_rep = [[L_X, L_Y], rho] / 4.
TangentVector torsion(std::shared_ptr<const DensityOperator> rho, const TangentVector &x,
                      const TangentVector &y);

/// exp(theta F / 2) rho0 exp(theta F / 2) / Z_theta. Throws Overflow when
/// |theta| * |F|_op > 700.
DensityOperator e_geodesic(const DensityOperator &rho0, const HermitianOperator &f, double theta);

/// True when F is a multiple of I, i.e. the e-geodesic is constant.
bool geodesic_is_constant(const HermitianOperator &f);

/// Model xi -> rho_xi^{(x)N} with partials lifted from the base model.
ParametricModel iid_extension(const ParametricModel &model, int copies);

} // namespace qsld
