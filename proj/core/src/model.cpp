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

#include "qsld/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qsld/error.hpp"

namespace qsld {

ParametricModel::ParametricModel(std::size_t hilbert_dim, std::vector<Interval> domain,
                                 StateFn state, PartialsFn partials, std::string name)
    : hilbert_dim_(hilbert_dim), domain_(std::move(domain)), state_(std::move(state)),
      partials_(std::move(partials)), name_(std::move(name)) {
    if (domain_.empty()) {
        throw Error(ErrorKind::InvalidArgument, "model needs at least one parameter");
    }
    for (const auto &iv : domain_) {
        if (!(iv.lo < iv.hi)) {
            throw Error(ErrorKind::InvalidArgument, "empty domain interval");
        }
    }
    if (!state_) {
        throw Error(ErrorKind::InvalidArgument, "model needs a state function");
    }
}

ParametricModel ParametricModel::with_fd_step(double h) const {
    if (!(h > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "finite-difference step must be positive");
    }
    ParametricModel copy = *this;
    copy.fd_step_ = h;
    return copy;
}

ParametricModel ParametricModel::finite_difference_only() const {
    ParametricModel copy = *this;
    copy.partials_ = {};
    return copy;
}

bool ParametricModel::contains(const RVector &xi) const noexcept {
    if (static_cast<std::size_t>(xi.size()) != n()) {
        return false;
    }
    for (std::size_t i = 0; i < n(); ++i) {
        const double x = xi[static_cast<Eigen::Index>(i)];
        if (!(x > domain_[i].lo && x < domain_[i].hi)) {
            return false;
        }
    }
    return true;
}

double ParametricModel::distance_to_boundary(const RVector &xi) const noexcept {
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n(); ++i) {
        const double x = xi[static_cast<Eigen::Index>(i)];
        dist = std::min({dist, x - domain_[i].lo, domain_[i].hi - x});
    }
    return dist;
}

DensityOperator ParametricModel::state(const RVector &xi) const {
    if (!contains(xi)) {
        throw Error(ErrorKind::OutsideDomain, "parameter outside the model domain");
    }
    DensityOperator rho = state_(xi);
    detail::require_same_dim(rho.dim(), hilbert_dim_, "ParametricModel::state");
    return rho;
}

std::vector<HermitianOperator> ParametricModel::partials(const RVector &xi) const {
    if (!contains(xi)) {
        throw Error(ErrorKind::OutsideDomain, "parameter outside the model domain");
    }
    std::vector<HermitianOperator> out;
    double tol = 1e-12;
    if (partials_) {
        out = partials_(xi);
        if (out.size() != n()) {
            throw Error(ErrorKind::DimensionMismatch, "analytic partials: wrong count");
        }
    } else {
        tol = 1e-8;
        out.reserve(n());
        for (std::size_t i = 0; i < n(); ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            const double h = fd_step_ * std::max(1.0, std::abs(xi[ii]));
            RVector plus = xi;
            RVector minus = xi;
            plus[ii] += h;
            minus[ii] -= h;
            if (!contains(plus) || !contains(minus)) {
                throw Error(ErrorKind::OutsideDomain,
                            "finite-difference stencil leaves the domain");
            }
            const DensityOperator rp = state_(plus);
            const DensityOperator rm = state_(minus);
            out.push_back((rp.op() - rm.op()) * (1.0 / (2.0 * h)));
        }
    }
    const double d = static_cast<double>(hilbert_dim_);
    for (auto &p : out) {
        detail::require_same_dim(p.dim(), hilbert_dim_, "ParametricModel::partials");
        const double tr = p.trace();
        if (std::abs(tr) > tol * std::max(1.0, p.hs_norm())) {
            throw Error(ErrorKind::InvalidArgument,
                        "state derivative is not traceless: " + std::to_string(tr));
        }
        p = p.shifted(-tr / d);
    }
    return out;
}

TangentVector TangentVector::from_m_rep(std::shared_ptr<const DensityOperator> base,
                                        HermitianOperator m_rep, double tol) {
    detail::require_same_dim(base->dim(), m_rep.dim(), "TangentVector");
    if (std::abs(m_rep.trace()) > tol * std::max(1.0, m_rep.hs_norm())) {
        throw Error(ErrorKind::InvalidArgument, "m-representation must be traceless");
    }
    HermitianOperator sld = solve_sld(*base, m_rep);
    return TangentVector(std::move(base), std::move(m_rep), std::move(sld));
}

TangentVector TangentVector::from_sld(std::shared_ptr<const DensityOperator> base,
                                      HermitianOperator sld, double tol) {
    detail::require_same_dim(base->dim(), sld.dim(), "TangentVector");
    if (std::abs(expectation(*base, sld)) > tol * std::max(1.0, sld.hs_norm())) {
        throw Error(ErrorKind::InvalidArgument, "SLD must have zero expectation");
    }
    HermitianOperator m = rho_sym(*base, sld);
    return TangentVector(std::move(base), std::move(m), std::move(sld));
}

double metric(const TangentVector &x, const TangentVector &y) {
    return hs_inner(x.m_rep(), y.sld());
}

FisherMatrix::FisherMatrix(const RMatrix &g) {
    if (g.rows() != g.cols() || g.rows() == 0) {
        throw Error(ErrorKind::DimensionMismatch, "Fisher matrix must be square");
    }
    g_ = 0.5 * (g + g.transpose());
    Eigen::SelfAdjointEigenSolver<RMatrix> es(g_);
    const double top = std::max(1.0, es.eigenvalues().maxCoeff());
    if (!(es.eigenvalues().minCoeff() > 1e-12 * top)) {
        throw Error(ErrorKind::SingularModel,
                    "Fisher matrix is singular (min eigenvalue " +
                        std::to_string(es.eigenvalues().minCoeff()) + ")");
    }
    inv_ = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
           es.eigenvectors().transpose();
    inv_ = 0.5 * (inv_ + inv_.transpose());
}

namespace {

FisherMatrix gram(const std::vector<TangentVector> &t) {
    const auto n = static_cast<Eigen::Index>(t.size());
    RMatrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            g(i, j) = metric(t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>(j)]);
            g(j, i) = g(i, j);
        }
    }
    return FisherMatrix(g);
}

std::vector<TangentVector> basis_at(const ParametricModel &model, const RVector &xi,
                                    std::shared_ptr<const DensityOperator> rho) {
    std::vector<TangentVector> out;
    out.reserve(model.n());
    for (auto &p : model.partials(xi)) {
        out.push_back(TangentVector::from_m_rep(rho, std::move(p)));
    }
    return out;
}

} // namespace

PointGeometry evaluate(const ParametricModel &model, const RVector &xi) {
    auto rho = std::make_shared<const DensityOperator>(model.state(xi));
    auto tangents = basis_at(model, xi, rho);
    FisherMatrix fisher = gram(tangents);
    std::vector<HermitianOperator> dual;
    dual.reserve(model.n());
    for (std::size_t i = 0; i < model.n(); ++i) {
        HermitianOperator acc = HermitianOperator::zero(model.hilbert_dim());
        for (std::size_t j = 0; j < model.n(); ++j) {
            acc += tangents[j].sld() *
                   fisher.inverse()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
        dual.push_back(std::move(acc));
    }
    return {xi, std::move(rho), std::move(tangents), std::move(fisher), std::move(dual)};
}

std::vector<TangentVector> tangent_basis(const ParametricModel &model, const RVector &xi) {
    auto rho = std::make_shared<const DensityOperator>(model.state(xi));
    auto tangents = basis_at(model, xi, rho);
    gram(tangents); // singular partials surface here
    return tangents;
}

FisherMatrix fisher_matrix(const ParametricModel &model, const RVector &xi) {
    return gram(tangent_basis(model, xi));
}

TangentVector e_transport(const TangentVector &x, std::shared_ptr<const DensityOperator> sigma) {
    detail::require_same_dim(x.base().dim(), sigma->dim(), "e_transport");
    const double shift = expectation(*sigma, x.sld());
    HermitianOperator sld = x.sld().shifted(-shift);
    return TangentVector::from_sld(std::move(sigma), std::move(sld));
}

TangentVector m_transport(const TangentVector &x, std::shared_ptr<const DensityOperator> sigma) {
    detail::require_same_dim(x.base().dim(), sigma->dim(), "m_transport");
    return TangentVector::from_m_rep(std::move(sigma), x.m_rep());
}

TangentVector e_covariant_derivative(const ParametricModel &model, const RVector &xi,
                                     std::size_t i, std::size_t j, double h_cov) {
    if (i >= model.n() || j >= model.n()) {
        throw Error(ErrorKind::InvalidArgument, "coordinate index out of range");
    }
    const auto ii = static_cast<Eigen::Index>(i);
    // The inner SLD evaluation may itself use a finite-difference stencil.
    const double inner = model.has_analytic_partials()
                             ? 0.0
                             : model.fd_step() * std::max(1.0, std::abs(xi[ii]) + 1.0);
    double h = h_cov * std::max(1.0, std::abs(xi[ii]));
    h = std::min(h, 0.5 * (model.distance_to_boundary(xi) - inner));
    if (!(h > 1e-7)) {
        throw Error(ErrorKind::OutsideDomain, "covariant-derivative step underflow near boundary");
    }

    auto sld_j = [&](double offset) {
        RVector p = xi;
        p[ii] += offset;
        auto rho = std::make_shared<const DensityOperator>(model.state(p));
        return TangentVector::from_m_rep(rho, model.partials(p)[j]).sld();
    };
    auto central = [&](double step) {
        return (sld_j(step) - sld_j(-step)) * (1.0 / (2.0 * step));
    };
    const HermitianOperator coarse = central(h);
    const HermitianOperator fine = central(0.5 * h);
    const HermitianOperator derivative = (fine * 4.0 - coarse) * (1.0 / 3.0);

    const PointGeometry here = evaluate(model, xi);
    const double gij =
        here.fisher.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    // Finite differences leave a small nonzero expectation; the caller sees it.
    return TangentVector::from_sld(here.state, derivative.shifted(gij), 1e-4);
}

TangentVector torsion(std::shared_ptr<const DensityOperator> rho, const TangentVector &x,
                      const TangentVector &y) {
    for (const auto *v : {&x, &y}) {
        if (v->base().dim() != rho->dim() ||
            (v->base().matrix() - rho->matrix()).norm() > 1e-12) {
            throw Error(ErrorKind::InvalidArgument, "torsion: tangent vector based elsewhere");
        }
    }
    HermitianOperator m = double_commutator(x.sld(), y.sld(), rho->op()) * 0.25;
    return TangentVector::from_m_rep(std::move(rho), std::move(m));
}

DensityOperator e_geodesic(const DensityOperator &rho0, const HermitianOperator &f, double theta) {
    detail::require_same_dim(rho0.dim(), f.dim(), "e_geodesic");
    if (std::abs(theta) * f.operator_norm() > 700.0) {
        throw Error(ErrorKind::Overflow, "|theta| * |F| exceeds 700");
    }
    const HermitianOperator half = f * (0.5 * theta);
    const double shift = eigh(half).values.maxCoeff();
    const CMatrix e = exp_hermitian(half, shift).matrix();
    return DensityOperator::normalized(HermitianOperator(e * rho0.matrix() * e));
}

bool geodesic_is_constant(const HermitianOperator &f) {
    const double d = static_cast<double>(f.dim());
    return f.shifted(-f.trace() / d).hs_norm() <= 1e-12 * std::max(1.0, f.hs_norm());
}

ParametricModel iid_extension(const ParametricModel &model, int copies) {
    std::size_t total = 1;
    if (copies < 1) {
        throw Error(ErrorKind::InvalidArgument, "i.i.d. extension needs N >= 1");
    }
    for (int t = 0; t < copies; ++t) {
        total *= model.hilbert_dim();
        if (total > kMaxTensorDim) {
            throw Error(ErrorKind::DimensionGuard, "d^N exceeds 4096");
        }
    }
    auto state = [model, copies](const RVector &xi) {
        return tensor_power_state(model.state(xi), copies);
    };
    auto partials = [model, copies](const RVector &xi) {
        const DensityOperator rho = model.state(xi);
        std::vector<HermitianOperator> out;
        for (const auto &p : model.partials(xi)) {
            CMatrix sum;
            for (int t = 0; t < copies; ++t) {
                CMatrix term = (t == 0) ? p.matrix() : rho.matrix();
                for (int s = 1; s < copies; ++s) {
                    term = kron(term, (s == t) ? p.matrix() : rho.matrix());
                }
                sum = (t == 0) ? term : CMatrix(sum + term);
            }
            out.emplace_back(sum);
        }
        return out;
    };
    std::string name = model.name().empty() ? std::string("model") : model.name();
    return ParametricModel(total, model.domain(), state, partials,
                           "iid(" + std::to_string(copies) + ", " + name + ")");
}

} // namespace qsld
