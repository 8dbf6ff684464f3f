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

#include "qsld/autoparallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qsld/error.hpp"
#include "qsld/random.hpp"

namespace qsld {

AutoparallelVerdict check_e_autoparallel_m_affine(const ParametricModel &model,
                                                  const std::vector<RVector> &grid, double tol) {
    if (grid.size() < 2) {
        throw Error(ErrorKind::InvalidArgument, "autoparallel check needs at least two grid points");
    }
    if (!(tol > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
    }
    const std::size_t n = model.n();
    // candidates[g][i] = L^i + xi^i I at grid point g
    std::vector<std::vector<HermitianOperator>> candidates;
    candidates.reserve(grid.size());
    for (const auto &xi : grid) {
        PointGeometry geo = evaluate(model, xi);
        std::vector<HermitianOperator> f;
        f.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            f.push_back(geo.dual_slds[i].shifted(xi[static_cast<Eigen::Index>(i)]));
        }
        candidates.push_back(std::move(f));
    }

    AutoparallelVerdict out{true, 0.0, tol, {}, std::nullopt};
    out.certificate.grid = grid;
    const double inv_count = 1.0 / static_cast<double>(grid.size());
    for (std::size_t i = 0; i < n; ++i) {
        HermitianOperator mean = HermitianOperator::zero(model.hilbert_dim());
        for (const auto &c : candidates) {
            mean += c[i];
        }
        mean *= inv_count;
        for (const auto &c : candidates) {
            out.certificate.max_residual = std::max(out.certificate.max_residual, hs_distance(c[i], mean));
        }
        out.certificate.observables.push_back(std::move(mean));

        for (std::size_t a = 0; a < grid.size(); ++a) {
            for (std::size_t b = a + 1; b < grid.size(); ++b) {
                const double dist = hs_distance(candidates[a][i], candidates[b][i]);
                if (dist > out.max_pairwise) {
                    out.max_pairwise = dist;
                    out.witness = AutoparallelWitness{i, grid[a], grid[b], dist};
                }
            }
        }
    }
    out.verdict = out.max_pairwise <= tol;
    if (out.verdict) {
        out.witness.reset();
    }
    return out;
}

InvolutivityResult involutivity_check(const OperatorSubspace &subspace,
                                      const std::vector<DensityOperator> &states, double tol) {
    const OperatorSubspace extended = subspace.with_identity();
    const auto &basis = subspace.basis();
    InvolutivityResult out{true, 0.0, tol, states.size(), std::nullopt};
    for (std::size_t s = 0; s < states.size(); ++s) {
        const DensityOperator &rho = states[s];
        detail::require_same_dim(rho.dim(), subspace.dim_ambient(), "involutivity_check");
        for (std::size_t a = 0; a < basis.size(); ++a) {
            for (std::size_t b = a + 1; b < basis.size(); ++b) {
                const HermitianOperator c =
                    solve_sld(rho, double_commutator(basis[a], basis[b], rho.op()));
                const Membership m = subspace_membership(extended, c, tol);
                const double rel = m.residual / std::max(1.0, c.hs_norm());
                if (rel > out.worst_residual) {
                    out.worst_residual = rel;
                    out.witness = InvolutivityWitness{s, a, b, rel};
                }
            }
        }
    }
    out.involutive = out.worst_residual <= tol;
    if (out.involutive) {
        out.witness.reset();
    }
    return out;
}

std::vector<DensityOperator> default_state_sample(std::size_t dim, std::size_t count,
                                                  std::uint64_t seed) {
    CounterRng rng(seed, dim);
    std::vector<DensityOperator> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        out.push_back(random_state(dim, rng));
    }
    return out;
}

namespace {

void require_commuting(const std::vector<HermitianOperator> &f) {
    if (max_commutator_norm(f) > 1e-10) {
        throw Error(ErrorKind::NotCommuting, "quasi-exponential family needs commuting F^i");
    }
}

HermitianOperator weighted_sum(const std::vector<HermitianOperator> &f, const RVector &w,
                               std::size_t dim) {
    HermitianOperator h = HermitianOperator::zero(dim);
    for (std::size_t i = 0; i < f.size(); ++i) {
        h += f[i] * w[static_cast<Eigen::Index>(i)];
    }
    return h;
}

DensityOperator tilt(const DensityOperator &p, const HermitianOperator &h) {
    const HermitianOperator half = h * 0.5;
    const double shift = eigh(half).values.maxCoeff();
    const CMatrix e = exp_hermitian(half, shift).matrix();
    return DensityOperator::normalized(HermitianOperator(e * p.matrix() * e));
}

} // namespace

DensityOperator quasi_exponential_state(const DensityOperator &p,
                                        const std::vector<HermitianOperator> &f,
                                        const RVector &theta) {
    if (static_cast<std::size_t>(theta.size()) != f.size()) {
        throw Error(ErrorKind::DimensionMismatch, "theta and F list differ in length");
    }
    for (const auto &fi : f) {
        detail::require_same_dim(fi.dim(), p.dim(), "quasi_exponential_state");
    }
    require_commuting(f);
    return tilt(p, weighted_sum(f, theta, p.dim()));
}

QuasiExponentialFamily::QuasiExponentialFamily(DensityOperator p, std::vector<HermitianOperator> f)
    : p_(std::move(p)), f_(std::move(f)) {
    if (f_.empty()) {
        throw Error(ErrorKind::InvalidArgument, "quasi-exponential family needs F^1..F^n");
    }
    for (const auto &fi : f_) {
        detail::require_same_dim(fi.dim(), p_.dim(), "QuasiExponentialFamily");
    }
    require_commuting(f_);
    std::vector<HermitianOperator> with_id = f_;
    with_id.push_back(HermitianOperator::identity(p_.dim()));
    if (OperatorSubspace(p_.dim(), with_id).dimension() != f_.size() + 1) {
        throw Error(ErrorKind::InvalidArgument, "F^1..F^n, I must be linearly independent");
    }
}

DensityOperator QuasiExponentialFamily::state_at_theta(const RVector &theta) const {
    if (static_cast<std::size_t>(theta.size()) != n()) {
        throw Error(ErrorKind::DimensionMismatch, "theta has wrong length");
    }
    return tilt(p_, weighted_sum(f_, theta, p_.dim()));
}

RVector QuasiExponentialFamily::expectation_at_theta(const RVector &theta) const {
    const DensityOperator rho = state_at_theta(theta);
    RVector xi(static_cast<Eigen::Index>(n()));
    for (std::size_t i = 0; i < n(); ++i) {
        xi[static_cast<Eigen::Index>(i)] = expectation(rho, f_[i]);
    }
    return xi;
}

RMatrix QuasiExponentialFamily::jacobian_at_theta(const RVector &theta) const {
    const DensityOperator rho = state_at_theta(theta);
    const auto nn = static_cast<Eigen::Index>(n());
    RVector mean(nn);
    for (Eigen::Index i = 0; i < nn; ++i) {
        mean[i] = expectation(rho, f_[static_cast<std::size_t>(i)]);
    }
    RMatrix cov(nn, nn);
    for (Eigen::Index i = 0; i < nn; ++i) {
        for (Eigen::Index j = i; j < nn; ++j) {
            cov(i, j) = sld_inner(rho, f_[static_cast<std::size_t>(i)],
                                  f_[static_cast<std::size_t>(j)]) -
                        mean[i] * mean[j];
            cov(j, i) = cov(i, j);
        }
    }
    return cov;
}

RVector QuasiExponentialFamily::theta_from_expectation(const RVector &xi) const {
    if (static_cast<std::size_t>(xi.size()) != n()) {
        throw Error(ErrorKind::DimensionMismatch, "xi has wrong length");
    }
    RVector theta = RVector::Zero(xi.size());
    RVector resid = expectation_at_theta(theta) - xi;
    for (int iter = 0; iter < 200 && resid.norm() > 1e-14; ++iter) {
        const RVector step = jacobian_at_theta(theta).ldlt().solve(resid);
        double t = 1.0;
        bool accepted = false;
        for (int half = 0; half < 60; ++half, t *= 0.5) {
            const RVector trial = theta - t * step;
            const double bound = (trial.cwiseAbs().sum()) *
                                 std::max_element(f_.begin(), f_.end(), [](auto &a, auto &b) {
                                     return a.operator_norm() < b.operator_norm();
                                 })->operator_norm();
            if (bound > 700.0) {
                continue;
            }
            const RVector r = expectation_at_theta(trial) - xi;
            if (r.norm() < resid.norm() || r.norm() <= 1e-14) {
                theta = trial;
                resid = r;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            break;
        }
    }
    if (!(resid.norm() <= 1e-11)) {
        throw Error(ErrorKind::OutsideDomain,
                    "expectation coordinates not attained by the family (residual " +
                        std::to_string(resid.norm()) + ")");
    }
    return theta;
}

ParametricModel QuasiExponentialFamily::model(std::vector<Interval> domain, std::string name) const {
    if (domain.size() != n()) {
        throw Error(ErrorKind::DimensionMismatch, "domain must have one interval per F^i");
    }
    const QuasiExponentialFamily fam = *this;
    auto state = [fam](const RVector &xi) {
        return fam.state_at_theta(fam.theta_from_expectation(xi));
    };
    auto partials = [fam](const RVector &xi) {
        const RVector theta = fam.theta_from_expectation(xi);
        const DensityOperator rho = fam.state_at_theta(theta);
        const RMatrix dtheta = fam.jacobian_at_theta(theta).inverse();
        std::vector<HermitianOperator> by_theta;
        for (const auto &fj : fam.observables()) {
            by_theta.push_back(rho_sym(rho, fj.shifted(-expectation(rho, fj))));
        }
        std::vector<HermitianOperator> out;
        for (std::size_t i = 0; i < fam.n(); ++i) {
            HermitianOperator acc = HermitianOperator::zero(rho.dim());
            for (std::size_t j = 0; j < fam.n(); ++j) {
                acc += by_theta[j] *
                       dtheta(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
            }
            out.push_back(std::move(acc));
        }
        return out;
    };
    return ParametricModel(p_.dim(), std::move(domain), state, partials, std::move(name));
}

OperatorSubspace real_subspace(const CMatrix &basis) {
    const auto d = basis.rows();
    if (basis.cols() != d ||
        (basis.adjoint() * basis - CMatrix::Identity(d, d)).norm() > 1e-10) {
        throw Error(ErrorKind::NotUnitary, "basis matrix must be unitary");
    }
    std::vector<HermitianOperator> gens;
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = i; j < d; ++j) {
            const CMatrix outer = basis.col(i) * basis.col(j).adjoint();
            gens.emplace_back(outer + outer.adjoint());
        }
    }
    return OperatorSubspace(static_cast<std::size_t>(d), gens);
}

Counterexample counterexample_dim_ge3(double eps, std::size_t dim) {
    if (dim < 3) {
        throw Error(ErrorKind::InvalidArgument, "counterexample needs d >= 3");
    }
    const auto d = static_cast<Eigen::Index>(dim);
    const Complex ie(0.0, eps);
    CMatrix a = CMatrix::Zero(d, d);
    CMatrix b = CMatrix::Zero(d, d);
    CMatrix r = CMatrix::Identity(d, d);
    a(0, 0) = 1.0;
    a(1, 1) = 1.0;
    b.topLeftCorner(3, 3) << 0, 1, 1, 1, 0, 1, 1, 1, 0;
    r(0, 1) = ie;
    r(0, 2) = ie;
    r(1, 2) = ie;
    r(1, 0) = -ie;
    r(2, 0) = -ie;
    r(2, 1) = -ie;
    r /= static_cast<double>(dim);

    const HermitianOperator rho_op(r);
    if (eigh(rho_op).values.minCoeff() <= kPositivityTol) {
        throw Error(ErrorKind::NotPositive, "eps too large: the construction is not positive");
    }
    Counterexample out{0.0, HermitianOperator(a), HermitianOperator(b), DensityOperator(rho_op)};

    const RVector target = realify(double_commutator(out.a, out.b, out.rho.op()));
    const std::size_t count = dim * (dim + 1) / 2;
    RMatrix design(d * d, static_cast<Eigen::Index>(count));
    Eigen::Index col = 0;
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = i; j < d; ++j) {
            CMatrix e = CMatrix::Zero(d, d);
            e(i, j) = 1.0;
            e(j, i) = 1.0;
            design.col(col++) = realify(rho_sym(out.rho, HermitianOperator(e)));
        }
    }
    const RVector coeff = design.colPivHouseholderQr().solve(target);
    out.residual = (design * coeff - target).norm();
    return out;
}

ParallelFieldDimension parallel_field_dimension(const ParametricModel &model,
                                                const std::vector<RVector> &samples, double tol) {
    if (samples.empty()) {
        throw Error(ErrorKind::InvalidArgument, "parallel_field_dimension needs samples");
    }
    std::vector<RMatrix> frames;
    frames.reserve(samples.size());
    for (const auto &xi : samples) {
        PointGeometry geo = evaluate(model, xi);
        std::vector<HermitianOperator> gens;
        for (const auto &t : geo.tangents) {
            gens.push_back(t.sld());
        }
        gens.push_back(HermitianOperator::identity(model.hilbert_dim()));
        frames.push_back(OperatorSubspace(model.hilbert_dim(), gens).frame());
    }
    const Intersection cap = intersect_subspaces(frames, tol);
    ParallelFieldDimension out;
    out.dimension = cap.dimension > 0 ? cap.dimension - 1 : 0;
    out.upper_bound_only = samples.size() < 3;
    out.smallest_kept = cap.smallest_kept;
    out.largest_null = cap.largest_null;
    return out;
}

} // namespace qsld
