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

#include "qsld/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "qsld/autoparallel.hpp"
#include "qsld/error.hpp"

namespace qsld {

DiscreteEstimator::DiscreteEstimator(std::vector<HermitianOperator> elements,
                                     std::vector<RVector> values)
    : elements_(std::move(elements)), values_(std::move(values)) {
    if (elements_.empty() || elements_.size() != values_.size()) {
        throw Error(ErrorKind::DimensionMismatch, "estimator needs one value per POVM element");
    }
    const std::size_t d = elements_.front().dim();
    const auto n = values_.front().size();
    if (n == 0) {
        throw Error(ErrorKind::InvalidArgument, "estimator values must be non-empty");
    }
    CMatrix total = CMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t w = 0; w < elements_.size(); ++w) {
        detail::require_same_dim(elements_[w].dim(), d, "DiscreteEstimator");
        if (values_[w].size() != n) {
            throw Error(ErrorKind::DimensionMismatch, "estimator values differ in length");
        }
        if (eigh(elements_[w]).values.minCoeff() < -kPovmPositivityTol) {
            throw Error(ErrorKind::NotPositive,
                        "POVM element " + std::to_string(w) + " is not positive semidefinite");
        }
        total += elements_[w].matrix();
    }
    const double defect =
        (total - CMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)))
            .norm();
    if (defect > kPovmCompletenessTol) {
        throw Error(ErrorKind::NotNormalized,
                    "POVM elements do not sum to I (defect " + std::to_string(defect) + ")");
    }
}

std::vector<HermitianOperator> DiscreteEstimator::observables() const {
    std::vector<HermitianOperator> out(n(), HermitianOperator::zero(dim()));
    for (std::size_t w = 0; w < size(); ++w) {
        for (std::size_t i = 0; i < n(); ++i) {
            out[i] += elements_[w] * values_[w][static_cast<Eigen::Index>(i)];
        }
    }
    return out;
}

RVector outcome_probabilities(const DensityOperator &rho, const DiscreteEstimator &pi) {
    detail::require_same_dim(rho.dim(), pi.dim(), "outcome_probabilities");
    RVector p(static_cast<Eigen::Index>(pi.size()));
    for (std::size_t w = 0; w < pi.size(); ++w) {
        const double pw = expectation(rho, pi.elements()[w]);
        if (pw < -kPovmPositivityTol) {
            throw Error(ErrorKind::NotPositive, "negative outcome probability");
        }
        p[static_cast<Eigen::Index>(w)] = std::max(pw, 0.0);
    }
    return p;
}

Moments estimator_moments(const DensityOperator &rho, const DiscreteEstimator &pi,
                          const RVector &xi_true) {
    if (static_cast<std::size_t>(xi_true.size()) != pi.n()) {
        throw Error(ErrorKind::DimensionMismatch, "xi_true and estimator values differ in length");
    }
    const RVector p = outcome_probabilities(rho, pi);
    const auto n = xi_true.size();
    Moments m{RVector::Zero(n), RMatrix::Zero(n, n)};
    for (std::size_t w = 0; w < pi.size(); ++w) {
        const double pw = p[static_cast<Eigen::Index>(w)];
        const RVector dev = pi.values()[w] - xi_true;
        m.mean += pw * pi.values()[w];
        m.mse += pw * dev * dev.transpose();
    }
    m.mse = 0.5 * (m.mse + m.mse.transpose()).eval();
    return m;
}

UnbiasednessResidual local_unbiasedness_residual(const ParametricModel &model, const RVector &xi,
                                                 const DiscreteEstimator &pi) {
    if (pi.n() != model.n()) {
        throw Error(ErrorKind::DimensionMismatch, "estimator and model differ in n");
    }
    PointGeometry geo = evaluate(model, xi);
    const DensityOperator &rho = *geo.state;
    const auto a = pi.observables();
    UnbiasednessResidual r{0.0, 0.0};
    for (std::size_t i = 0; i < model.n(); ++i) {
        r.mean = std::max(r.mean, std::abs(expectation(rho, a[i]) - xi[static_cast<Eigen::Index>(i)]));
        for (std::size_t j = 0; j < model.n(); ++j) {
            const double target = i == j ? 1.0 : 0.0;
            r.derivative = std::max(
                r.derivative, std::abs(sld_inner(rho, a[i], geo.tangents[j].sld()) - target));
        }
    }
    return r;
}

bool check_locally_unbiased(const ParametricModel &model, const RVector &xi,
                            const DiscreteEstimator &pi, double tol) {
    const UnbiasednessResidual r = local_unbiasedness_residual(model, xi, pi);
    return r.mean <= tol && r.derivative <= tol;
}

RMatrix cr_gap(const ParametricModel &model, const RVector &xi, const DiscreteEstimator &pi,
               double tol) {
    const UnbiasednessResidual r = local_unbiasedness_residual(model, xi, pi);
    if (r.mean > tol || r.derivative > tol) {
        throw Error(ErrorKind::NotLocallyUnbiased,
                    "estimator is not locally unbiased (mean residual " + std::to_string(r.mean) +
                        ", derivative residual " + std::to_string(r.derivative) + ")");
    }
    const FisherMatrix g = fisher_matrix(model, xi);
    const Moments m = estimator_moments(model.state(xi), pi, xi);
    return m.mse - g.inverse();
}

namespace {

void require_square_invertible(const RMatrix &u, std::size_t n) {
    if (static_cast<std::size_t>(u.rows()) != n || static_cast<std::size_t>(u.cols()) != n) {
        throw Error(ErrorKind::DimensionMismatch, "u_basis must be n x n");
    }
    Eigen::JacobiSVD<RMatrix> svd(u);
    const RVector s = svd.singularValues();
    if (!(s[s.size() - 1] > 0.0) || s[0] / s[s.size() - 1] >= 1e8) {
        throw Error(ErrorKind::IllConditioned, "u_basis is singular or ill-conditioned");
    }
}

void require_probabilities(const RVector &probs, std::size_t n) {
    if (static_cast<std::size_t>(probs.size()) != n) {
        throw Error(ErrorKind::DimensionMismatch, "need one probability per direction");
    }
    if (probs.minCoeff() <= 0.0 || std::abs(probs.sum() - 1.0) > 1e-12) {
        throw Error(ErrorKind::InvalidArgument, "probabilities must be positive and sum to 1");
    }
}

// Outcomes (k, r): element p_k P^k_r, value offset_k + (w_k / p_k) x^k_r.
DiscreteEstimator randomized_spectral(const std::vector<HermitianOperator> &x,
                                      const RMatrix &w, const RVector &probs,
                                      const RMatrix &offset) {
    std::vector<HermitianOperator> elements;
    std::vector<RVector> values;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        const double pk = probs[kk];
        for (const auto &comp : spectral_resolution(x[k])) {
            elements.push_back(comp.projector * pk);
            values.emplace_back(offset.row(kk).transpose() + (comp.value / pk) * w.col(kk));
        }
    }
    return {std::move(elements), std::move(values)};
}

} // namespace

DiscreteEstimator build_local_random_estimator(const ParametricModel &model, const RVector &xi,
                                               const RMatrix &u_basis, const RVector &probs,
                                               const RMatrix &gamma) {
    const std::size_t n = model.n();
    require_square_invertible(u_basis, n);
    require_probabilities(probs, n);
    if (static_cast<std::size_t>(gamma.rows()) != n || static_cast<std::size_t>(gamma.cols()) != n) {
        throw Error(ErrorKind::DimensionMismatch, "gamma must be n x n");
    }
    const RVector constraint = gamma.transpose() * probs - xi;
    if (constraint.cwiseAbs().maxCoeff() > 1e-10) {
        throw Error(ErrorKind::InvalidArgument, "gamma violates sum_k p_k gamma_k = xi");
    }
    const PointGeometry geo = evaluate(model, xi);
    std::vector<HermitianOperator> x;
    for (std::size_t k = 0; k < n; ++k) {
        HermitianOperator xk = HermitianOperator::zero(model.hilbert_dim());
        for (std::size_t i = 0; i < n; ++i) {
            xk += geo.dual_slds[i] *
                  u_basis(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i));
        }
        x.push_back(std::move(xk));
    }
    return randomized_spectral(x, u_basis.inverse(), probs, gamma);
}

double local_random_variance(const FisherMatrix &g, const RVector &xi, const RMatrix &u_basis,
                             const RVector &probs, const RMatrix &gamma, std::size_t k) {
    const auto kk = static_cast<Eigen::Index>(k);
    const RVector u = u_basis.row(kk).transpose();
    double out = u.dot(g.inverse() * u) / probs[kk];
    for (Eigen::Index l = 0; l < probs.size(); ++l) {
        const double a = u.dot(gamma.row(l).transpose() - xi);
        out += probs[l] * a * a;
    }
    return out;
}

void FiltrationSpec::validate() const {
    const std::size_t n = f_ops.size();
    if (n == 0) {
        throw Error(ErrorKind::InvalidArgument, "filtration needs F^1..F^n");
    }
    require_square_invertible(u_basis, n);
    for (const auto &f : f_ops) {
        detail::require_same_dim(f.dim(), f_ops.front().dim(), "FiltrationSpec");
    }
    if (model) {
        if (model->n() != n) {
            throw Error(ErrorKind::DimensionMismatch, "F_ops count differs from model dimension");
        }
        detail::require_same_dim(model->hilbert_dim(), f_ops.front().dim(), "FiltrationSpec");
    }
    if (eps_schedule.empty()) {
        throw Error(ErrorKind::InvalidArgument, "eps schedule is empty");
    }
    for (std::size_t s = 0; s < eps_schedule.size(); ++s) {
        const double e = eps_schedule[s];
        if (!(e > 0.0 && e < 1.0)) {
            throw Error(ErrorKind::InvalidArgument, "eps must lie in (0, 1)");
        }
        if (s > 0 && !(e < eps_schedule[s - 1])) {
            throw Error(ErrorKind::InvalidArgument, "eps schedule must be strictly decreasing");
        }
    }
}

RVector filtration_probabilities(std::size_t n, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "eps must lie in (0, 1)");
    }
    RVector p(static_cast<Eigen::Index>(n));
    if (n == 1) {
        p[0] = 1.0;
        return p;
    }
    p.setConstant(eps / static_cast<double>(n - 1));
    p[0] = 1.0 - eps;
    return p;
}

DiscreteEstimator filtration_estimator(const RMatrix &u_basis,
                                       const std::vector<HermitianOperator> &f_ops, double eps) {
    const std::size_t n = f_ops.size();
    require_square_invertible(u_basis, n);
    const RVector probs = filtration_probabilities(n, eps);
    std::vector<HermitianOperator> y;
    for (std::size_t k = 0; k < n; ++k) {
        HermitianOperator yk = HermitianOperator::zero(f_ops.front().dim());
        for (std::size_t i = 0; i < n; ++i) {
            yk += f_ops[i] * u_basis(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i));
        }
        y.push_back(std::move(yk));
    }
    const auto nn = static_cast<Eigen::Index>(n);
    return randomized_spectral(y, u_basis.inverse(), probs, RMatrix::Zero(nn, nn));
}

std::vector<DiscreteEstimator> build_filtration(const FiltrationSpec &spec) {
    spec.validate();
    std::vector<DiscreteEstimator> out;
    out.reserve(spec.eps_schedule.size());
    for (double eps : spec.eps_schedule) {
        out.push_back(filtration_estimator(spec.u_basis, spec.f_ops, eps));
    }
    return out;
}

double filtration_variance(const FisherMatrix &g, const RVector &xi, const RVector &u, double eps) {
    const double s = u.dot(xi);
    return u.dot(g.inverse() * u) / (1.0 - eps) + eps / (1.0 - eps) * s * s;
}

HermitianOperator scalar_efficient_estimator(const ParametricModel &model, const RVector &xi,
                                             double f_value, const RVector &grad_f) {
    if (static_cast<std::size_t>(grad_f.size()) != model.n()) {
        throw Error(ErrorKind::DimensionMismatch, "gradient length differs from model dimension");
    }
    const PointGeometry geo = evaluate(model, xi);
    HermitianOperator f = HermitianOperator::identity(model.hilbert_dim()) * f_value;
    for (std::size_t i = 0; i < model.n(); ++i) {
        f += geo.dual_slds[i] * grad_f[static_cast<Eigen::Index>(i)];
    }
    return f;
}

double scalar_cr_bound(const ParametricModel &model, const RVector &xi, const RVector &grad_f) {
    if (static_cast<std::size_t>(grad_f.size()) != model.n()) {
        throw Error(ErrorKind::DimensionMismatch, "gradient length differs from model dimension");
    }
    return grad_f.dot(fisher_matrix(model, xi).inverse() * grad_f);
}

std::size_t efficient_function_space_dim(const ParametricModel &model,
                                         const std::vector<RVector> &samples, double tol) {
    return parallel_field_dimension(model, samples, tol).dimension + 1;
}

namespace {
constexpr std::uint64_t kShardSize = 8192;
}

MonteCarloMoments monte_carlo_moments(const DensityOperator &rho, const DiscreteEstimator &pi,
                                      std::uint64_t shots, std::uint64_t seed,
                                      const RVector &xi_true) {
    if (shots == 0) {
        throw Error(ErrorKind::InvalidArgument, "shots must be at least 1");
    }
    if (static_cast<std::size_t>(xi_true.size()) != pi.n()) {
        throw Error(ErrorKind::DimensionMismatch, "xi_true and estimator values differ in length");
    }
    const RVector p = outcome_probabilities(rho, pi);
    const double total = p.sum();
    if (std::abs(total - 1.0) > 1e-9) {
        throw Error(ErrorKind::NotNormalized, "outcome probabilities do not sum to 1");
    }
    std::vector<double> cumulative(static_cast<std::size_t>(p.size()));
    double acc = 0.0;
    for (Eigen::Index w = 0; w < p.size(); ++w) {
        acc += p[w] / total;
        cumulative[static_cast<std::size_t>(w)] = acc;
    }
    cumulative.back() = 1.0;

    const CounterRng root(seed);
    std::vector<std::uint64_t> counts(pi.size(), 0);
    const std::uint64_t shards = (shots + kShardSize - 1) / kShardSize;
    for (std::uint64_t s = 0; s < shards; ++s) {
        CounterRng rng = root.substream(s);
        const std::uint64_t draws = std::min(kShardSize, shots - s * kShardSize);
        for (std::uint64_t t = 0; t < draws; ++t) {
            const double x = rng.uniform();
            const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
            const auto idx = static_cast<std::size_t>(
                std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                         static_cast<std::ptrdiff_t>(cumulative.size()) - 1));
            ++counts[idx];
        }
    }

    const auto n = xi_true.size();
    const auto dn = static_cast<double>(shots);
    MonteCarloMoments out{RVector::Zero(n), RMatrix::Zero(n, n), RVector::Zero(n),
                          RMatrix::Zero(n, n), counts, shots, seed};
    RVector sq = RVector::Zero(n);
    RMatrix sq4 = RMatrix::Zero(n, n);
    for (std::size_t w = 0; w < pi.size(); ++w) {
        if (counts[w] == 0) {
            continue;
        }
        const double c = static_cast<double>(counts[w]);
        const RVector &f = pi.values()[w];
        const RVector dev = f - xi_true;
        const RMatrix outer = dev * dev.transpose();
        out.mean += c * f;
        sq += c * f.cwiseProduct(f);
        out.mse += c * outer;
        sq4 += c * outer.cwiseProduct(outer);
    }
    out.mean /= dn;
    out.mse /= dn;
    sq /= dn;
    sq4 /= dn;
    const double bessel = shots > 1 ? dn / (dn - 1.0) : 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        out.stderr_mean[i] =
            std::sqrt(std::max(0.0, (sq[i] - out.mean[i] * out.mean[i]) * bessel) / dn);
        for (Eigen::Index j = 0; j < n; ++j) {
            out.stderr_mse(i, j) = std::sqrt(
                std::max(0.0, (sq4(i, j) - out.mse(i, j) * out.mse(i, j)) * bessel) / dn);
        }
    }
    return out;
}

ScalarEstimate quadratic_form_estimate(const DiscreteEstimator &pi,
                                       const std::vector<std::uint64_t> &counts,
                                       const RVector &xi_true, const RVector &u) {
    if (counts.size() != pi.size()) {
        throw Error(ErrorKind::DimensionMismatch, "counts do not match estimator outcomes");
    }
    double shots = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    for (std::size_t w = 0; w < pi.size(); ++w) {
        const double c = static_cast<double>(counts[w]);
        const double z = std::pow(u.dot(pi.values()[w] - xi_true), 2);
        shots += c;
        m1 += c * z;
        m2 += c * z * z;
    }
    if (shots < 1.0) {
        throw Error(ErrorKind::InvalidArgument, "no samples");
    }
    m1 /= shots;
    m2 /= shots;
    const double var = shots > 1.0 ? (m2 - m1 * m1) * shots / (shots - 1.0) : 0.0;
    return {m1, std::sqrt(std::max(0.0, var) / shots)};
}

std::vector<HermitianOperator> random_povm(std::size_t dim, std::size_t outcomes,
                                           CounterRng &rng) {
    if (outcomes == 0) {
        throw Error(ErrorKind::InvalidArgument, "POVM needs at least one outcome");
    }
    std::vector<CMatrix> raw;
    const auto d = static_cast<Eigen::Index>(dim);
    CMatrix total = CMatrix::Zero(d, d);
    for (std::size_t k = 0; k < outcomes; ++k) {
        const CMatrix h = random_hermitian(dim, rng).matrix();
        raw.push_back(h * h + 0.05 * CMatrix::Identity(d, d));
        total += raw.back();
    }
    const Eigensystem es = eigh(HermitianOperator(total));
    const CMatrix inv_sqrt = es.vectors *
                             es.values.cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() *
                             es.vectors.adjoint();
    std::vector<HermitianOperator> out;
    out.reserve(outcomes);
    for (const auto &k : raw) {
        out.emplace_back(inv_sqrt * k * inv_sqrt);
    }
    // remove the rounding defect so completeness holds to machine precision
    CMatrix sum = CMatrix::Zero(d, d);
    for (const auto &e : out) {
        sum += e.matrix();
    }
    const CMatrix defect = (sum - CMatrix::Identity(d, d)) / static_cast<double>(outcomes);
    for (auto &e : out) {
        e = HermitianOperator(e.matrix() - defect);
    }
    return out;
}

DiscreteEstimator random_locally_unbiased_estimator(const ParametricModel &model,
                                                    const RVector &xi, CounterRng &rng,
                                                    std::size_t outcomes, double spread) {
    const std::size_t n = model.n();
    const PointGeometry geo = evaluate(model, xi);
    const auto povm = random_povm(model.hilbert_dim(), outcomes, rng);
    const auto m = static_cast<Eigen::Index>(outcomes);
    const auto rows = static_cast<Eigen::Index>(n + 1);
    RMatrix c(rows, m);
    for (Eigen::Index w = 0; w < m; ++w) {
        const auto &e = povm[static_cast<std::size_t>(w)];
        c(0, w) = expectation(*geo.state, e);
        for (std::size_t j = 0; j < n; ++j) {
            c(static_cast<Eigen::Index>(j + 1), w) = hs_inner(geo.tangents[j].m_rep(), e);
        }
    }
    Eigen::JacobiSVD<RMatrix> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RVector s = svd.singularValues();
    if (s[rows - 1] <= 1e-8 * s[0]) {
        throw Error(ErrorKind::SingularModel, "POVM too coarse for a locally unbiased estimator");
    }
    const RMatrix v = svd.matrixV();
    RMatrix f(m, static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        RVector b = RVector::Zero(rows);
        b[0] = xi[static_cast<Eigen::Index>(i)];
        b[static_cast<Eigen::Index>(i + 1)] = 1.0;
        RVector sol = svd.solve(b);
        for (Eigen::Index k = rows; k < m; ++k) {
            sol += spread * rng.normal() * v.col(k);
        }
        f.col(static_cast<Eigen::Index>(i)) = sol;
    }
    std::vector<RVector> values;
    for (Eigen::Index w = 0; w < m; ++w) {
        values.emplace_back(f.row(w).transpose());
    }
    return {povm, std::move(values)};
}

} // namespace qsld
