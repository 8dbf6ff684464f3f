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

#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "qsld/catalog.hpp"
#include "qsld/error.hpp"
#include "qsld/estimation.hpp"
#include "qsld/qubit.hpp"

namespace qsld {
namespace {

HermitianOperator projector(std::size_t dim, std::size_t k) {
    RVector e = RVector::Zero(static_cast<Eigen::Index>(dim));
    e[static_cast<Eigen::Index>(k)] = 1.0;
    return HermitianOperator::diagonal(e);
}

RVector scalar(double x) { return (RVector(1) << x).finished(); }
RVector v2(double a, double b) { return (RVector(2) << a, b).finished(); }

DiscreteEstimator sigma_z_measurement() {
    return DiscreteEstimator({projector(2, 0), projector(2, 1)}, {scalar(1.0), scalar(-1.0)});
}

TEST(DiscreteEstimator, Validation) {
    EXPECT_THROW(DiscreteEstimator({projector(2, 0)}, {scalar(1.0)}), Error);
    EXPECT_THROW(DiscreteEstimator({projector(2, 0), projector(2, 1)}, {scalar(1.0)}), Error);
    EXPECT_THROW(DiscreteEstimator({projector(2, 0) * 1.5, projector(2, 1) - projector(2, 0) * 0.5},
                                   {scalar(1.0), scalar(0.0)}),
                 Error);
    EXPECT_THROW(DiscreteEstimator({projector(2, 0), projector(2, 1)}, {scalar(1.0), v2(0.0, 1.0)}),
                 Error);
}

TEST(DiscreteEstimator, SigmaZMoments) {
    const DiscreteEstimator pi = sigma_z_measurement();
    const DensityOperator rho = qubit::bloch_to_density(qubit::BlochVector(qubit::Vec3(0.0, 0.0, 0.5)));
    const RVector p = outcome_probabilities(rho, pi);
    EXPECT_NEAR(p[0], 0.75, 1e-15);
    EXPECT_NEAR(p[1], 0.25, 1e-15);
    const Moments m = estimator_moments(rho, pi, scalar(0.5));
    EXPECT_NEAR(m.mean[0], 0.5, 1e-15);
    EXPECT_NEAR(m.mse(0, 0), 0.75, 1e-15);
    EXPECT_LT(hs_distance(pi.observables()[0], pauli(2)), 1e-15);
}

TEST(LocalUnbiasedness, ProjectiveMeasurementOnDiagonalModel) {
    // F^i are diagonal, so measuring in the computational basis with values
    // f^i(w) = delta_iw is efficient everywhere.
    const ParametricModel m = make_model("quasi-exp(d=3,n=2)");
    const DiscreteEstimator pi({projector(3, 0), projector(3, 1), projector(3, 2)},
                               {v2(1.0, 0.0), v2(0.0, 1.0), v2(0.0, 0.0)});
    for (const RVector &xi : domain_grid(m, 3)) {
        EXPECT_TRUE(check_locally_unbiased(m, xi, pi, 1e-9));
        EXPECT_LT(cr_gap(m, xi, pi).norm(), 1e-9);
    }
}

TEST(LocalUnbiasedness, GapThrowsWhenBiased) {
    const ParametricModel m = make_model("bloch-full");
    const DiscreteEstimator pi({projector(2, 0), projector(2, 1)},
                               {RVector::Zero(3), RVector::Zero(3)});
    EXPECT_FALSE(check_locally_unbiased(m, RVector::Zero(3), pi, 1e-8));
    try {
        (void)cr_gap(m, RVector::Zero(3), pi);
        FAIL() << "expected NotLocallyUnbiased";
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotLocallyUnbiased);
    }
}

TEST(RandomEstimator, LocallyUnbiasedWithNonnegativeGap) {
    const ParametricModel m = make_model("bloch-ellipsoid(c=0.3)");
    CounterRng rng(51);
    const RVector xi = v2(0.2, -0.3);
    for (int t = 0; t < 10; ++t) {
        const DiscreteEstimator pi = random_locally_unbiased_estimator(m, xi, rng);
        const UnbiasednessResidual r = local_unbiasedness_residual(m, xi, pi);
        EXPECT_LT(r.mean, 1e-10);
        EXPECT_LT(r.derivative, 1e-10);
        const RMatrix gap = cr_gap(m, xi, pi);
        EXPECT_GT(Eigen::SelfAdjointEigenSolver<RMatrix>(gap).eigenvalues().minCoeff(), -1e-10);
    }
}

TEST(RandomizedEstimator, VarianceIdentity) {
    const ParametricModel m = make_model("bloch-full");
    const RVector xi = (RVector(3) << 0.1, 0.2, -0.15).finished();
    const FisherMatrix g = fisher_matrix(m, xi);
    const RMatrix u = (RMatrix(3, 3) << 1, 0, 0, 1, 1, 0, 0, 1, 2).finished();
    const RVector p = (RVector(3) << 0.5, 0.3, 0.2).finished();
    // gamma_l chosen with sum_l p_l gamma_l = xi
    RMatrix gamma(3, 3);
    gamma.row(0) = xi.transpose() + RVector::Constant(3, 0.1).transpose();
    gamma.row(1) = xi.transpose() + (RVector(3) << -0.2, 0.1, 0.0).finished().transpose();
    gamma.row(2) = (xi.transpose() - 0.5 * gamma.row(0) - 0.3 * gamma.row(1)) / 0.2;
    const DiscreteEstimator pi = build_local_random_estimator(m, xi, u, p, gamma);
    EXPECT_TRUE(check_locally_unbiased(m, xi, pi, 1e-10));
    const RMatrix v = estimator_moments(m.state(xi), pi, xi).mse;
    for (std::size_t k = 0; k < 3; ++k) {
        const RVector uk = u.row(static_cast<Eigen::Index>(k)).transpose();
        EXPECT_NEAR(uk.dot(v * uk), local_random_variance(g, xi, u, p, gamma, k), 1e-10);
    }
    // gamma_l = xi leaves only the first term
    const RMatrix flat = xi.transpose().replicate(3, 1);
    const RVector u0 = u.row(0).transpose();
    EXPECT_NEAR(local_random_variance(g, xi, u, p, flat, 0), u0.dot(g.inverse() * u0) / p[0], 1e-12);

    RMatrix bad = gamma;
    bad(0, 0) += 1.0;
    EXPECT_THROW(build_local_random_estimator(m, xi, u, p, bad), Error);
}

TEST(Filtration, ProbabilitiesSumToOne) {
    const RVector p = filtration_probabilities(3, 0.1);
    EXPECT_NEAR(p[0], 0.9, 1e-15);
    EXPECT_NEAR(p[1], 0.05, 1e-15);
    EXPECT_NEAR(p.sum(), 1.0, 1e-15);
    EXPECT_NEAR(filtration_probabilities(1, 0.1)[0], 1.0, 1e-15);
    EXPECT_THROW(filtration_probabilities(2, 1.0), Error);
}

TEST(Filtration, StateIndependentAndApproachesBound) {
    const auto m = std::make_shared<const ParametricModel>(make_model("bloch-ellipsoid(c=0.3)"));
    const RMatrix u = RMatrix::Identity(2, 2);
    const std::vector<HermitianOperator> f = {pauli(0), pauli(1)};
    for (const RVector &xi : {v2(0.0, 0.0), v2(0.3, -0.2), v2(-0.5, 0.4)}) {
        const FisherMatrix g = fisher_matrix(*m, xi);
        const RVector u0 = u.row(0).transpose();
        const double bound = u0.dot(g.inverse() * u0);
        double prev_excess = 1e300;
        for (double eps : {0.1, 0.01, 0.001}) {
            const DiscreteEstimator pi = filtration_estimator(u, f, eps);
            EXPECT_TRUE(check_locally_unbiased(*m, xi, pi, 1e-10));
            const double var = u0.dot(estimator_moments(m->state(xi), pi, xi).mse * u0);
            EXPECT_NEAR(var, filtration_variance(g, xi, u0, eps), 1e-10);
            const double excess = var - bound;
            EXPECT_GE(excess, -1e-12);
            EXPECT_LT(excess, prev_excess);
            prev_excess = excess;
        }
        EXPECT_LT(prev_excess, 1e-2);
    }
}

TEST(Filtration, BuildUsesSchedule) {
    FiltrationSpec spec;
    spec.model = std::make_shared<const ParametricModel>(make_model("bloch-ellipsoid(c=0.3)"));
    spec.u_basis = RMatrix::Identity(2, 2);
    spec.f_ops = {pauli(0), pauli(1)};
    EXPECT_EQ(build_filtration(spec).size(), 5u);
    spec.f_ops.pop_back();
    EXPECT_THROW(spec.validate(), Error);
}

TEST(ScalarEstimation, EfficientAtPoint) {
    const ParametricModel m = make_model("bloch-full");
    const RVector xi = (RVector(3) << 0.2, -0.1, 0.3).finished();
    const RVector grad = (RVector(3) << 2 * xi[0], 0.0, 1.0).finished();
    const double f = xi[0] * xi[0] + xi[2];
    const HermitianOperator op = scalar_efficient_estimator(m, xi, f, grad);
    const DensityOperator rho = m.state(xi);
    EXPECT_NEAR(expectation(rho, op), f, 1e-12);
    const double var = variance(rho, op);
    EXPECT_NEAR(var, scalar_cr_bound(m, xi, grad), 1e-12);
}

TEST(ScalarEstimation, FunctionSpaceDimension) {
    CounterRng rng(52);
    const ParametricModel full = make_model("bloch-full");
    EXPECT_EQ(efficient_function_space_dim(full, domain_samples(full, 12, rng)), 4u);
    const ParametricModel band = make_model("latitude-band(R=0.8)");
    EXPECT_EQ(efficient_function_space_dim(band, domain_samples(band, 12, rng)), 1u);
}

TEST(MonteCarlo, DeterministicAndConsistent) {
    const DiscreteEstimator pi = sigma_z_measurement();
    const DensityOperator rho = qubit::bloch_to_density(qubit::BlochVector(qubit::Vec3(0.0, 0.0, 0.5)));
    const MonteCarloMoments a = monte_carlo_moments(rho, pi, 50000, 7, scalar(0.5));
    const MonteCarloMoments b = monte_carlo_moments(rho, pi, 50000, 7, scalar(0.5));
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_EQ(a.counts[0] + a.counts[1], 50000u);
    EXPECT_LT(std::abs(a.mean[0] - 0.5), 4.0 * a.stderr_mean[0]);
    EXPECT_LT(std::abs(a.mse(0, 0) - 0.75), 4.0 * a.stderr_mse(0, 0));
    const MonteCarloMoments c = monte_carlo_moments(rho, pi, 50000, 8, scalar(0.5));
    EXPECT_NE(a.counts, c.counts);

    const ScalarEstimate q = quadratic_form_estimate(pi, a.counts, scalar(0.5), scalar(1.0));
    EXPECT_NEAR(q.value, a.mse(0, 0), 1e-12);
    EXPECT_THROW(monte_carlo_moments(rho, pi, 0, 7, scalar(0.5)), Error);
}

TEST(RandomPovm, IsComplete) {
    CounterRng rng(53);
    const auto els = random_povm(3, 5, rng);
    ASSERT_EQ(els.size(), 5u);
    HermitianOperator sum = HermitianOperator::zero(3);
    for (const auto &e : els) {
        sum = sum + e;
        EXPECT_GT(eigh(e).values.minCoeff(), 0.0);
    }
    EXPECT_LT(hs_distance(sum, HermitianOperator::identity(3)), 1e-10);
}

} // namespace
} // namespace qsld
