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
#include <complex>

#include "qsld/autoparallel.hpp"
#include "qsld/catalog.hpp"
#include "qsld/error.hpp"
#include "qsld/random.hpp"

namespace qsld {
namespace {

RVector v2(double a, double b) { return (RVector(2) << a, b).finished(); }

TEST(AutoparallelCheck, EllipsoidPasses) {
    const ParametricModel m = make_model("bloch-ellipsoid(c=0.3)");
    const AutoparallelVerdict v = check_e_autoparallel_m_affine(m, domain_grid(m, 5), 1e-8);
    EXPECT_TRUE(v.verdict);
    EXPECT_LT(v.max_pairwise, 1e-12);
    EXPECT_FALSE(v.witness.has_value());
    ASSERT_EQ(v.certificate.observables.size(), 2u);
    EXPECT_EQ(v.certificate.grid.size(), 25u);
    // F^1 = sx, F^2 = sy
    EXPECT_LT(hs_distance(v.certificate.observables[0], pauli(0)), 1e-12);
    EXPECT_LT(hs_distance(v.certificate.observables[1], pauli(1)), 1e-12);
}

TEST(AutoparallelCheck, LatitudeBandFailsWithWitness) {
    const ParametricModel m = make_model("latitude-band(R=0.8)");
    const AutoparallelVerdict v = check_e_autoparallel_m_affine(m, domain_grid(m, 5), 1e-8);
    EXPECT_FALSE(v.verdict);
    ASSERT_TRUE(v.witness.has_value());
    EXPECT_DOUBLE_EQ(v.witness->distance, v.max_pairwise);
    EXPECT_GT(v.max_pairwise, 1.0);
}

TEST(AutoparallelCheck, RejectsBadArguments) {
    const ParametricModel m = make_model("bloch-full");
    EXPECT_THROW(check_e_autoparallel_m_affine(m, {domain_center(m)}, 1e-8), Error);
    EXPECT_THROW(check_e_autoparallel_m_affine(m, domain_grid(m, 2), 0.0), Error);
}

ParametricModel reparametrize(const ParametricModel &base, const RMatrix &a, const RVector &b,
                              std::vector<Interval> domain) {
    const RMatrix inv = a.inverse();
    return ParametricModel(base.hilbert_dim(), std::move(domain),
                           [base, inv, b](const RVector &eta) { return base.state(inv * (eta - b)); });
}

TEST(AutoparallelCheck, AffineReparametrizationKeepsVerdict) {
    const ParametricModel m = make_model("bloch-ellipsoid(c=0.3)");
    const RMatrix a = (RMatrix(2, 2) << 2.0, 1.0, 0.0, 1.0).finished();
    const ParametricModel r = reparametrize(m, a, v2(0.1, 0.0), {{-0.5, 0.5}, {-0.5, 0.5}});
    const AutoparallelVerdict v = check_e_autoparallel_m_affine(r, domain_grid(r, 4), 1e-7);
    EXPECT_TRUE(v.verdict) << v.max_pairwise;
    // F_eta = A F_xi + b I
    EXPECT_LT(hs_distance(v.certificate.observables[0],
                          pauli(0) * 2.0 + pauli(1) + HermitianOperator::identity(2) * 0.1),
              1e-7);
}

TEST(AutoparallelCheck, NonAffineReparametrizationFails) {
    const ParametricModel m = make_model("bloch-ellipsoid(c=0.3)");
    const ParametricModel r(2, {{-0.5, 0.5}, {-0.5, 0.5}}, [m](const RVector &eta) {
        return m.state(v2(eta[0] + 0.5 * eta[0] * eta[0], eta[1]));
    });
    EXPECT_FALSE(check_e_autoparallel_m_affine(r, domain_grid(r, 4), 1e-7).verdict);
}

TEST(Involutivity, FullSpaceIsInvolutive) {
    std::vector<HermitianOperator> ops = gell_mann(3);
    ops.push_back(HermitianOperator::identity(3));
    const InvolutivityResult r =
        involutivity_check(OperatorSubspace(3, ops), default_state_sample(3, 10, 5), 1e-10);
    EXPECT_TRUE(r.involutive);
    EXPECT_EQ(r.states_checked, 10u);
    EXPECT_FALSE(r.witness.has_value());
}

TEST(Involutivity, RealSubspaceQubitYesQutritNo) {
    EXPECT_TRUE(involutivity_check(real_subspace(CMatrix::Identity(2, 2)),
                                   default_state_sample(2, 10, 6), 1e-10)
                    .involutive);
    const InvolutivityResult r3 = involutivity_check(real_subspace(CMatrix::Identity(3, 3)),
                                                     default_state_sample(3, 10, 6), 1e-10);
    EXPECT_FALSE(r3.involutive);
    ASSERT_TRUE(r3.witness.has_value());
    EXPECT_GT(r3.worst_residual, 1e-6);
}

TEST(Involutivity, SampleIsDeterministic) {
    const auto a = default_state_sample(3, 4, 77);
    const auto b = default_state_sample(3, 4, 77);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(hs_distance(a[i].op(), b[i].op()), 0.0);
    }
}

TEST(RealSubspace, DimensionAndIdentity) {
    CounterRng rng(41);
    for (std::size_t d = 2; d <= 5; ++d) {
        const OperatorSubspace s = real_subspace(random_unitary(d, rng));
        EXPECT_EQ(s.dimension(), d * (d + 1) / 2);
        EXPECT_TRUE(s.includes_identity());
    }
    EXPECT_THROW(real_subspace(CMatrix::Ones(2, 2)), Error);
}

TEST(RealSubspace, ETransportStaysInside) {
    CounterRng rng(42);
    const CMatrix basis = random_unitary(3, rng);
    const OperatorSubspace s = real_subspace(basis);
    const auto rho = std::make_shared<const DensityOperator>(random_state(3, rng));
    const HermitianOperator l = s.basis()[1] + s.basis()[4] * 0.5;
    const TangentVector x = TangentVector::from_sld(rho, l.shifted(-expectation(*rho, l)));
    for (int t = 0; t < 5; ++t) {
        const auto sigma = std::make_shared<const DensityOperator>(random_state(3, rng));
        EXPECT_TRUE(subspace_membership(s, e_transport(x, sigma).sld(), 1e-10).is_member);
    }
}

TEST(Counterexample, FrozenResidualsAndMonotone) {
    EXPECT_NEAR(counterexample_dim_ge3(0.05, 3).residual, 0.033302127210094, 1e-10);
    EXPECT_NEAR(counterexample_dim_ge3(0.1, 3).residual, 0.066418064184896, 1e-10);
    EXPECT_NEAR(counterexample_dim_ge3(0.05, 4).residual, 0.02497659540757, 1e-10);
    EXPECT_NEAR(counterexample_dim_ge3(0.1, 4).residual, 0.049813548138672, 1e-10);
    double prev = 1.0;
    for (double eps = 0.2; eps > 1e-3; eps /= 2.0) {
        const double r = counterexample_dim_ge3(eps, 3).residual;
        EXPECT_GT(r, 0.0);
        EXPECT_LT(r, prev);
        prev = r;
    }
    EXPECT_THROW(counterexample_dim_ge3(0.05, 2), Error);
}

TEST(QuasiExponential, DiagonalFrozenValue) {
    const DensityOperator p(HermitianOperator::diagonal((RVector(3) << 0.5, 0.3, 0.2).finished()));
    std::vector<HermitianOperator> f;
    for (int i = 0; i < 2; ++i) {
        RVector e = RVector::Zero(3);
        e[i] = 1.0;
        f.push_back(HermitianOperator::diagonal(e));
    }
    const DensityOperator rho = quasi_exponential_state(p, f, v2(0.4, -0.3));
    const RVector diag = rho.op().matrix().diagonal().real();
    EXPECT_NEAR(diag[0], 0.6385373099649, 1e-12);
    EXPECT_NEAR(diag[1], 0.190252946430642, 1e-12);
    EXPECT_NEAR(diag[2], 0.171209743604458, 1e-12);
}

TEST(QuasiExponential, RejectsNonCommuting) {
    EXPECT_THROW(QuasiExponentialFamily(DensityOperator::maximally_mixed(2), {pauli(0), pauli(2)}), Error);
    EXPECT_THROW(QuasiExponentialFamily(DensityOperator::maximally_mixed(2),
                                        {HermitianOperator::identity(2)}),
                 Error);
}

TEST(QuasiExponential, NewtonInvertsAndJacobianIsCovariance) {
    const auto [fam_p, fam_f] = [] {
        std::vector<HermitianOperator> f;
        for (int i = 0; i < 2; ++i) {
            RVector e = RVector::Zero(3);
            e[i] = 1.0;
            f.push_back(HermitianOperator::diagonal(e));
        }
        return std::pair{DensityOperator::maximally_mixed(3), f};
    }();
    const QuasiExponentialFamily fam(fam_p, fam_f);
    const RVector theta = v2(0.3, -0.5);
    const RVector xi = fam.expectation_at_theta(theta);
    EXPECT_LT((fam.theta_from_expectation(xi) - theta).norm(), 1e-10);

    const double h = 1e-6;
    RMatrix fd(2, 2);
    for (int j = 0; j < 2; ++j) {
        RVector tp = theta;
        RVector tm = theta;
        tp[j] += h;
        tm[j] -= h;
        fd.col(j) = (fam.expectation_at_theta(tp) - fam.expectation_at_theta(tm)) / (2 * h);
    }
    EXPECT_LT((fd - fam.jacobian_at_theta(theta)).norm(), 1e-8);
    EXPECT_THROW(fam.theta_from_expectation(v2(0.9, 0.9)), Error);
}

TEST(QuasiExponential, ModelIsAutoparallel) {
    const ParametricModel m = make_model("quasi-exp(d=3,n=2)");
    const ParametricModel fd = m.finite_difference_only();
    const RVector xi = domain_center(m);
    const auto a = m.partials(xi);
    const auto b = fd.partials(xi);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_LT(hs_distance(a[i], b[i]), 1e-8);
    }
    EXPECT_TRUE(check_e_autoparallel_m_affine(m, domain_grid(m, 4), 1e-8).verdict);
}

TEST(ParallelFields, DimensionCounts) {
    CounterRng rng(43);
    for (const auto &[spec, expected] :
         std::vector<std::pair<std::string, std::size_t>>{
             {"bloch-full", 3}, {"bloch-ellipsoid(c=0.3)", 2}, {"latitude-band(R=0.8)", 0}}) {
        const ParametricModel m = make_model(spec);
        const ParallelFieldDimension r = parallel_field_dimension(m, domain_samples(m, 12, rng));
        EXPECT_EQ(r.dimension, expected) << spec;
        EXPECT_FALSE(r.upper_bound_only);
    }
    const ParametricModel m = make_model("latitude-band(R=0.8)");
    EXPECT_TRUE(parallel_field_dimension(m, domain_samples(m, 2, rng)).upper_bound_only);
}

} // namespace
} // namespace qsld
