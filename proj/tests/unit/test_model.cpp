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
#include "qsld/model.hpp"
#include "qsld/qubit.hpp"
#include "qsld/random.hpp"

namespace qsld {
namespace {

using qubit::Vec3;

ParametricModel bloch() { return make_model("bloch-full"); }

RVector v3(double a, double b, double c) { return (RVector(3) << a, b, c).finished(); }

std::shared_ptr<const DensityOperator> shared(DensityOperator rho) {
    return std::make_shared<const DensityOperator>(std::move(rho));
}

TEST(ParametricModel, DomainChecks) {
    const ParametricModel m = bloch();
    EXPECT_TRUE(m.contains(v3(0.1, 0.2, 0.3)));
    EXPECT_FALSE(m.contains(v3(0.6, 0.0, 0.0)));
    EXPECT_NEAR(m.distance_to_boundary(v3(0.5, 0.0, 0.0)), 0.05, 1e-15);
    try {
        (void)m.state(v3(0.6, 0.0, 0.0));
        FAIL() << "expected OutsideDomain";
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::OutsideDomain);
    }
}

TEST(ParametricModel, FiniteDifferencesMatchAnalytic) {
    const ParametricModel m = make_model("bloch-ellipsoid(c=0.3)");
    const ParametricModel fd = m.finite_difference_only();
    EXPECT_FALSE(fd.has_analytic_partials());
    const RVector xi = (RVector(2) << 0.2, -0.4).finished();
    const auto a = m.partials(xi);
    const auto b = fd.partials(xi);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_LT(hs_distance(a[i], b[i]), 1e-9);
        EXPECT_NEAR(b[i].trace(), 0.0, 1e-15);
    }
}

TEST(TangentBasis, QubitExamples) {
    const auto at = tangent_basis(bloch(), v3(0.0, 0.0, 0.5));
    EXPECT_LT(hs_distance(at[2].m_rep(), pauli(2) * 0.5), 1e-15);
    // ell = (0, 0, 4/3), lambda = 2/3
    const HermitianOperator expected =
        HermitianOperator::diagonal((RVector(2) << 2.0 / 3.0, -2.0).finished());
    EXPECT_LT(hs_distance(at[2].sld(), expected), 1e-13);

    const auto origin = tangent_basis(bloch(), v3(0.0, 0.0, 0.0));
    EXPECT_LT(hs_distance(origin[0].sld(), pauli(0)), 1e-14);
}

TEST(TangentBasis, DuplicatedCoordinateIsSingular) {
    const ParametricModel dup(
        2, {{-0.5, 0.5}, {-0.5, 0.5}},
        [](const RVector &xi) {
            return qubit::bloch_to_density(qubit::BlochVector(Vec3(0.0, 0.0, 0.5 * (xi[0] + xi[1]))));
        },
        [](const RVector &) {
            return std::vector<HermitianOperator>{pauli(2) * 0.25, pauli(2) * 0.25};
        });
    try {
        (void)fisher_matrix(dup, (RVector(2) << 0.1, 0.1).finished());
        FAIL() << "expected SingularModel";
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::SingularModel);
    }
}

TEST(TangentVector, Invariants) {
    const auto rho = shared(qubit::bloch_to_density(qubit::BlochVector(Vec3(0.2, -0.1, 0.4))));
    const TangentVector x = TangentVector::from_m_rep(rho, pauli(0) * 0.5);
    EXPECT_LT(hs_distance(rho_sym(*rho, x.sld()), x.m_rep()), 1e-12);
    EXPECT_NEAR(expectation(*rho, x.sld()), 0.0, 1e-12);
    EXPECT_THROW(TangentVector::from_m_rep(rho, HermitianOperator::identity(2)), Error);
    EXPECT_THROW(TangentVector::from_sld(rho, HermitianOperator::identity(2)), Error);
}

TEST(FisherMatrix, QubitExamples) {
    EXPECT_LT((fisher_matrix(bloch(), v3(0, 0, 0)).matrix() - RMatrix::Identity(3, 3)).norm(), 1e-14);
    const RMatrix expected = (RVector(3) << 4.0 / 3.0, 1.0, 1.0).finished().asDiagonal();
    EXPECT_LT((fisher_matrix(bloch(), v3(0.5, 0, 0)).matrix() - expected).norm(), 1e-13);
}

TEST(FisherMatrix, RejectsNonPositive) {
    EXPECT_THROW(FisherMatrix((RMatrix(2, 2) << 1.0, 1.0, 1.0, 1.0).finished()), Error);
}

TEST(Transport, ETransportExample) {
    const auto half = shared(DensityOperator::maximally_mixed(2));
    const auto sigma = shared(qubit::bloch_to_density(qubit::BlochVector(Vec3(0, 0, 0.5))));
    const TangentVector x = TangentVector::from_sld(half, pauli(2));
    const TangentVector moved = e_transport(x, sigma);
    EXPECT_LT(hs_distance(moved.sld(), pauli(2).shifted(-0.5)), 1e-15);
    EXPECT_LT(hs_distance(rho_sym(*sigma, moved.sld()), moved.m_rep()), 1e-15);
    EXPECT_LT(hs_distance(e_transport(x, half).sld(), x.sld()), 1e-15);
}

TEST(Transport, CompositionAndInverse) {
    CounterRng rng(21);
    const auto rho = shared(random_state(3, rng));
    const auto sigma = shared(random_state(3, rng));
    const auto tau = shared(random_state(3, rng));
    HermitianOperator m = random_hermitian(3, rng);
    m = m.shifted(-m.trace() / 3.0);
    const TangentVector x = TangentVector::from_m_rep(rho, m);
    EXPECT_LT(hs_distance(e_transport(e_transport(x, sigma), tau).sld(), e_transport(x, tau).sld()),
              1e-12);
    EXPECT_LT(hs_distance(e_transport(e_transport(x, sigma), rho).sld(), x.sld()), 1e-12);
    EXPECT_LT(hs_distance(m_transport(x, sigma).m_rep(), x.m_rep()), 1e-15);
}

TEST(Transport, DualityKeepsPairingConstant) {
    // <L of e-transported X, m_rep of m-transported Y> = Tr(m_Y L_X) - <L_X>_sigma Tr(m_Y)
    // and Tr(m_Y) = 0, so the pairing does not depend on sigma.
    CounterRng rng(22);
    const auto rho = shared(random_state(3, rng));
    HermitianOperator mx = random_hermitian(3, rng);
    HermitianOperator my = random_hermitian(3, rng);
    mx = mx.shifted(-mx.trace() / 3.0);
    my = my.shifted(-my.trace() / 3.0);
    const TangentVector x = TangentVector::from_m_rep(rho, mx);
    const TangentVector y = TangentVector::from_m_rep(rho, my);
    const double at_rho = hs_inner(x.sld(), y.m_rep());
    for (int t = 0; t < 5; ++t) {
        const auto sigma = shared(random_state(3, rng));
        EXPECT_NEAR(hs_inner(e_transport(x, sigma).sld(), m_transport(y, sigma).m_rep()), at_rho, 1e-12);
    }
}

TEST(CovariantDerivative, TangentToS) {
    const ParametricModel m = bloch();
    const RVector xi = v3(0.2, -0.3, 0.1);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            const TangentVector w = e_covariant_derivative(m, xi, i, j);
            EXPECT_NEAR(w.m_rep().trace(), 0.0, 1e-9);
            EXPECT_NEAR(expectation(w.base(), w.sld()), 0.0, 5e-6);
        }
    }
}

TEST(CovariantDerivative, QubitClosedForm) {
    // d_1 L_1 + g_11 I at r = (0.3, 0, 0), frozen from an independent
    // finite-difference evaluation of the Lyapunov solution.
    const TangentVector w = e_covariant_derivative(bloch(), v3(0.3, 0.0, 0.0), 0, 0);
    const HermitianOperator expected = pauli(0) * 0.724550175285055 +
                                       HermitianOperator::identity(2) * -0.217365052752212;
    EXPECT_LT(hs_distance(w.sld(), expected), 1e-8);
    // at r = 0 the derivative vanishes: d_1 L_1 = -I, g_11 = 1
    EXPECT_LT(e_covariant_derivative(bloch(), v3(0, 0, 0), 0, 0).sld().hs_norm(), 1e-8);
}

TEST(CovariantDerivative, StepUnderflowAtBoundary) {
    try {
        (void)e_covariant_derivative(bloch(), v3(0.55 - 1e-9, 0.0, 0.0), 0, 0);
        FAIL() << "expected OutsideDomain";
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::OutsideDomain);
    }
}

TEST(Duality, MetricDerivativeSplits) {
    // d_i g_jk = g(nabla^e_i d_j, d_k) + g(d_j, nabla^m_i d_k); on the Bloch
    // chart nabla^m_i d_k = 0 since the m-representations are constant.
    const ParametricModel m = bloch();
    const RVector xi = v3(0.15, -0.2, 0.3);
    const double h = 1e-5;
    for (std::size_t i = 0; i < 3; ++i) {
        RVector plus = xi;
        RVector minus = xi;
        plus[static_cast<Eigen::Index>(i)] += h;
        minus[static_cast<Eigen::Index>(i)] -= h;
        const RMatrix dg = (fisher_matrix(m, plus).matrix() - fisher_matrix(m, minus).matrix()) / (2 * h);
        const auto basis = tangent_basis(m, xi);
        for (std::size_t j = 0; j < 3; ++j) {
            const TangentVector w = e_covariant_derivative(m, xi, i, j);
            for (std::size_t k = 0; k < 3; ++k) {
                EXPECT_NEAR(dg(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)),
                            hs_inner(w.m_rep(), basis[k].sld()), 1e-5);
            }
        }
    }
}

TEST(Torsion, Examples) {
    const auto rho = shared(qubit::bloch_to_density(qubit::BlochVector(Vec3(0.5, 0.0, 0.0))));
    const TangentVector x = TangentVector::from_sld(rho, pauli(0).shifted(-0.5));
    const TangentVector y = TangentVector::from_sld(rho, pauli(1));
    // [[sx, sy], rho] / 4 = -sy / 4 at r = (0.5, 0, 0)
    EXPECT_LT(hs_distance(torsion(rho, x, y).m_rep(), pauli(1) * -0.25), 1e-15);
    EXPECT_LT(torsion(rho, x, x).m_rep().hs_norm(), 1e-15);
    EXPECT_LT(hs_distance(torsion(rho, x, y).m_rep(), -torsion(rho, y, x).m_rep()), 1e-15);

    const auto other = shared(DensityOperator::maximally_mixed(2));
    EXPECT_THROW(torsion(other, x, y), Error);
}

TEST(EGeodesic, Examples) {
    CounterRng rng(23);
    const DensityOperator rho0 = random_state(3, rng);
    const HermitianOperator f = random_hermitian(3, rng);
    EXPECT_LT(hs_distance(e_geodesic(rho0, f, 0.0).op(), rho0.op()), 1e-14);
    const DensityOperator moved = e_geodesic(rho0, f, 0.8);
    EXPECT_NEAR(moved.op().trace(), 1.0, 1e-12);
    EXPECT_GT(moved.min_eigenvalue(), 0.0);

    const DensityOperator q = e_geodesic(DensityOperator::maximally_mixed(2), pauli(2), 0.7);
    EXPECT_NEAR(expectation(q, pauli(2)), 0.604367777117163, 1e-14);
    EXPECT_NEAR(expectation(q, pauli(2)), std::tanh(0.7), 1e-14);
    EXPECT_THROW(e_geodesic(rho0, pauli(2).shifted(0.0) * 0.0 + HermitianOperator::identity(2), 1.0), Error);
    EXPECT_TRUE(geodesic_is_constant(HermitianOperator::identity(3) * 2.0));
    EXPECT_FALSE(geodesic_is_constant(f));
}

TEST(EGeodesic, OverflowGuard) {
    try {
        (void)e_geodesic(DensityOperator::maximally_mixed(2), pauli(2), 800.0);
        FAIL() << "expected Overflow";
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::Overflow);
    }
}

TEST(EGeodesic, VelocitySldIsCentredGenerator) {
    // d/dtheta rho_theta = rho_theta o (F - <F>)
    CounterRng rng(24);
    const DensityOperator rho0 = random_state(3, rng);
    const HermitianOperator f = random_hermitian(3, rng);
    const double th = 0.3;
    const double h = 1e-4;
    const HermitianOperator velocity =
        (e_geodesic(rho0, f, th + h).op() - e_geodesic(rho0, f, th - h).op()) * (0.5 / h);
    const DensityOperator at = e_geodesic(rho0, f, th);
    EXPECT_LT(hs_distance(solve_sld(at, velocity), f.shifted(-expectation(at, f))), 1e-6);
}

TEST(IidExtension, FisherAndDualSlds) {
    const ParametricModel m = make_model("bloch-ellipsoid(c=0.3)");
    const RVector xi = (RVector(2) << 0.25, -0.1).finished();
    const PointGeometry base = evaluate(m, xi);
    for (int n : {1, 2, 3}) {
        const PointGeometry ext = evaluate(iid_extension(m, n), xi);
        EXPECT_LT((ext.fisher.matrix() - n * base.fisher.matrix()).norm(), 1e-12);
        for (std::size_t i = 0; i < 2; ++i) {
            EXPECT_LT(hs_distance(ext.tangents[i].sld(), tensor_power_operator(base.tangents[i].sld(), n)), 1e-12);
            EXPECT_LT(hs_distance(ext.dual_slds[i],
                                  tensor_power_operator(base.dual_slds[i], n) * (1.0 / n)),
                      1e-12);
        }
    }
    EXPECT_THROW(iid_extension(m, 13), Error);
}

} // namespace
} // namespace qsld
