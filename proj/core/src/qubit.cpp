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

#include "qsld/qubit.hpp"

#include <cmath>

#include "qsld/error.hpp"

namespace qsld::qubit {

BlochVector::BlochVector(const Vec3 &r) : r_(r) {
    if (!(r.norm() <= 1.0 - 1e-10)) {
        throw Error(ErrorKind::OutsideDomain, "Bloch vector must satisfy |r| < 1");
    }
}

HermitianOperator dot_sigma(const Vec3 &a) {
    return pauli(0) * a[0] + pauli(1) * a[1] + pauli(2) * a[2];
}

DensityOperator bloch_to_density(const BlochVector &r) {
    return DensityOperator((HermitianOperator::identity(2) + dot_sigma(r.r())) * 0.5);
}

BlochVector density_to_bloch(const DensityOperator &rho) {
    if (rho.dim() != 2) {
        throw Error(ErrorKind::DimensionMismatch, "Bloch representation needs d = 2");
    }
    return BlochVector(
        Vec3(expectation(rho, pauli(0)), expectation(rho, pauli(1)), expectation(rho, pauli(2))));
}

QubitSld qubit_sld(const BlochVector &r, const Vec3 &x) {
    const Vec3 &rv = r.r();
    const double lambda = x.dot(rv) / (1.0 - rv.squaredNorm());
    return {x + lambda * rv, lambda};
}

HermitianOperator qubit_sld_operator(const BlochVector &r, const Vec3 &x) {
    const QubitSld s = qubit_sld(r, x);
    return dot_sigma(s.ell).shifted(-s.lambda);
}

GeodesicParams GeodesicParams::from_start(const BlochVector &r0, const Vec3 &u_in) {
    if (std::abs(u_in.norm() - 1.0) > 1e-12) {
        throw Error(ErrorKind::InvalidArgument, "geodesic direction u must be a unit vector");
    }
    const Vec3 u = u_in;
    const double a = r0.r().dot(u);
    Vec3 w = r0.r() - a * u;
    w -= w.dot(u) * u;
    Vec3 v;
    double b = 0.0;
    if (w.norm() > 1e-12) {
        b = w.norm();
        v = w / b;
    } else {
        // Any unit vector orthogonal to u.
        const Vec3 seed = std::abs(u[0]) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
        v = orthonormal_triple(u, seed)[1];
    }
    return {u, v, a, b, b / std::sqrt(1.0 - a * a)};
}

GeodesicParams GeodesicParams::from_axes(const Vec3 &u, const Vec3 &v, double a, double c) {
    if (std::abs(u.norm() - 1.0) > 1e-12 || std::abs(v.norm() - 1.0) > 1e-12 ||
        std::abs(u.dot(v)) > 1e-12) {
        throw Error(ErrorKind::InvalidArgument, "u, v must be orthonormal");
    }
    if (!(std::abs(c) < 1.0) || !(std::abs(a) < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "need |a| < 1 and |c| < 1");
    }
    return {u, v, a, c * std::sqrt(1.0 - a * a), c};
}

BlochVector qubit_geodesic_point(const GeodesicParams &params, double xi) {
    if (!(std::abs(xi) < 1.0)) {
        throw Error(ErrorKind::OutsideDomain, "geodesic coordinate must satisfy |xi| < 1");
    }
    return BlochVector(xi * params.u + params.c * std::sqrt(1.0 - xi * xi) * params.v);
}

double xi_to_theta(double a, double xi) {
    if (!(std::abs(xi) < 1.0) || !(std::abs(a) < 1.0)) {
        throw Error(ErrorKind::OutsideDomain, "xi_to_theta needs |a|, |xi| < 1");
    }
    return 0.5 * std::log((1.0 - a) * (1.0 + xi) / ((1.0 + a) * (1.0 - xi)));
}

double theta_to_xi(double a, double theta) {
    const double e = std::exp(2.0 * theta);
    return ((1.0 + a) * e - (1.0 - a)) / ((1.0 + a) * e + (1.0 - a));
}

BlochVector qubit_autoparallel_surface_point(const Vec3 &u1, const Vec3 &u2, const Vec3 &v,
                                             double c, const Eigen::Vector2d &xi) {
    const Eigen::Matrix3d frame = (Eigen::Matrix3d() << u1, u2, v).finished();
    if ((frame.transpose() * frame - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-12) {
        throw Error(ErrorKind::InvalidArgument, "u1, u2, v must be orthonormal");
    }
    if (!(std::abs(c) < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "surface needs |c| < 1");
    }
    const double s = xi.squaredNorm();
    if (!(std::sqrt(s) < 1.0 - 1e-8)) {
        throw Error(ErrorKind::OutsideDomain, "surface chart needs |xi| < 1");
    }
    return BlochVector(xi[0] * u1 + xi[1] * u2 + c * std::sqrt(1.0 - s) * v);
}

double qubit_torsion_identity_residual(const DensityOperator &rho, const HermitianOperator &a,
                                       const HermitianOperator &b) {
    if (rho.dim() != 2 || a.dim() != 2 || b.dim() != 2) {
        throw Error(ErrorKind::DimensionMismatch, "qubit torsion identity needs d = 2");
    }
    const HermitianOperator lhs = double_commutator(a, b, rho.op()) * 0.5;
    const double ea = expectation(rho, a);
    const double eb = expectation(rho, b);
    const double ta = a.trace();
    const double tb = b.trace();
    const HermitianOperator rhs = rho_sym(rho, b) * (ta - 2.0 * ea) -
                                  rho_sym(rho, a) * (tb - 2.0 * eb) +
                                  rho.op() * (tb * ea - ta * eb);
    return hs_distance(lhs, rhs);
}

std::array<Vec3, 3> orthonormal_triple(const Vec3 &first, const Vec3 &second) {
    auto orthogonalize = [](Vec3 x, const Vec3 &e) { return Vec3(x - x.dot(e) * e); };
    Vec3 e1 = first.normalized();
    Vec3 e2 = orthogonalize(second, e1);
    e2 = orthogonalize(e2, e1);
    if (e2.norm() < 1e-12) {
        throw Error(ErrorKind::InvalidArgument, "vectors are linearly dependent");
    }
    e2.normalize();
    Vec3 e3 = e1.cross(e2);
    e3 = orthogonalize(orthogonalize(e3, e1), e2).normalized();
    return {e1, e2, e3};
}

Eigen::Matrix3d bloch_fisher(const BlochVector &r) {
    const Vec3 &rv = r.r();
    return Eigen::Matrix3d::Identity() + rv * rv.transpose() / (1.0 - rv.squaredNorm());
}

} // namespace qsld::qubit
