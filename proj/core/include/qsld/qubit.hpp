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
 * Closed-form d = 2 formulas: Bloch parametrization, qubit SLDs, the
 * semi-ellipse e-geodesics and semi-ellipsoid e-autoparallel surfaces, and
 * the qubit torsion identity. These double as exact oracles for the general
 * d-dimensional routines.
 */

#pragma once

#include <array>
#include <iosfwd>

#include <Eigen/Dense>

#include "qsld/hermitian.hpp"

namespace qsld::qubit {

using Vec3 = Eigen::Vector3d;

/// Bloch vector r with |r| <= 1 - 1e-10.
class BlochVector {
  public:
    explicit BlochVector(const Vec3 &r);
    [[nodiscard]] const Vec3 &r() const noexcept { return r_; }

  private:
    Vec3 r_;
};

/// a . sigma
HermitianOperator dot_sigma(const Vec3 &a);

/// (I + r . sigma) / 2
DensityOperator bloch_to_density(const BlochVector &r);
/// r_i = Tr(rho sigma_i); throws unless d = 2.
BlochVector density_to_bloch(const DensityOperator &rho);

struct QubitSld {
    Vec3 ell;
    double lambda;
};

/// SLD of the tangent vector with m-representation (x . sigma) / 2 at rho_r:
/// L = ell . sigma - lambda I.
QubitSld qubit_sld(const BlochVector &r, const Vec3 &x);
HermitianOperator qubit_sld_operator(const BlochVector &r, const Vec3 &x);

/// Semi-ellipse description of the e-geodesic through rho_{r0} in
/// direction F = u . sigma.
struct GeodesicParams {
    Vec3 u;
    Vec3 v;
    double a;
    double b;
    double c;

    /// Derives v, a, b, c from r0 and a unit u. When r0 is parallel to u
    /// any unit v orthogonal to u is chosen (b = 0).
    static GeodesicParams from_start(const BlochVector &r0, const Vec3 &u);
    /// u, v orthonormal; |c| < 1; a in (-1, 1) is where r0 sits.
    static GeodesicParams from_axes(const Vec3 &u, const Vec3 &v, double a, double c);

    [[nodiscard]] Vec3 start() const { return a * u + b * v; }
};

/// xi u + c sqrt(1 - xi^2) v, |xi| < 1.
BlochVector qubit_geodesic_point(const GeodesicParams &params, double xi);

/// e-affine parameter for m-affine coordinate xi on the geodesic through a.
double xi_to_theta(double a, double xi);
double theta_to_xi(double a, double theta);

/// xi1 u1 + xi2 u2 + c sqrt(1 - |xi|^2) v, |xi| < 1 - 1e-8.
BlochVector qubit_autoparallel_surface_point(const Vec3 &u1, const Vec3 &u2, const Vec3 &v,
                                             double c, const Eigen::Vector2d &xi);

/// HS norm of the difference of the two sides of the qubit torsion identity
///   [[A,B],rho]/2 = (TrA - 2<A>)(rho o B) - (TrB - 2<B>)(rho o A)
///                   + ((TrB)<A> - (TrA)<B>) rho.
double qubit_torsion_identity_residual(const DensityOperator &rho, const HermitianOperator &a,
                                       const HermitianOperator &b);

/// Gram-Schmidt with one re-orthogonalization pass. Columns must be
/// linearly independent.
std::array<Vec3, 3> orthonormal_triple(const Vec3 &first, const Vec3 &second);

/// Fisher matrix of the Bloch chart, I + r r^T / (1 - |r|^2).
Eigen::Matrix3d bloch_fisher(const BlochVector &r);

} // namespace qsld::qubit
