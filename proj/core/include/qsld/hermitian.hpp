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
 * Hermitian operators on a finite-dimensional Hilbert space, strictly
 * positive density operators, and the SLD (symmetrized) operator calculus
 * built on top of them.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace qsld {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPositivityTol = 1e-10;
inline constexpr double kTraceTol = 1e-12;
/// Largest Hilbert-space dimension accepted by tensor lifts.
inline constexpr std::size_t kMaxTensorDim = 4096;

class HermitianOperator {
  public:
    HermitianOperator() = default;

    /// Symmetrizes `m` to (m + m^dagger) / 2. `m` must be square.
    explicit HermitianOperator(const CMatrix &m);

    /// Like the constructor, but rejects input whose anti-Hermitian part
    /// exceeds `tol * max(1, |m|_HS)`. Used for untrusted input.
    static HermitianOperator checked(const CMatrix &m, double tol = 1e-9);

    static HermitianOperator identity(std::size_t dim);
    static HermitianOperator zero(std::size_t dim);
    static HermitianOperator diagonal(const RVector &diag);

    [[nodiscard]] std::size_t dim() const noexcept {
        return static_cast<std::size_t>(m_.rows());
    }
    [[nodiscard]] const CMatrix &matrix() const noexcept { return m_; }
    [[nodiscard]] double trace() const noexcept { return m_.trace().real(); }
    [[nodiscard]] double hs_norm() const noexcept { return m_.norm(); }
    /// Largest absolute eigenvalue.
    [[nodiscard]] double operator_norm() const;

    HermitianOperator &operator+=(const HermitianOperator &other);
    HermitianOperator &operator-=(const HermitianOperator &other);
    HermitianOperator &operator*=(double s);

    friend HermitianOperator operator+(HermitianOperator a,
                                       const HermitianOperator &b) {
        return a += b;
    }
    friend HermitianOperator operator-(HermitianOperator a,
                                       const HermitianOperator &b) {
        return a -= b;
    }
    friend HermitianOperator operator*(HermitianOperator a, double s) {
        return a *= s;
    }
    friend HermitianOperator operator*(double s, HermitianOperator a) {
        return a *= s;
    }
    friend HermitianOperator operator-(HermitianOperator a) { return a *= -1.0; }

    /// A + s I
    [[nodiscard]] HermitianOperator shifted(double s) const;

  private:
    CMatrix m_;
};

/// Eigendecomposition of a Hermitian operator, eigenvalues ascending.
struct Eigensystem {
    RVector values;
    CMatrix vectors;
};

Eigensystem eigh(const HermitianOperator &a);

/// A strictly positive, unit-trace Hermitian operator with its cached
/// eigendecomposition (eigenvalues descending).
class DensityOperator {
  public:
    /// Validates positivity (min eigenvalue > 1e-10) and unit trace (1e-12).
    explicit DensityOperator(HermitianOperator op);

    /// Divides by the trace before validating.
    static DensityOperator normalized(const HermitianOperator &op);
    static DensityOperator maximally_mixed(std::size_t dim);

    [[nodiscard]] std::size_t dim() const noexcept { return op_.dim(); }
    [[nodiscard]] const HermitianOperator &op() const noexcept { return op_; }
    [[nodiscard]] const CMatrix &matrix() const noexcept { return op_.matrix(); }
    [[nodiscard]] const RVector &eigenvalues() const noexcept { return eigenvalues_; }
    [[nodiscard]] const CMatrix &eigenvectors() const noexcept { return eigenvectors_; }
    [[nodiscard]] double min_eigenvalue() const noexcept {
        return eigenvalues_[eigenvalues_.size() - 1];
    }

  private:
    HermitianOperator op_;
    RVector eigenvalues_;
    CMatrix eigenvectors_;
};

/// (AB + BA) / 2
HermitianOperator sym_product(const HermitianOperator &a, const HermitianOperator &b);

/// AB - BA (anti-Hermitian).
CMatrix commutator(const CMatrix &a, const CMatrix &b);

/// [[A, B], C]. Hermitian whenever A, B, C are.
HermitianOperator double_commutator(const HermitianOperator &a,
                                    const HermitianOperator &b,
                                    const HermitianOperator &c);

/// Hilbert-Schmidt inner product Re Tr(AB).
double hs_inner(const HermitianOperator &a, const HermitianOperator &b);
double hs_distance(const HermitianOperator &a, const HermitianOperator &b);

/// Tr(rho A)
double expectation(const DensityOperator &rho, const HermitianOperator &a);

/// <A, B>_rho = Re Tr(rho A B) = Tr(rho (A o B)).
double sld_inner(const DensityOperator &rho, const HermitianOperator &a,
                 const HermitianOperator &b);

/// rho o A
HermitianOperator rho_sym(const DensityOperator &rho, const HermitianOperator &a);

/// Unique L with rho o L = M, solved in the eigenbasis of rho.
HermitianOperator solve_sld(const DensityOperator &rho, const HermitianOperator &m);

/// <(A - <A>)^2>_rho
double variance(const DensityOperator &rho, const HermitianOperator &a);

/// exp(A) through the eigendecomposition. `shift` is subtracted from every
/// eigenvalue before exponentiating (use it to keep exponents bounded).
HermitianOperator exp_hermitian(const HermitianOperator &a, double shift = 0.0);

HermitianOperator kron(const HermitianOperator &a, const HermitianOperator &b);
CMatrix kron(const CMatrix &a, const CMatrix &b);

/// Sum over t of I (x) ... (x) A (x) ... (x) I with A in slot t (N slots).
HermitianOperator tensor_power_operator(const HermitianOperator &a, int n);

/// rho (x) rho (x) ... (N copies)
DensityOperator tensor_power_state(const DensityOperator &rho, int n);

/// Max over pairs of HS norm of [A_i, A_j].
double max_commutator_norm(const std::vector<HermitianOperator> &ops);

/// One eigenvalue cluster of a Hermitian operator and its spectral projector.
struct SpectralComponent {
    double value;
    HermitianOperator projector;
};

/// Spectral resolution with eigenvalues merged when closer than
/// `rel_tol * max(1, |A|_op)`.
std::vector<SpectralComponent> spectral_resolution(const HermitianOperator &a,
                                                   double rel_tol = 1e-9);

/// Pauli matrices sigma_x, sigma_y, sigma_z.
const HermitianOperator &pauli(int axis);

namespace detail {
void require_same_dim(std::size_t a, std::size_t b, const char *where);
}

} // namespace qsld
