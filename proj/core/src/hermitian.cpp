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

#include "qsld/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qsld/error.hpp"

namespace qsld {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::DimensionMismatch: return "dimension mismatch";
    case ErrorKind::NotHermitian: return "not Hermitian";
    case ErrorKind::NotPositive: return "not strictly positive";
    case ErrorKind::NotNormalized: return "not unit trace";
    case ErrorKind::IllConditioned: return "ill-conditioned";
    case ErrorKind::OutsideDomain: return "outside domain";
    case ErrorKind::SingularModel: return "singular model";
    case ErrorKind::DimensionGuard: return "dimension guard exceeded";
    case ErrorKind::NotCommuting: return "operators do not commute";
    case ErrorKind::NotUnitary: return "not unitary";
    case ErrorKind::NotLocallyUnbiased: return "not locally unbiased";
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::Overflow: return "overflow";
    }
    return "unknown";
}

namespace detail {
void require_same_dim(std::size_t a, std::size_t b, const char *where) {
    if (a != b) {
        throw Error(ErrorKind::DimensionMismatch,
                    std::string(where) + ": " + std::to_string(a) + " vs " +
                        std::to_string(b));
    }
}
} // namespace detail

using detail::require_same_dim;

HermitianOperator::HermitianOperator(const CMatrix &m) {
    if (m.rows() != m.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "operator matrix is not square");
    }
    m_ = 0.5 * (m + m.adjoint());
}

HermitianOperator HermitianOperator::checked(const CMatrix &m, double tol) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw Error(ErrorKind::DimensionMismatch, "operator matrix must be square and non-empty");
    }
    const double skew = (m - m.adjoint()).norm() * 0.5;
    if (skew > tol * std::max(1.0, m.norm())) {
        throw Error(ErrorKind::NotHermitian,
                    "anti-Hermitian part has norm " + std::to_string(skew));
    }
    return HermitianOperator(m);
}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    return HermitianOperator(CMatrix::Identity(d, d));
}

HermitianOperator HermitianOperator::zero(std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    return HermitianOperator(CMatrix::Zero(d, d));
}

HermitianOperator HermitianOperator::diagonal(const RVector &diag) {
    CMatrix m = CMatrix::Zero(diag.size(), diag.size());
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
        m(i, i) = diag[i];
    }
    return HermitianOperator(m);
}

double HermitianOperator::operator_norm() const {
    if (m_.size() == 0) {
        return 0.0;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

HermitianOperator &HermitianOperator::operator+=(const HermitianOperator &other) {
    require_same_dim(dim(), other.dim(), "operator+");
    m_ += other.m_;
    return *this;
}

HermitianOperator &HermitianOperator::operator-=(const HermitianOperator &other) {
    require_same_dim(dim(), other.dim(), "operator-");
    m_ -= other.m_;
    return *this;
}

HermitianOperator &HermitianOperator::operator*=(double s) {
    m_ *= s;
    return *this;
}

HermitianOperator HermitianOperator::shifted(double s) const {
    HermitianOperator out = *this;
    out.m_.diagonal().array() += s;
    return out;
}

Eigensystem eigh(const HermitianOperator &a) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a.matrix());
    if (es.info() != Eigen::Success) {
        throw Error(ErrorKind::IllConditioned, "eigendecomposition did not converge");
    }
    return {es.eigenvalues(), es.eigenvectors()};
}

DensityOperator::DensityOperator(HermitianOperator op) : op_(std::move(op)) {
    if (op_.dim() == 0) {
        throw Error(ErrorKind::DimensionMismatch, "density operator of dimension 0");
    }
    const double tr = op_.trace();
    if (std::abs(tr - 1.0) > kTraceTol) {
        throw Error(ErrorKind::NotNormalized, "trace is " + std::to_string(tr));
    }
    auto es = eigh(op_);
    const auto d = es.values.size();
    eigenvalues_ = es.values.reverse();
    eigenvectors_ = es.vectors.rowwise().reverse();
    if (eigenvalues_[d - 1] <= kPositivityTol) {
        throw Error(ErrorKind::NotPositive,
                    "minimum eigenvalue " + std::to_string(eigenvalues_[d - 1]));
    }
}

DensityOperator DensityOperator::normalized(const HermitianOperator &op) {
    const double tr = op.trace();
    if (!(tr > 0.0)) {
        throw Error(ErrorKind::NotPositive, "non-positive trace");
    }
    return DensityOperator(op * (1.0 / tr));
}

DensityOperator DensityOperator::maximally_mixed(std::size_t dim) {
    return DensityOperator(HermitianOperator::identity(dim) * (1.0 / static_cast<double>(dim)));
}

HermitianOperator sym_product(const HermitianOperator &a, const HermitianOperator &b) {
    require_same_dim(a.dim(), b.dim(), "sym_product");
    return HermitianOperator(0.5 * (a.matrix() * b.matrix() + b.matrix() * a.matrix()));
}

CMatrix commutator(const CMatrix &a, const CMatrix &b) {
    require_same_dim(static_cast<std::size_t>(a.rows()), static_cast<std::size_t>(b.rows()),
                     "commutator");
    return a * b - b * a;
}

HermitianOperator double_commutator(const HermitianOperator &a, const HermitianOperator &b,
                                    const HermitianOperator &c) {
    return HermitianOperator(commutator(commutator(a.matrix(), b.matrix()), c.matrix()));
}

double hs_inner(const HermitianOperator &a, const HermitianOperator &b) {
    require_same_dim(a.dim(), b.dim(), "hs_inner");
    // Re Tr(AB) = sum_jk Re(A_jk conj(B_jk)) for Hermitian B.
    return (a.matrix().array() * b.matrix().array().conjugate()).sum().real();
}

double hs_distance(const HermitianOperator &a, const HermitianOperator &b) {
    require_same_dim(a.dim(), b.dim(), "hs_distance");
    return (a.matrix() - b.matrix()).norm();
}

double expectation(const DensityOperator &rho, const HermitianOperator &a) {
    return hs_inner(rho.op(), a);
}

HermitianOperator rho_sym(const DensityOperator &rho, const HermitianOperator &a) {
    return sym_product(rho.op(), a);
}

double sld_inner(const DensityOperator &rho, const HermitianOperator &a,
                 const HermitianOperator &b) {
    require_same_dim(rho.dim(), a.dim(), "sld_inner");
    return hs_inner(rho_sym(rho, a), b);
}

HermitianOperator solve_sld(const DensityOperator &rho, const HermitianOperator &m) {
    require_same_dim(rho.dim(), m.dim(), "solve_sld");
    const auto &lam = rho.eigenvalues();
    const auto &u = rho.eigenvectors();
    const auto d = lam.size();
    if (2.0 * rho.min_eigenvalue() < 1e-12) {
        throw Error(ErrorKind::IllConditioned, "state is numerically singular");
    }
    CMatrix mt = u.adjoint() * m.matrix() * u;
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index k = 0; k < d; ++k) {
            mt(j, k) *= 2.0 / (lam[j] + lam[k]);
        }
    }
    return HermitianOperator(u * mt * u.adjoint());
}

double variance(const DensityOperator &rho, const HermitianOperator &a) {
    const HermitianOperator centred = a.shifted(-expectation(rho, a));
    return sld_inner(rho, centred, centred);
}

HermitianOperator exp_hermitian(const HermitianOperator &a, double shift) {
    auto es = eigh(a);
    RVector e = (es.values.array() - shift).exp();
    return HermitianOperator(es.vectors * e.asDiagonal() * es.vectors.adjoint());
}

CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

HermitianOperator kron(const HermitianOperator &a, const HermitianOperator &b) {
    return HermitianOperator(kron(a.matrix(), b.matrix()));
}

namespace {
std::size_t guarded_power(std::size_t d, int n) {
    if (n < 1) {
        throw Error(ErrorKind::InvalidArgument, "tensor power needs N >= 1");
    }
    std::size_t total = 1;
    for (int t = 0; t < n; ++t) {
        total *= d;
        if (total > kMaxTensorDim) {
            throw Error(ErrorKind::DimensionGuard,
                        "d^N exceeds " + std::to_string(kMaxTensorDim));
        }
    }
    return total;
}
} // namespace

HermitianOperator tensor_power_operator(const HermitianOperator &a, int n) {
    const std::size_t d = a.dim();
    guarded_power(d, n);
    const auto di = static_cast<Eigen::Index>(d);
    CMatrix sum;
    for (int t = 0; t < n; ++t) {
        CMatrix term = (t == 0) ? a.matrix() : CMatrix(CMatrix::Identity(di, di));
        for (int s = 1; s < n; ++s) {
            term = kron(term, (s == t) ? a.matrix() : CMatrix(CMatrix::Identity(di, di)));
        }
        if (t == 0) {
            sum = term;
        } else {
            sum += term;
        }
    }
    return HermitianOperator(sum);
}

DensityOperator tensor_power_state(const DensityOperator &rho, int n) {
    guarded_power(rho.dim(), n);
    CMatrix out = rho.matrix();
    for (int t = 1; t < n; ++t) {
        out = kron(out, rho.matrix());
    }
    return DensityOperator(HermitianOperator(out));
}

double max_commutator_norm(const std::vector<HermitianOperator> &ops) {
    double worst = 0.0;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        for (std::size_t j = i + 1; j < ops.size(); ++j) {
            worst = std::max(worst, commutator(ops[i].matrix(), ops[j].matrix()).norm());
        }
    }
    return worst;
}

std::vector<SpectralComponent> spectral_resolution(const HermitianOperator &a, double rel_tol) {
    auto es = eigh(a);
    const auto d = es.values.size();
    const double scale = std::max(1.0, es.values.cwiseAbs().maxCoeff());
    const double gap = rel_tol * scale;

    std::vector<SpectralComponent> out;
    Eigen::Index start = 0;
    while (start < d) {
        Eigen::Index stop = start + 1;
        while (stop < d && es.values[stop] - es.values[stop - 1] <= gap) {
            ++stop;
        }
        const auto block = es.vectors.middleCols(start, stop - start);
        const double mean = es.values.segment(start, stop - start).mean();
        out.push_back({mean, HermitianOperator(block * block.adjoint())});
        start = stop;
    }
    return out;
}

const HermitianOperator &pauli(int axis) {
    static const HermitianOperator paulis[3] = {
        HermitianOperator((CMatrix(2, 2) << 0, 1, 1, 0).finished()),
        HermitianOperator((CMatrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished()),
        HermitianOperator((CMatrix(2, 2) << 1, 0, 0, -1).finished()),
    };
    if (axis < 0 || axis > 2) {
        throw Error(ErrorKind::InvalidArgument, "Pauli axis must be 0, 1 or 2");
    }
    return paulis[axis];
}

} // namespace qsld
