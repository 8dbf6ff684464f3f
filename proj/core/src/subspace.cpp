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

#include "qsld/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qsld/error.hpp"

namespace qsld {

RVector realify(const HermitianOperator &a) {
    const auto d = static_cast<Eigen::Index>(a.dim());
    RVector v(d * d);
    const double root2 = std::sqrt(2.0);
    Eigen::Index idx = 0;
    for (Eigen::Index j = 0; j < d; ++j) {
        v[idx++] = a.matrix()(j, j).real();
    }
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index k = j + 1; k < d; ++k) {
            v[idx++] = root2 * a.matrix()(j, k).real();
            v[idx++] = root2 * a.matrix()(j, k).imag();
        }
    }
    return v;
}

HermitianOperator derealify(const RVector &v, std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    if (v.size() != d * d) {
        throw Error(ErrorKind::DimensionMismatch, "realified vector has wrong length");
    }
    CMatrix m = CMatrix::Zero(d, d);
    const double inv_root2 = 1.0 / std::sqrt(2.0);
    Eigen::Index idx = 0;
    for (Eigen::Index j = 0; j < d; ++j) {
        m(j, j) = v[idx++];
    }
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index k = j + 1; k < d; ++k) {
            const Complex z(v[idx] * inv_root2, v[idx + 1] * inv_root2);
            idx += 2;
            m(j, k) = z;
            m(k, j) = std::conj(z);
        }
    }
    return HermitianOperator(m);
}

OperatorSubspace::OperatorSubspace(std::size_t dim_ambient,
                                   const std::vector<HermitianOperator> &generators)
    : dim_ambient_(dim_ambient) {
    const auto d2 = static_cast<Eigen::Index>(dim_ambient * dim_ambient);
    frame_.resize(d2, 0);
    if (!generators.empty()) {
        RMatrix stack(d2, static_cast<Eigen::Index>(generators.size()));
        for (std::size_t g = 0; g < generators.size(); ++g) {
            detail::require_same_dim(generators[g].dim(), dim_ambient, "OperatorSubspace");
            stack.col(static_cast<Eigen::Index>(g)) = realify(generators[g]);
        }
        Eigen::JacobiSVD<RMatrix> svd(stack, Eigen::ComputeThinU);
        const auto &s = svd.singularValues();
        const double cutoff = (s.size() > 0 ? s[0] : 0.0) * 1e-10;
        Eigen::Index rank = 0;
        while (rank < s.size() && s[rank] > cutoff && s[rank] > 0.0) {
            ++rank;
        }
        frame_ = svd.matrixU().leftCols(rank);
    }
    basis_.reserve(static_cast<std::size_t>(frame_.cols()));
    for (Eigen::Index c = 0; c < frame_.cols(); ++c) {
        basis_.push_back(derealify(frame_.col(c), dim_ambient_));
    }
    const RVector id = realify(HermitianOperator::identity(dim_ambient_));
    const RVector resid = id - frame_ * (frame_.transpose() * id);
    includes_identity_ = resid.norm() <= 1e-9 * id.norm();
}

OperatorSubspace OperatorSubspace::with_identity() const {
    std::vector<HermitianOperator> gens = basis_;
    gens.push_back(HermitianOperator::identity(dim_ambient_));
    return OperatorSubspace(dim_ambient_, gens);
}

HermitianOperator OperatorSubspace::project(const HermitianOperator &a) const {
    detail::require_same_dim(a.dim(), dim_ambient_, "OperatorSubspace::project");
    const RVector v = realify(a);
    return derealify(frame_ * (frame_.transpose() * v), dim_ambient_);
}

Membership subspace_membership(const OperatorSubspace &v, const HermitianOperator &a, double tol) {
    detail::require_same_dim(a.dim(), v.dim_ambient(), "subspace_membership");
    const RVector x = realify(a);
    const double residual = (x - v.frame() * (v.frame().transpose() * x)).norm();
    return {residual <= tol * std::max(1.0, x.norm()), residual};
}

Intersection intersect_subspaces(const std::vector<RMatrix> &frames, double cutoff) {
    if (frames.empty()) {
        throw Error(ErrorKind::InvalidArgument, "intersection of zero subspaces");
    }
    const Eigen::Index m = frames.front().rows();
    RMatrix stack(m * static_cast<Eigen::Index>(frames.size()), m);
    for (std::size_t f = 0; f < frames.size(); ++f) {
        if (frames[f].rows() != m) {
            throw Error(ErrorKind::DimensionMismatch, "intersect_subspaces");
        }
        stack.middleRows(static_cast<Eigen::Index>(f) * m, m) =
            RMatrix::Identity(m, m) - frames[f] * frames[f].transpose();
    }
    Eigen::JacobiSVD<RMatrix> svd(stack, Eigen::ComputeThinV);
    const auto &s = svd.singularValues();
    Eigen::Index rank = 0;
    while (rank < s.size() && s[rank] > cutoff) {
        ++rank;
    }
    Intersection out;
    out.dimension = static_cast<std::size_t>(m - rank);
    out.frame = svd.matrixV().rightCols(m - rank);
    out.smallest_kept = rank > 0 ? s[rank - 1] : std::numeric_limits<double>::infinity();
    out.largest_null = rank < s.size() ? s[rank] : 0.0;
    return out;
}

} // namespace qsld
