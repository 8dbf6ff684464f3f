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

#pragma once

#include <cstddef>
#include <vector>

#include "qsld/hermitian.hpp"

namespace qsld {

/// Real coordinates of a Hermitian operator in an HS-orthonormal basis of
/// L_h (diagonal entries, then sqrt(2) Re / sqrt(2) Im of the upper
/// triangle). The Euclidean inner product of two such vectors is Re Tr(AB).
RVector realify(const HermitianOperator &a);
HermitianOperator derealify(const RVector &v, std::size_t dim);

/// A real-linear subspace of L_h with an HS-orthonormal basis.
class OperatorSubspace {
  public:
    /// Orthonormalizes `generators` by SVD (cutoff 1e-10 * sigma_max).
    /// Linearly dependent generators are dropped.
    OperatorSubspace(std::size_t dim_ambient, const std::vector<HermitianOperator> &generators);

    [[nodiscard]] std::size_t dim_ambient() const noexcept { return dim_ambient_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return basis_.size(); }
    [[nodiscard]] const std::vector<HermitianOperator> &basis() const noexcept { return basis_; }
    [[nodiscard]] bool includes_identity() const noexcept { return includes_identity_; }

    /// Columns are realified basis vectors.
    [[nodiscard]] const RMatrix &frame() const noexcept { return frame_; }

    /// The subspace A + R I.
    [[nodiscard]] OperatorSubspace with_identity() const;

    /// HS-orthogonal projection onto the span.
    [[nodiscard]] HermitianOperator project(const HermitianOperator &a) const;

  private:
    std::size_t dim_ambient_;
    std::vector<HermitianOperator> basis_;
    RMatrix frame_;
    bool includes_identity_ = false;
};

struct Membership {
    bool is_member;
    double residual;
};

/// residual = |A - P(A)|_HS; member iff residual <= tol * max(1, |A|_HS).
Membership subspace_membership(const OperatorSubspace &v, const HermitianOperator &a,
                               double tol);

/// Dimension of the intersection of subspaces of R^m given by orthonormal
/// frames, via the null space of the stacked complement projectors.
/// Singular values at or below `cutoff` count as null.
struct Intersection {
    std::size_t dimension;
    RMatrix frame;        ///< orthonormal columns spanning the intersection
    double smallest_kept; ///< smallest singular value above the cutoff
    double largest_null;  ///< largest singular value counted as null
};
Intersection intersect_subspaces(const std::vector<RMatrix> &frames, double cutoff = 1e-8);

} // namespace qsld
