// SPDX-License-Identifier: Apache-2.0
//
// cranlab: C-RAN capacity and fronthaul engineering toolkit
// Copyright (C) 2026 The cranlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cranlab
{

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Ordered selection of equally sized blocks out of a block-partitioned matrix.
// Block indices are zero-based.
class BlockIndexSet
{
public:
    BlockIndexSet() = default;
    BlockIndexSet(std::vector<std::size_t> blocks, std::size_t block_dim);

    // {first, first + 1, ..., first + count - 1}
    static BlockIndexSet range(std::size_t first, std::size_t count, std::size_t block_dim);
    static BlockIndexSet all(std::size_t n_blocks, std::size_t block_dim);
    static BlockIndexSet single(std::size_t block, std::size_t block_dim);

    const std::vector<std::size_t> &blocks() const { return blocks_; }
    std::size_t block_dim() const { return block_dim_; }
    std::size_t size() const { return blocks_.size(); }
    std::size_t dim() const { return blocks_.size() * block_dim_; }
    bool empty() const { return blocks_.empty(); }

    // Expands the block selection to scalar row/column indices.
    std::vector<Eigen::Index> scalar_indices() const;

private:
    std::vector<std::size_t> blocks_;
    std::size_t block_dim_ = 1;
};

// Hermitian positive-semidefinite matrix. The checked constructor symmetrizes
// once with (m + m^H) / 2 and rejects (never projects) matrices that are not
// numerically Hermitian or PSD.
class HermitianPsd
{
public:
    static constexpr double hermitian_tolerance = 1e-12; // relative, Frobenius
    static constexpr double psd_tolerance = 1e-10;       // x trace

    HermitianPsd() = default;
    explicit HermitianPsd(const ComplexMatrix &m);

    static HermitianPsd identity(std::size_t dim, double scale = 1.0);
    static HermitianPsd zero(std::size_t dim);
    static HermitianPsd diagonal(std::span<const double> entries);

    // Skips the eigenvalue check. Only for results that are PSD by
    // construction (sums, congruences, principal blocks).
    static HermitianPsd trusted(const ComplexMatrix &m);

    const ComplexMatrix &matrix() const { return m_; }
    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    double trace() const { return m_.trace().real(); }

    HermitianPsd operator+(const HermitianPsd &other) const;
    HermitianPsd &operator+=(const HermitianPsd &other);
    HermitianPsd scaled(double factor) const; // factor >= 0
    HermitianPsd plus_identity(double scale) const; // scale >= 0

private:
    ComplexMatrix m_;
};

// log2 |m| via Cholesky. Requires min eigenvalue > 1e-12 * trace.
double logdet2(const HermitianPsd &m);

// Ascending eigenvalues of a Hermitian matrix.
Eigen::VectorXd eigenvalues(const HermitianPsd &m);

ComplexMatrix block_submatrix(const ComplexMatrix &m, const BlockIndexSet &rows, const BlockIndexSet &cols);

HermitianPsd principal_submatrix(const HermitianPsd &m, const BlockIndexSet &blocks);

/// Conditional covariance of the `target` blocks given the `given` blocks:
/// Q_tt - Q_tg Q_gg^{-1} Q_gt. An empty `given` returns Q_tt.
/// Throws SingularConditioningBlock when Q_gg is not strictly positive definite.
HermitianPsd schur_conditional_cov(const HermitianPsd &q, const BlockIndexSet &target, const BlockIndexSet &given);

// a * k * a^H
HermitianPsd congruence(const ComplexMatrix &a, const HermitianPsd &k);

// Direct sum diag(b_1, ..., b_n).
HermitianPsd block_diagonal(std::span<const HermitianPsd> blocks);

// True when every off-diagonal block has Frobenius norm <= tol.
bool is_block_diagonal(const HermitianPsd &m, std::size_t block_dim, double tol = 0.0);

} // namespace cranlab
