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

#include "cranlab/matrix_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cranlab/errors.hpp"

namespace cranlab
{

namespace
{

// Strict positive definiteness threshold relative to the trace.
constexpr double pd_tolerance = 1e-12;

void require_square(const ComplexMatrix &m, const char *what)
{
    if (m.rows() != m.cols())
        fail(ErrorCode::DimensionMismatch, std::string(what) + " must be square");
}

bool strictly_pd(const ComplexMatrix &m)
{
    if (m.rows() == 0)
        return true;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        return false;
    const double tr = m.trace().real();
    return tr > 0.0 && es.eigenvalues()(0) > pd_tolerance * tr;
}

} // namespace

BlockIndexSet::BlockIndexSet(std::vector<std::size_t> blocks, std::size_t block_dim)
    : blocks_(std::move(blocks)), block_dim_(block_dim)
{
    if (block_dim_ == 0)
        fail(ErrorCode::InvalidArgument, "block dimension must be at least 1");
    auto sorted = blocks_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        fail(ErrorCode::InvalidArgument, "block indices must be unique");
}

BlockIndexSet BlockIndexSet::range(std::size_t first, std::size_t count, std::size_t block_dim)
{
    std::vector<std::size_t> b(count);
    for (std::size_t k = 0; k < count; ++k)
        b[k] = first + k;
    return BlockIndexSet(std::move(b), block_dim);
}

BlockIndexSet BlockIndexSet::all(std::size_t n_blocks, std::size_t block_dim)
{
    return range(0, n_blocks, block_dim);
}

BlockIndexSet BlockIndexSet::single(std::size_t block, std::size_t block_dim)
{
    return BlockIndexSet({block}, block_dim);
}

std::vector<Eigen::Index> BlockIndexSet::scalar_indices() const
{
    std::vector<Eigen::Index> idx;
    idx.reserve(dim());
    for (auto b : blocks_)
        for (std::size_t k = 0; k < block_dim_; ++k)
            idx.push_back(static_cast<Eigen::Index>(b * block_dim_ + k));
    return idx;
}

HermitianPsd::HermitianPsd(const ComplexMatrix &m)
{
    require_square(m, "Hermitian matrix");
    if (!m.allFinite())
        fail(ErrorCode::NotHermitian, "matrix has non-finite entries");
    const double norm = m.norm();
    if ((m - m.adjoint()).norm() > hermitian_tolerance * norm)
        fail(ErrorCode::NotHermitian, "matrix differs from its conjugate transpose");
    m_ = (m + m.adjoint()) / 2.0;
    if (m_.rows() > 0)
    {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m_, Eigen::EigenvaluesOnly);
        const double tr = m_.trace().real();
        if (es.info() != Eigen::Success || es.eigenvalues()(0) < -psd_tolerance * std::abs(tr))
            fail(ErrorCode::NotPsd, "matrix has a negative eigenvalue");
    }
}

HermitianPsd HermitianPsd::trusted(const ComplexMatrix &m)
{
    require_square(m, "Hermitian matrix");
    HermitianPsd out;
    out.m_ = (m + m.adjoint()) / 2.0;
    return out;
}

HermitianPsd HermitianPsd::identity(std::size_t dim, double scale)
{
    if (!(scale >= 0.0) || !std::isfinite(scale))
        fail(ErrorCode::NotPsd, "identity scale must be finite and non-negative");
    const auto n = static_cast<Eigen::Index>(dim);
    return trusted(ComplexMatrix::Identity(n, n) * scale);
}

HermitianPsd HermitianPsd::zero(std::size_t dim)
{
    const auto n = static_cast<Eigen::Index>(dim);
    return trusted(ComplexMatrix::Zero(n, n));
}

HermitianPsd HermitianPsd::diagonal(std::span<const double> entries)
{
    const auto n = static_cast<Eigen::Index>(entries.size());
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k)
    {
        const double v = entries[static_cast<std::size_t>(k)];
        if (!(v >= 0.0) || !std::isfinite(v))
            fail(ErrorCode::NotPsd, "diagonal entries must be finite and non-negative");
        m(k, k) = v;
    }
    return trusted(m);
}

HermitianPsd HermitianPsd::operator+(const HermitianPsd &other) const
{
    HermitianPsd out = *this;
    out += other;
    return out;
}

HermitianPsd &HermitianPsd::operator+=(const HermitianPsd &other)
{
    if (other.dim() != dim())
        fail(ErrorCode::DimensionMismatch, "cannot add matrices of different dimension");
    m_ += other.m_;
    return *this;
}

HermitianPsd HermitianPsd::scaled(double factor) const
{
    if (!(factor >= 0.0))
        fail(ErrorCode::NotPsd, "scale factor must be non-negative");
    return trusted(m_ * factor);
}

HermitianPsd HermitianPsd::plus_identity(double scale) const
{
    if (!(scale >= 0.0))
        fail(ErrorCode::NotPsd, "identity scale must be non-negative");
    HermitianPsd out = *this;
    out.m_.diagonal().array() += scale;
    return out;
}

double logdet2(const HermitianPsd &m)
{
    if (m.dim() == 0)
        return 0.0;
    if (!strictly_pd(m.matrix()))
        fail(ErrorCode::SingularMatrix, "log-determinant of a matrix that is not strictly positive definite");
    Eigen::LLT<ComplexMatrix> llt(m.matrix());
    if (llt.info() != Eigen::Success)
        fail(ErrorCode::SingularMatrix, "Cholesky factorization failed");
    const auto &l = llt.matrixLLT();
    double acc = 0.0;
    for (Eigen::Index k = 0; k < l.rows(); ++k)
        acc += std::log2(l(k, k).real());
    return 2.0 * acc;
}

Eigen::VectorXd eigenvalues(const HermitianPsd &m)
{
    if (m.dim() == 0)
        return {};
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.matrix(), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

ComplexMatrix block_submatrix(const ComplexMatrix &m, const BlockIndexSet &rows, const BlockIndexSet &cols)
{
    const auto r = rows.scalar_indices();
    const auto c = cols.scalar_indices();
    for (auto i : r)
        if (i >= m.rows())
            fail(ErrorCode::IndexOutOfRange, "row block index out of range");
    for (auto j : c)
        if (j >= m.cols())
            fail(ErrorCode::IndexOutOfRange, "column block index out of range");
    ComplexMatrix out(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(c.size()));
    for (std::size_t a = 0; a < r.size(); ++a)
        for (std::size_t b = 0; b < c.size(); ++b)
            out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = m(r[a], c[b]);
    return out;
}

HermitianPsd principal_submatrix(const HermitianPsd &m, const BlockIndexSet &blocks)
{
    return HermitianPsd::trusted(block_submatrix(m.matrix(), blocks, blocks));
}

HermitianPsd schur_conditional_cov(const HermitianPsd &q, const BlockIndexSet &target, const BlockIndexSet &given)
{
    for (auto t : target.blocks())
        if (std::find(given.blocks().begin(), given.blocks().end(), t) != given.blocks().end())
            fail(ErrorCode::InvalidArgument, "target and conditioning blocks overlap");

    const ComplexMatrix q_tt = block_submatrix(q.matrix(), target, target);
    if (given.empty())
        return HermitianPsd::trusted(q_tt);

    const ComplexMatrix q_gg = block_submatrix(q.matrix(), given, given);
    if (!strictly_pd(q_gg))
        fail(ErrorCode::SingularConditioningBlock, "conditioning block is not strictly positive definite");
    Eigen::LLT<ComplexMatrix> llt(q_gg);
    if (llt.info() != Eigen::Success)
        fail(ErrorCode::SingularConditioningBlock, "Cholesky factorization of conditioning block failed");

    const ComplexMatrix q_gt = block_submatrix(q.matrix(), given, target);
    const ComplexMatrix solved = llt.solve(q_gt);
    return HermitianPsd::trusted(q_tt - q_gt.adjoint() * solved);
}

HermitianPsd congruence(const ComplexMatrix &a, const HermitianPsd &k)
{
    if (a.cols() != k.matrix().rows())
        fail(ErrorCode::DimensionMismatch, "congruence: column count does not match covariance dimension");
    return HermitianPsd::trusted(a * k.matrix() * a.adjoint());
}

HermitianPsd block_diagonal(std::span<const HermitianPsd> blocks)
{
    Eigen::Index n = 0;
    for (const auto &b : blocks)
        n += static_cast<Eigen::Index>(b.dim());
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    Eigen::Index off = 0;
    for (const auto &b : blocks)
    {
        const auto d = static_cast<Eigen::Index>(b.dim());
        out.block(off, off, d, d) = b.matrix();
        off += d;
    }
    return HermitianPsd::trusted(out);
}

bool is_block_diagonal(const HermitianPsd &m, std::size_t block_dim, double tol)
{
    if (block_dim == 0 || m.dim() % block_dim != 0)
        fail(ErrorCode::DimensionMismatch, "matrix dimension is not a multiple of the block dimension");
    const auto n_blocks = m.dim() / block_dim;
    const auto d = static_cast<Eigen::Index>(block_dim);
    for (std::size_t a = 0; a < n_blocks; ++a)
        for (std::size_t b = 0; b < n_blocks; ++b)
        {
            if (a == b)
                continue;
            const auto blk = m.matrix().block(static_cast<Eigen::Index>(a) * d, static_cast<Eigen::Index>(b) * d, d, d);
            if (blk.norm() > tol)
                return false;
        }
    return true;
}

} // namespace cranlab
