// SPDX-License-Identifier: Apache-2.0
//
// mimome: secrecy capacity toolkit for Gaussian MIMO wiretap channels
// Copyright (C) 2026 The mimome Authors
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

// Dense complex linear-algebra kernels. Everything here is a pure function of
// its arguments; the heavy lifting is delegated to Eigen.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "mimome/errors.hpp"

namespace mimome {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Relative positive-definiteness threshold: an eigenvalue (or Cholesky pivot)
// must exceed dim * kPdRelTol * lambda_max.
inline constexpr double kPdRelTol = 1e-13;
inline constexpr double kHermitianRelTol = 1e-12;

inline bool all_finite(const ComplexMatrix &m)
{
    return m.allFinite();
}

inline void require_finite(const ComplexMatrix &m, const char *what)
{
    if (!all_finite(m))
        throw DomainError(std::string(what) + " contains non-finite entries");
}

inline ComplexMatrix identity(Index n)
{
    return ComplexMatrix::Identity(n, n);
}

inline ComplexMatrix hermitian_part(const ComplexMatrix &m)
{
    return 0.5 * (m + m.adjoint());
}

/// Square complex matrix equal to its conjugate transpose.
///
/// The checking constructor rejects matrices whose anti-Hermitian part exceeds
/// 1e-12 * max(1, ||M||_F) and then stores the exact Hermitian part.
class HermitianMatrix {
public:
    HermitianMatrix() = default;

    explicit HermitianMatrix(const ComplexMatrix &m)
    {
        if (m.rows() != m.cols())
            throw DimensionMismatch("Hermitian matrix must be square, got " + std::to_string(m.rows()) + "x" +
                                    std::to_string(m.cols()));
        require_finite(m, "Hermitian matrix");
        const double skew = (m - m.adjoint()).norm();
        if (skew > kHermitianRelTol * std::max(1.0, m.norm()))
            throw NotHermitian("matrix is not Hermitian (||M - M^H||_F = " + std::to_string(skew) + ")");
        m_ = hermitian_part(m);
    }

    // For products such as H K H^H that are Hermitian up to rounding.
    static HermitianMatrix symmetrize(const ComplexMatrix &m)
    {
        HermitianMatrix h;
        h.m_ = hermitian_part(m);
        return h;
    }

    static HermitianMatrix identity(Index n) { return symmetrize(ComplexMatrix::Identity(n, n)); }
    static HermitianMatrix zero(Index n) { return symmetrize(ComplexMatrix::Zero(n, n)); }

    const ComplexMatrix &matrix() const noexcept { return m_; }
    Index dim() const noexcept { return m_.rows(); }
    double trace() const { return m_.trace().real(); }

private:
    ComplexMatrix m_;
};

struct EigenDecomposition {
    RealVector values;     // ascending
    ComplexMatrix vectors; // columns are orthonormal eigenvectors
};

inline EigenDecomposition hermitian_eig(const HermitianMatrix &m)
{
    if (m.dim() == 0)
        return {RealVector(0), ComplexMatrix(0, 0)};
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.matrix());
    if (es.info() != Eigen::Success)
        throw ConvergenceFailure("Hermitian eigensolver did not converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

struct SvdResult {
    ComplexMatrix U;
    RealVector sigma; // descending, nonnegative
    ComplexMatrix V;
};

// M = U diag(sigma) V^H. With full = false the factors are thin (k = min(m, n)
// columns); with full = true U and V are square unitary and sigma still has k
// entries.
inline SvdResult svd(const ComplexMatrix &m, bool full = false)
{
    require_finite(m, "svd input");
    const unsigned opts = full ? (Eigen::ComputeFullU | Eigen::ComputeFullV) : (Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (m.size() == 0) {
        SvdResult r;
        r.sigma = RealVector(0);
        r.U = full ? identity(m.rows()) : ComplexMatrix(m.rows(), 0);
        r.V = full ? identity(m.cols()) : ComplexMatrix(m.cols(), 0);
        return r;
    }
    SvdResult r;
    if (std::min(m.rows(), m.cols()) > 16) {
        Eigen::BDCSVD<ComplexMatrix> s(m, opts);
        if (s.info() != Eigen::Success)
            throw ConvergenceFailure("SVD did not converge");
        r = {s.matrixU(), s.singularValues(), s.matrixV()};
    } else {
        Eigen::JacobiSVD<ComplexMatrix> s(m, opts);
        if (s.info() != Eigen::Success)
            throw ConvergenceFailure("SVD did not converge");
        r = {s.matrixU(), s.singularValues(), s.matrixV()};
    }
    if (!r.sigma.allFinite())
        throw ConvergenceFailure("SVD produced non-finite singular values");
    return r;
}

inline double spectral_norm(const ComplexMatrix &m)
{
    if (m.size() == 0)
        return 0.0;
    if (std::min(m.rows(), m.cols()) > 16)
        return Eigen::BDCSVD<ComplexMatrix>(m).singularValues()(0);
    return Eigen::JacobiSVD<ComplexMatrix>(m).singularValues()(0);
}

namespace detail {

// Cholesky with the scale-invariant pivot test. The largest diagonal entry is
// a lower bound on lambda_max, which keeps the test cheap.
inline Eigen::LLT<ComplexMatrix> checked_llt(const ComplexMatrix &m, const char *what)
{
    Eigen::LLT<ComplexMatrix> llt(m);
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite(std::string(what) + " is not positive definite");
    const auto n = static_cast<double>(m.rows());
    const double scale = m.diagonal().real().maxCoeff();
    const double floor = n * kPdRelTol * std::max(scale, 0.0);
    const auto L = llt.matrixLLT();
    for (Index i = 0; i < m.rows(); ++i) {
        const double pivot = std::norm(L(i, i));
        if (!(pivot > floor))
            throw NotPositiveDefinite(std::string(what) + " is numerically singular (pivot " +
                                      std::to_string(pivot) + ")");
    }
    return llt;
}

} // namespace detail

/// Natural-log determinant of a Hermitian positive definite matrix.
inline double logdet_hpd(const HermitianMatrix &m)
{
    if (m.dim() == 0)
        return 0.0;
    const auto llt = detail::checked_llt(m.matrix(), "logdet argument");
    const auto L = llt.matrixLLT();
    double acc = 0.0;
    for (Index i = 0; i < m.dim(); ++i)
        acc += std::log(L(i, i).real());
    return 2.0 * acc;
}

inline ComplexMatrix inverse_hpd(const HermitianMatrix &m)
{
    if (m.dim() == 0)
        return ComplexMatrix(0, 0);
    const auto llt = detail::checked_llt(m.matrix(), "matrix to invert");
    return hermitian_part(llt.solve(identity(m.dim())));
}

/// A - B D^{-1} B^H for the Hermitian block matrix [[A, B], [C, D]], C = B^H.
inline HermitianMatrix schur_complement(const ComplexMatrix &A, const ComplexMatrix &B, const ComplexMatrix &C,
                                        const ComplexMatrix &D)
{
    if (A.rows() != A.cols() || D.rows() != D.cols() || B.rows() != A.rows() || B.cols() != D.rows() ||
        C.rows() != D.rows() || C.cols() != A.rows())
        throw DimensionMismatch("schur_complement: inconsistent block shapes");
    const double scale = std::max({1.0, A.norm(), B.norm(), D.norm()});
    if ((C - B.adjoint()).norm() > kHermitianRelTol * scale)
        throw NotHermitian("schur_complement: lower-left block is not the adjoint of the upper-right block");
    const HermitianMatrix Dh(D);
    const auto llt = detail::checked_llt(Dh.matrix(), "Schur pivot block");
    return HermitianMatrix::symmetrize(A - B * llt.solve(B.adjoint()));
}

} // namespace mimome
