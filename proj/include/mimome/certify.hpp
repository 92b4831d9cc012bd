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

// Optimality certificate for a candidate saddle point (K, Phi).
//
// With Theta = (Hr K He^H + Phi)(I + He K He^H)^{-1} and K = S S^H, a saddle
// point satisfies
//
//   (Hr - Theta He) K (Phi^H Hr - He)^H = 0          noise condition
//   He S = Phi^H Hr S                                degradedness
//   grad_K + Psi0 = lambda0 I,  Psi0 >= 0,
//   tr(Psi0 K) = 0,  lambda0 (tr K - P) = 0          input KKT
//   (Hr - Theta He) S has full column rank, unless Hr = Theta He
//
// and r_plus(K, Phi) = r_minus(K).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "mimome/channel.hpp"
#include "mimome/linalg.hpp"
#include "mimome/rates.hpp"
#include "mimome/saddle.hpp"

namespace mimome {

struct CertifyTolerances {
    double gap = 1e-7;
    double residual = 1e-4;     // noise condition and degradedness
    double kkt = 1e-5;          // psi_min_eig >= -kkt * lambda0
    double slackness = 1e-4;    // |tr(Psi0 K)| and |lambda0 (tr K - P)| relative to P lambda0,
                                // with lambda0 floored at 1e-8 max(1, ||Hr||_F^2)
    double zero_saddle = 1e-6;  // ||Hr - Theta He||_F relative to max(1, ||Hr||_F)
    double rank_S = 1e-8;
    double rank_M = 1e-8;
};

struct InputKkt {
    double lambda0 = 0.0;
    double psi_min_eig = 0.0;
    double complementary_slackness = 0.0; // |tr(Psi0 K)|
    double trace_slackness = 0.0;         // |lambda0 (tr K - P)|
};

struct RankM {
    Index rank = 0;
    Index columns = 0;
    bool full = false;
    bool zero_saddle = false;
    double zero_residual = 0.0;
};

struct BlockIdentityResiduals {
    double r21 = 0.0;
    double r22 = 0.0;
    bool singular_elimination_warning = false; // sigma_min(Phi^H Phi - I) < 1e-8
};

struct Certificate {
    double gap_nats = 0.0;
    double noise_condition_residual = 0.0;
    double degradedness_residual = 0.0;
    InputKkt input_kkt;
    Index rank_S = 0;
    Index rank_M = 0;
    bool full_rank_M = false;
    bool zero_saddle = false;

    // Threshold sensitivity of the rank-dependent quantities.
    Index rank_S_loose = 0;  // at 1e-6
    Index rank_S_strict = 0; // at 1e-10
    double degradedness_loose = 0.0;
    double degradedness_strict = 0.0;

    double lambda_gamma_residual = 0.0;
    Index singular_units = 0;

    bool identities_available = false;
    BlockIdentityResiduals identities;
    double upsilon_kkt_mismatch = 0.0;

    bool passed = false;
};

// ---------------------------------------------------------------------------
// Individual checks
// ---------------------------------------------------------------------------

/// S = V_r diag(sqrt(lambda_r)) over eigenvalues lambda > rel_tol * lambda_max,
/// so that S S^H reproduces K up to the discarded tail.
inline ComplexMatrix factor_S(const InputCovariance &K, double rel_tol = 1e-8)
{
    const auto eig = hermitian_eig(K.hermitian());
    const Index n = eig.values.size();
    const double lmax = n ? eig.values.maxCoeff() : 0.0;
    if (!(lmax > 0.0))
        return ComplexMatrix(K.dim(), 0);
    std::vector<Index> keep;
    for (Index i = n - 1; i >= 0; --i)
        if (eig.values(i) > rel_tol * lmax)
            keep.push_back(i);
    ComplexMatrix S(K.dim(), static_cast<Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c)
        S.col(static_cast<Index>(c)) = eig.vectors.col(keep[c]) * std::sqrt(eig.values(keep[c]));
    return S;
}

inline double check_noise_condition(const ChannelPair &pair, const InputCovariance &K, const NoiseCouple &N)
{
    const ComplexMatrix &Phi = N.matrix();
    const ComplexMatrix Theta = theta_matrix(pair, K, N);
    const ComplexMatrix R =
        (pair.Hr() - Theta * pair.He()) * K.matrix() * (Phi.adjoint() * pair.Hr() - pair.He()).adjoint();
    return R.norm() / std::max(1.0, pair.Hr().norm() * K.matrix().norm() * pair.He().norm());
}

inline double check_degradedness(const ChannelPair &pair, const ComplexMatrix &S, const NoiseCouple &N)
{
    if (S.cols() == 0)
        return 0.0;
    const ComplexMatrix HeS = pair.He() * S;
    return (HeS - N.matrix().adjoint() * pair.Hr() * S).norm() / std::max(1.0, HeS.norm());
}

inline double check_degradedness(const ChannelPair &pair, const InputCovariance &K, const NoiseCouple &N)
{
    return check_degradedness(pair, factor_S(K), N);
}

/// Gradient of r_plus in K. On a singular coupling this is the gradient of
/// the reduced channel; zero when every receiver direction is absorbed.
inline HermitianMatrix kkt_gradient(const ChannelPair &pair, const InputCovariance &K, const NoiseCouple &N)
{
    if (is_regular_sigma(N.sigma_max()))
        return grad_K(pair, K, N);
    const auto red = reduce_singular(pair, N);
    if (!red.compatible)
        throw DomainError("noise coupling is singular and incompatible with the channel; r_plus is unbounded");
    if (!red.reduced)
        return HermitianMatrix::zero(pair.nt());
    return grad_K(*red.reduced, K, NoiseCouple::trusted(red.phi_hat));
}

inline InputKkt check_input_kkt(const ChannelPair &pair, const InputCovariance &K, const NoiseCouple &N)
{
    const HermitianMatrix G = kkt_gradient(pair, K, N);
    const auto eig = hermitian_eig(G);
    InputKkt out;
    out.lambda0 = std::max(eig.values.maxCoeff(), 0.0);
    const ComplexMatrix Psi0 = out.lambda0 * identity(pair.nt()) - G.matrix();
    out.psi_min_eig = out.lambda0 - eig.values.maxCoeff();
    out.complementary_slackness = std::abs((Psi0 * K.matrix()).trace().real());
    out.trace_slackness = std::abs(out.lambda0 * (K.trace() - K.power()));
    return out;
}

inline RankM check_rank_M(const ChannelPair &pair, const InputCovariance &K, const NoiseCouple &N,
                          const CertifyTolerances &tol = {})
{
    const ComplexMatrix S = factor_S(K, tol.rank_S);
    const ComplexMatrix E = pair.Hr() - theta_matrix(pair, K, N) * pair.He();
    RankM out;
    out.columns = S.cols();
    out.zero_residual = E.norm() / std::max(1.0, pair.Hr().norm());
    out.zero_saddle = out.zero_residual <= tol.zero_saddle;
    if (S.cols() > 0) {
        const RealVector sv = svd(E * S).sigma;
        const double smax = sv.size() ? sv(0) : 0.0;
        for (Index i = 0; i < sv.size(); ++i)
            if (smax > 0.0 && sv(i) > tol.rank_M * smax)
                ++out.rank;
    }
    out.full = out.rank == out.columns;
    return out;
}

/// Residuals of the two block identities obtained by eliminating Upsilon1
/// from the noise-side KKT system, for a given Upsilon2:
///
///   (Phi^H Hr - He) K Hr^H = (Phi^H Phi - I) Upsilon2 (Phi^H + He K Hr^H)
///   (Phi^H Hr - He) K He^H = (Phi^H Phi - I) Upsilon2 (I + He K He^H)
inline BlockIdentityResiduals check_appendixA_identities(const ChannelPair &pair, const InputCovariance &K,
                                                     const NoiseCouple &N, const HermitianMatrix &Upsilon2)
{
    const ComplexMatrix &Phi = N.matrix();
    const ComplexMatrix &Hr = pair.Hr();
    const ComplexMatrix &He = pair.He();
    if (Upsilon2.dim() != pair.ne())
        throw DimensionMismatch("Upsilon2 must be n_e x n_e");
    const ComplexMatrix A = Phi.adjoint() * Phi - identity(pair.ne());
    const ComplexMatrix L = (Phi.adjoint() * Hr - He) * K.matrix();
    const ComplexMatrix AU = A * Upsilon2.matrix();
    const ComplexMatrix lhs21 = L * Hr.adjoint();
    const ComplexMatrix lhs22 = L * He.adjoint();
    const ComplexMatrix rhs21 = AU * (Phi.adjoint() + He * K.matrix() * Hr.adjoint());
    const ComplexMatrix rhs22 = AU * (identity(pair.ne()) + He * K.matrix() * He.adjoint());

    BlockIdentityResiduals out;
    out.r21 = (lhs21 - rhs21).norm() / std::max(1.0, lhs21.norm());
    out.r22 = (lhs22 - rhs22).norm() / std::max(1.0, lhs22.norm());
    const RealVector sA = svd(A).sigma;
    out.singular_elimination_warning = sA.size() == 0 || sA(sA.size() - 1) < 1e-8;
    return out;
}

/// Least-squares Upsilon2 from the second identity, Hermitian part.
inline HermitianMatrix fit_upsilon2(const ChannelPair &pair, const InputCovariance &K, const NoiseCouple &N)
{
    const ComplexMatrix &Phi = N.matrix();
    const ComplexMatrix A = Phi.adjoint() * Phi - identity(pair.ne());
    const ComplexMatrix L = (Phi.adjoint() * pair.Hr() - pair.He()) * K.matrix() * pair.He().adjoint();
    const ComplexMatrix Qe = identity(pair.ne()) + pair.He() * K.matrix() * pair.He().adjoint();
    const ComplexMatrix X = A.completeOrthogonalDecomposition().solve(L);
    const ComplexMatrix U = detail::checked_llt(hermitian_part(Qe), "I + He K He^H").solve(X.adjoint()).adjoint();
    return HermitianMatrix::symmetrize(U);
}

/// Dual blocks (Upsilon1, Upsilon2) read off the noise-side stationarity
/// condition: Upsilon = -blockdiag(D), D = (K_Phi + Ht K Ht^H)^{-1} - K_Phi^{-1}.
struct NoiseDual {
    HermitianMatrix upsilon1, upsilon2;
    ComplexMatrix D;
};

inline NoiseDual noise_dual(const ChannelPair &pair, const InputCovariance &K, const NoiseCouple &N)
{
    if (!is_regular_sigma(N.sigma_max()))
        throw DomainError("noise_dual requires a nonsingular noise covariance");
    const ComplexMatrix Ht = pair.Ht();
    const ComplexMatrix KPhi = N.covariance();
    const ComplexMatrix D = inverse_hpd(HermitianMatrix::symmetrize(KPhi + Ht * K.matrix() * Ht.adjoint())) -
                            inverse_hpd(HermitianMatrix::symmetrize(KPhi));
    const Index nr = pair.nr(), ne = pair.ne();
    return {HermitianMatrix::symmetrize(-D.topLeftCorner(nr, nr)),
            HermitianMatrix::symmetrize(-D.bottomRightCorner(ne, ne)), D};
}

// ---------------------------------------------------------------------------
// Full certificate
// ---------------------------------------------------------------------------

inline Certificate certify(const ChannelPair &pair, const InputCovariance &K, const NoiseCouple &N,
                           const CertifyTolerances &tol = {})
{
    if (K.dim() != pair.nt() || N.matrix().rows() != pair.nr() || N.matrix().cols() != pair.ne())
        throw DimensionMismatch("candidate does not match the channel dimensions");

    Certificate c;
    const ExtendedReal gap = duality_gap(pair, K, N);
    c.gap_nats = gap.as_double();
    c.singular_units = is_regular_sigma(N.sigma_max()) ? 0 : reduce_singular(pair, N).unit_count;

    c.noise_condition_residual = check_noise_condition(pair, K, N);
    c.degradedness_residual = check_degradedness(pair, factor_S(K, tol.rank_S), N);

    const ComplexMatrix S_loose = factor_S(K, 1e-6);
    const ComplexMatrix S_strict = factor_S(K, 1e-10);
    c.rank_S = factor_S(K, tol.rank_S).cols();
    c.rank_S_loose = S_loose.cols();
    c.rank_S_strict = S_strict.cols();
    c.degradedness_loose = check_degradedness(pair, S_loose, N);
    c.degradedness_strict = check_degradedness(pair, S_strict, N);

    bool kkt_ok = false;
    if (gap.is_finite()) {
        c.input_kkt = check_input_kkt(pair, K, N);
        const double lambda_floor = 1e-8 * std::max(1.0, pair.Hr().squaredNorm());
        const double scale = K.power() * std::max(c.input_kkt.lambda0, lambda_floor);
        kkt_ok = c.input_kkt.psi_min_eig >= -tol.kkt * c.input_kkt.lambda0 &&
                 c.input_kkt.complementary_slackness <= tol.slackness * scale &&
                 c.input_kkt.trace_slackness <= tol.slackness * scale;
    }

    const RankM rm = check_rank_M(pair, K, N, tol);
    c.rank_M = rm.rank;
    c.full_rank_M = rm.full;
    c.zero_saddle = rm.zero_saddle;

    const ComplexMatrix Theta = theta_matrix(pair, K, N);
    const ComplexMatrix Lam = lambda_matrix(pair, K, N).matrix();
    c.lambda_gamma_residual = (Lam - gamma_matrix(pair, K, N, Theta).matrix()).norm() / std::max(1.0, Lam.norm());

    if (is_regular_sigma(N.sigma_max())) {
        c.identities_available = true;
        const HermitianMatrix U2 = fit_upsilon2(pair, K, N);
        c.identities = check_appendixA_identities(pair, K, N, U2);
        c.upsilon_kkt_mismatch =
            (U2.matrix() - noise_dual(pair, K, N).upsilon2.matrix()).norm() / std::max(1.0, U2.matrix().norm());
    }

    c.passed = gap.is_finite() && std::abs(c.gap_nats) <= tol.gap && c.noise_condition_residual <= tol.residual &&
               c.degradedness_residual <= tol.residual && kkt_ok && (c.full_rank_M || c.zero_saddle);
    return c;
}

inline Certificate certify(const ChannelPair &pair, const SaddleResult &r, const CertifyTolerances &tol = {})
{
    return certify(pair, r.K_bar, r.Phi_bar, tol);
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace detail {

inline std::string fmt_real(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

inline std::vector<std::pair<std::string, std::string>> certificate_fields(const Certificate &c)
{
    auto b = [](bool v) { return std::string(v ? "true" : "false"); };
    auto n = [](Index v) { return std::to_string(v); };
    return {
        {"gap_nats", fmt_real(c.gap_nats)},
        {"noise_condition_residual", fmt_real(c.noise_condition_residual)},
        {"degradedness_residual", fmt_real(c.degradedness_residual)},
        {"lambda0", fmt_real(c.input_kkt.lambda0)},
        {"psi_min_eig", fmt_real(c.input_kkt.psi_min_eig)},
        {"complementary_slackness", fmt_real(c.input_kkt.complementary_slackness)},
        {"trace_slackness", fmt_real(c.input_kkt.trace_slackness)},
        {"rank_S", n(c.rank_S)},
        {"rank_M", n(c.rank_M)},
        {"full_rank_M", b(c.full_rank_M)},
        {"zero_saddle", b(c.zero_saddle)},
        {"rank_S_1e-6", n(c.rank_S_loose)},
        {"rank_S_1e-10", n(c.rank_S_strict)},
        {"degradedness_1e-6", fmt_real(c.degradedness_loose)},
        {"degradedness_1e-10", fmt_real(c.degradedness_strict)},
        {"lambda_gamma_residual", fmt_real(c.lambda_gamma_residual)},
        {"singular_units", n(c.singular_units)},
        {"upsilon_residual_21", c.identities_available ? fmt_real(c.identities.r21) : "na"},
        {"upsilon_residual_22", c.identities_available ? fmt_real(c.identities.r22) : "na"},
        {"upsilon_kkt_mismatch", c.identities_available ? fmt_real(c.upsilon_kkt_mismatch) : "na"},
        {"singular_elimination_warning", b(c.identities_available && c.identities.singular_elimination_warning)},
        {"passed", b(c.passed)},
    };
}

} // namespace detail

inline void write_certificate_kv(std::ostream &out, const Certificate &c)
{
    for (const auto &[k, v] : detail::certificate_fields(c))
        out << k << '=' << v << '\n';
}

inline void write_certificate_csv_header(std::ostream &out)
{
    const auto f = detail::certificate_fields(Certificate{});
    for (std::size_t i = 0; i < f.size(); ++i)
        out << (i ? "," : "") << f[i].first;
    out << '\n';
}

inline void write_certificate_csv_row(std::ostream &out, const Certificate &c)
{
    const auto f = detail::certificate_fields(c);
    for (std::size_t i = 0; i < f.size(); ++i)
        out << (i ? "," : "") << f[i].second;
    out << '\n';
}

} // namespace mimome
