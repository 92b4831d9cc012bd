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

// Rate functionals of the Gaussian wiretap channel
//
//   y_r = Hr x + z_r,   y_e = He x + z_e,   x ~ CN(0, K),
//
// with unit-variance noises whose cross-covariance E[z_r z_e^H] = Phi is a
// contraction. The noise covariance is K_Phi = [[I, Phi], [Phi^H, I]].
//
//   r_plus(K, Phi) = I(x; y_r | y_e) = log det Lambda(K) - log det(I - Phi Phi^H)
//   r_minus(K)     = log det(I + Hr K Hr^H) - log det(I + He K He^H)
//
// where Lambda(K) is the Schur complement of the joint output covariance
// w.r.t. the eavesdropper block. All values are in nats.

#include <algorithm>
#include <cmath>
#include <optional>

#include "mimome/channel.hpp"
#include "mimome/extended.hpp"
#include "mimome/linalg.hpp"

namespace mimome {

// Singular values above 1 - kSingularEps are treated as exactly one. The
// solver clamps its iterates at that value, hence the rounding allowance.
inline constexpr double kSingularEps = 1e-9;
inline constexpr double kRegularSigmaMax = 1.0 - kSingularEps;

inline bool is_regular_sigma(double s) noexcept
{
    return s <= kRegularSigmaMax + 1e-12;
}

/// Input covariance K: Hermitian, PSD, trace at most P.
class InputCovariance {
public:
    InputCovariance(const HermitianMatrix &K, double power) : K_(K), power_(power)
    {
        if (!(power > 0.0) || !std::isfinite(power))
            throw DomainError("input covariance power budget must be positive");
        const auto eig = hermitian_eig(K_);
        if (eig.values.size() > 0) {
            const double lmax = std::max(eig.values.maxCoeff(), 0.0);
            if (eig.values.minCoeff() < -1e-10 * std::max(lmax, 1e-300))
                throw DomainError("input covariance is not positive semidefinite");
        }
        if (K_.trace() > power * (1.0 + 1e-10))
            throw DomainError("input covariance exceeds the power budget");
    }

    // Skips validation; for values produced by a projection onto the feasible set.
    static InputCovariance trusted(const HermitianMatrix &K, double power) { return InputCovariance(K, power, 0); }

    static InputCovariance zero(Index nt, double power) { return trusted(HermitianMatrix::zero(nt), power); }
    static InputCovariance isotropic(Index nt, double power)
    {
        return trusted(HermitianMatrix::symmetrize(identity(nt) * (power / static_cast<double>(nt))), power);
    }

    const ComplexMatrix &matrix() const noexcept { return K_.matrix(); }
    const HermitianMatrix &hermitian() const noexcept { return K_; }
    double power() const noexcept { return power_; }
    Index dim() const noexcept { return K_.dim(); }
    double trace() const { return K_.trace(); }

private:
    InputCovariance(const HermitianMatrix &K, double power, int) : K_(K), power_(power) {}
    HermitianMatrix K_;
    double power_;
};

/// Noise cross-covariance Phi (n_r x n_e) with sigma_max(Phi) <= 1.
class NoiseCouple {
public:
    explicit NoiseCouple(ComplexMatrix Phi) : Phi_(std::move(Phi))
    {
        require_finite(Phi_, "noise coupling");
        if (spectral_norm(Phi_) > 1.0 + 1e-10)
            throw DomainError("noise coupling is not a contraction");
    }

    static NoiseCouple trusted(ComplexMatrix Phi) { return NoiseCouple(std::move(Phi), 0); }
    static NoiseCouple zero(Index nr, Index ne) { return trusted(ComplexMatrix::Zero(nr, ne)); }

    const ComplexMatrix &matrix() const noexcept { return Phi_; }
    double sigma_max() const { return spectral_norm(Phi_); }

    // Full noise covariance [[I, Phi], [Phi^H, I]].
    ComplexMatrix covariance() const
    {
        const Index nr = Phi_.rows(), ne = Phi_.cols();
        ComplexMatrix out(nr + ne, nr + ne);
        out << identity(nr), Phi_, Phi_.adjoint(), identity(ne);
        return out;
    }

private:
    NoiseCouple(ComplexMatrix Phi, int) : Phi_(std::move(Phi)) {}
    ComplexMatrix Phi_;
};

namespace detail {

inline void check_shapes(const ChannelPair &pair, const ComplexMatrix &K, const ComplexMatrix &Phi)
{
    if (K.rows() != pair.nt() || K.cols() != pair.nt())
        throw DimensionMismatch("input covariance must be n_t x n_t");
    if (Phi.rows() != pair.nr() || Phi.cols() != pair.ne())
        throw DimensionMismatch("noise coupling must be n_r x n_e");
}

// log det(I - Phi Phi^H) from the singular values, using (1 - s)(1 + s) so
// the result stays accurate as s approaches one.
inline double logdet_noise(const ComplexMatrix &Phi)
{
    if (Phi.size() == 0)
        return 0.0;
    const RealVector s = svd(Phi).sigma;
    double acc = 0.0;
    for (Index i = 0; i < s.size(); ++i) {
        if (!(s(i) < 1.0))
            throw NotPositiveDefinite("noise covariance is singular (sigma_max(Phi) >= 1)");
        acc += std::log((1.0 - s(i)) * (1.0 + s(i)));
    }
    return acc;
}

// (I - Phi Phi^H)^{-1} Phi = U diag(s / (1 - s^2)) V^H.
inline ComplexMatrix noise_resolvent_phi(const ComplexMatrix &Phi)
{
    if (Phi.size() == 0)
        return Phi;
    const auto f = svd(Phi);
    RealVector w(f.sigma.size());
    for (Index i = 0; i < w.size(); ++i) {
        if (!(f.sigma(i) < 1.0))
            throw NotPositiveDefinite("noise covariance is singular (sigma_max(Phi) >= 1)");
        w(i) = f.sigma(i) / ((1.0 - f.sigma(i)) * (1.0 + f.sigma(i)));
    }
    return f.U * w.asDiagonal() * f.V.adjoint();
}

/// Intermediate matrices shared by the rate and gradient formulas at (K, Phi).
struct Blocks {
    ComplexMatrix Qr;     // I + Hr K Hr^H
    ComplexMatrix Qe;     // I + He K He^H
    ComplexMatrix C;      // Phi + Hr K He^H
    ComplexMatrix Qe_inv; // (I + He K He^H)^{-1}
    ComplexMatrix Theta;  // C Qe^{-1}
    ComplexMatrix Lambda; // Qr - C Qe^{-1} C^H

    static Blocks at(const ComplexMatrix &Hr, const ComplexMatrix &He, const ComplexMatrix &K,
                     const ComplexMatrix &Phi)
    {
        Blocks b;
        const ComplexMatrix KHe = K * He.adjoint();
        b.Qr = hermitian_part(identity(Hr.rows()) + Hr * K * Hr.adjoint());
        b.Qe = hermitian_part(identity(He.rows()) + He * KHe);
        b.C = Phi + Hr * KHe;
        b.Qe_inv = inverse_hpd(HermitianMatrix::symmetrize(b.Qe));
        b.Theta = b.C * b.Qe_inv;
        b.Lambda = hermitian_part(b.Qr - b.Theta * b.C.adjoint());
        return b;
    }
};

inline double r_plus_raw(const ComplexMatrix &Hr, const ComplexMatrix &He, const ComplexMatrix &K,
                         const ComplexMatrix &Phi)
{
    if (K.isZero(0.0))
        return 0.0;
    const Blocks b = Blocks::at(Hr, He, K, Phi);
    return logdet_hpd(HermitianMatrix::symmetrize(b.Lambda)) - logdet_noise(Phi);
}

inline double r_minus_raw(const ComplexMatrix &Hr, const ComplexMatrix &He, const ComplexMatrix &K)
{
    const auto Qr = HermitianMatrix::symmetrize(identity(Hr.rows()) + Hr * K * Hr.adjoint());
    const auto Qe = HermitianMatrix::symmetrize(identity(He.rows()) + He * K * He.adjoint());
    return logdet_hpd(Qr) - logdet_hpd(Qe);
}

// Gradient of r_plus in K, MMSE form (Hr - Theta He)^H Lambda^{-1} (Hr - Theta He).
inline ComplexMatrix grad_K_raw(const ComplexMatrix &Hr, const ComplexMatrix &He, const Blocks &b)
{
    const ComplexMatrix E = Hr - b.Theta * He;
    const auto llt = checked_llt(b.Lambda, "Lambda");
    return hermitian_part(E.adjoint() * llt.solve(E));
}

// Gradient of r_plus in Phi under <X, Y> = Re tr(X^H Y):
// twice the (1,2) block of (K_Phi + Ht K Ht^H)^{-1} - K_Phi^{-1}.
inline ComplexMatrix grad_Phi_raw(const ComplexMatrix &Phi, const Blocks &b)
{
    const auto llt = checked_llt(b.Lambda, "Lambda");
    return 2.0 * (noise_resolvent_phi(Phi) - llt.solve(b.Theta));
}

inline void require_regular(const NoiseCouple &N, const char *what)
{
    if (!is_regular_sigma(N.sigma_max()))
        throw DomainError(std::string(what) + " requires sigma_max(Phi) <= 1 - 1e-9; use the singular-coupling path");
}

} // namespace detail

/// Conditional mutual information I(x; y_r | y_e) for a regular coupling,
/// computed from the Schur complement Lambda(K).
///
/// Requires sigma_max(Phi) <= 1 - kSingularEps; see evaluate_r_plus() for a
/// version that dispatches to the singular path.
inline double r_plus(const ChannelPair &pair, const InputCovariance &K, const NoiseCouple &N)
{
    detail::check_shapes(pair, K.matrix(), N.matrix());
    detail::require_regular(N, "r_plus");
    return detail::r_plus_raw(pair.Hr(), pair.He(), K.matrix(), N.matrix());
}

/// Same quantity through the joint output covariance:
/// log det(K_Phi + Ht K Ht^H) - log det K_Phi - log det(I + He K He^H).
inline double r_plus_joint(const ChannelPair &pair, const InputCovariance &K, const NoiseCouple &N)
{
    detail::check_shapes(pair, K.matrix(), N.matrix());
    const ComplexMatrix Ht = pair.Ht();
    const ComplexMatrix KPhi = N.covariance();
    const auto joint = HermitianMatrix::symmetrize(KPhi + Ht * K.matrix() * Ht.adjoint());
    const auto Qe = HermitianMatrix::symmetrize(identity(pair.ne()) + pair.He() * K.matrix() * pair.He().adjoint());
    return logdet_hpd(joint) - logdet_hpd(HermitianMatrix::symmetrize(KPhi)) - logdet_hpd(Qe);
}

inline double r_minus(const ChannelPair &pair, const InputCovariance &K)
{
    if (K.dim() != pair.nt())
        throw DimensionMismatch("input covariance must be n_t x n_t");
    return detail::r_minus_raw(pair.Hr(), pair.He(), K.matrix());
}

/// Split of a (near-)singular coupling Phi = [U1 U2] diag(I, Delta) [V1 V2]^H.
struct SingularReduction {
    Index unit_count = 0;           // d: singular values above 1 - kSingularEps
    double compat_residual = 0.0;   // ||U1^H Hr - V1^H He||_F
    bool compatible = true;         // residual <= 1e-6 ||Hr||_F
    std::optional<ChannelPair> reduced; // (U2^H Hr, He); empty when d == n_r
    ComplexMatrix phi_hat;          // U2^H Phi, strictly contractive
};

inline SingularReduction reduce_singular(const ChannelPair &pair, const NoiseCouple &N)
{
    const ComplexMatrix &Phi = N.matrix();
    if (Phi.rows() != pair.nr() || Phi.cols() != pair.ne())
        throw DimensionMismatch("noise coupling must be n_r x n_e");
    const auto f = svd(Phi, true);
    SingularReduction out;
    while (out.unit_count < f.sigma.size() && !is_regular_sigma(f.sigma(out.unit_count)))
        ++out.unit_count;
    const Index d = out.unit_count;
    if (d > 0) {
        const ComplexMatrix U1 = f.U.leftCols(d);
        const ComplexMatrix V1 = f.V.leftCols(d);
        out.compat_residual = (U1.adjoint() * pair.Hr() - V1.adjoint() * pair.He()).norm();
        out.compatible = out.compat_residual <= 1e-6 * pair.Hr().norm();
    }
    const Index keep = pair.nr() - d;
    if (keep > 0) {
        const ComplexMatrix U2 = f.U.rightCols(keep);
        out.reduced.emplace(U2.adjoint() * pair.Hr(), pair.He());
        out.phi_hat = U2.adjoint() * Phi;
    }
    return out;
}

/// r_plus when Phi has unit singular values: the perfectly correlated noise
/// directions either reveal x exactly (incompatible channels, unbounded rate)
/// or carry no information, in which case the rate is that of the reduced
/// receiver U2^H y_r.
inline ExtendedReal r_plus_singular(const ChannelPair &pair, const InputCovariance &K, const NoiseCouple &N)
{
    detail::check_shapes(pair, K.matrix(), N.matrix());
    const auto red = reduce_singular(pair, N);
    if (red.unit_count == 0)
        return ExtendedReal::finite(detail::r_plus_raw(pair.Hr(), pair.He(), K.matrix(), N.matrix()));
    if (!red.compatible)
        return ExtendedReal::unbounded();
    if (!red.reduced)
        return ExtendedReal::finite(0.0);
    return ExtendedReal::finite(detail::r_plus_raw(red.reduced->Hr(), red.reduced->He(), K.matrix(), red.phi_hat));
}

/// r_plus on either path, chosen by sigma_max(Phi).
inline ExtendedReal evaluate_r_plus(const ChannelPair &pair, const InputCovariance &K, const NoiseCouple &N)
{
    if (!is_regular_sigma(N.sigma_max()))
        return r_plus_singular(pair, K, N);
    return ExtendedReal::finite(r_plus(pair, K, N));
}

/// Linear MMSE coefficient of y_r given y_e:
/// Theta = (Hr K He^H + Phi)(I + He K He^H)^{-1}.
inline ComplexMatrix theta_matrix(const ChannelPair &pair, const InputCovariance &K, const NoiseCouple &N)
{
    detail::check_shapes(pair, K.matrix(), N.matrix());
    return detail::Blocks::at(pair.Hr(), pair.He(), K.matrix(), N.matrix()).Theta;
}

/// Schur complement Lambda(K) = Qr - (Phi + Hr K He^H) Qe^{-1} (Phi + Hr K He^H)^H.
inline HermitianMatrix lambda_matrix(const ChannelPair &pair, const InputCovariance &K, const NoiseCouple &N)
{
    detail::check_shapes(pair, K.matrix(), N.matrix());
    const ComplexMatrix KHe = K.matrix() * pair.He().adjoint();
    const ComplexMatrix Qr = identity(pair.nr()) + pair.Hr() * K.matrix() * pair.Hr().adjoint();
    const ComplexMatrix Qe = identity(pair.ne()) + pair.He() * KHe;
    const ComplexMatrix C = N.matrix() + pair.Hr() * KHe;
    return schur_complement(Qr, C, C.adjoint(), hermitian_part(Qe));
}

/// Error covariance of y_r - Theta y_e for a fixed estimator Theta:
/// I + Theta Theta^H - Theta Phi^H - Phi Theta^H + (Hr - Theta He) K (Hr - Theta He)^H.
inline HermitianMatrix gamma_matrix(const ChannelPair &pair, const InputCovariance &K, const NoiseCouple &N,
                                    const ComplexMatrix &Theta)
{
    detail::check_shapes(pair, K.matrix(), N.matrix());
    const ComplexMatrix &Phi = N.matrix();
    const ComplexMatrix E = pair.Hr() - Theta * pair.He();
    return HermitianMatrix::symmetrize(identity(pair.nr()) + Theta * Theta.adjoint() - Theta * Phi.adjoint() -
                                       Phi * Theta.adjoint() + E * K.matrix() * E.adjoint());
}

struct RateBreakdown {
    double r_plus = 0.0;
    double r_minus = 0.0;
    double gap = 0.0;
    ComplexMatrix theta;
    HermitianMatrix lambda_schur;
};

inline RateBreakdown rate_breakdown(const ChannelPair &pair, const InputCovariance &K, const NoiseCouple &N)
{
    detail::check_shapes(pair, K.matrix(), N.matrix());
    detail::require_regular(N, "rate_breakdown");
    const auto b = detail::Blocks::at(pair.Hr(), pair.He(), K.matrix(), N.matrix());
    RateBreakdown out;
    out.lambda_schur = HermitianMatrix::symmetrize(b.Lambda);
    out.theta = b.Theta;
    out.r_plus = logdet_hpd(out.lambda_schur) - detail::logdet_noise(N.matrix());
    out.r_minus = r_minus(pair, K);
    out.gap = out.r_plus - out.r_minus;
    return out;
}

/// Ascent direction of r_plus in K, in the MMSE form
/// (Hr - Theta He)^H Lambda^{-1} (Hr - Theta He).
inline HermitianMatrix grad_K(const ChannelPair &pair, const InputCovariance &K, const NoiseCouple &N)
{
    detail::check_shapes(pair, K.matrix(), N.matrix());
    detail::require_regular(N, "grad_K");
    const auto b = detail::Blocks::at(pair.Hr(), pair.He(), K.matrix(), N.matrix());
    return HermitianMatrix::symmetrize(detail::grad_K_raw(pair.Hr(), pair.He(), b));
}

/// The same gradient from the joint covariance:
/// Ht^H (Ht K Ht^H + K_Phi)^{-1} Ht - He^H (I + He K He^H)^{-1} He.
inline HermitianMatrix grad_K_joint(const ChannelPair &pair, const InputCovariance &K, const NoiseCouple &N)
{
    detail::check_shapes(pair, K.matrix(), N.matrix());
    detail::require_regular(N, "grad_K_joint");
    const ComplexMatrix Ht = pair.Ht();
    const auto joint = HermitianMatrix::symmetrize(N.covariance() + Ht * K.matrix() * Ht.adjoint());
    const auto Qe = HermitianMatrix::symmetrize(identity(pair.ne()) + pair.He() * K.matrix() * pair.He().adjoint());
    return HermitianMatrix::symmetrize(Ht.adjoint() * inverse_hpd(joint) * Ht -
                                       pair.He().adjoint() * inverse_hpd(Qe) * pair.He());
}

/// Gradient of r_plus with respect to Phi for the real inner product
/// Re tr(X^H Y). The minimizing player steps along its negative.
inline ComplexMatrix grad_Phi(const ChannelPair &pair, const InputCovariance &K, const NoiseCouple &N)
{
    detail::check_shapes(pair, K.matrix(), N.matrix());
    detail::require_regular(N, "grad_Phi");
    const auto b = detail::Blocks::at(pair.Hr(), pair.He(), K.matrix(), N.matrix());
    return detail::grad_Phi_raw(N.matrix(), b);
}

} // namespace mimome
