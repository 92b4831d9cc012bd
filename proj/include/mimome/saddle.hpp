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

// max over K, min over Phi of r_plus(K, Phi) by projected extragradient.
//
// The iteration works in the metric ||dK||^2 / P^2 + ||dPhi||^2 so that the
// two players see comparable step lengths for any power budget. Each
// iteration takes a half step from z, evaluates the gradients there, and
// takes the full step from z with those gradients. The step size eta is
// found by backtracking until
//
//   eta * ||F(z) - F(z_half)|| <= 0.9 * ||z - z_half||
//
// and grows by 1.2 after every accepted iteration.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "mimome/channel.hpp"
#include "mimome/linalg.hpp"
#include "mimome/rates.hpp"
#include "mimome/spectral.hpp"

namespace mimome {

inline constexpr double kEigSnapTol = 1e-12;
// sigma_max(Hr, He) at or below 1 + this engages the zero-capacity shortcut.
inline constexpr double kShortcutSigmaTol = 1e-12;

namespace detail {

// Euclidean projection of v onto {x >= 0, sum x <= P}.
inline RealVector project_simplex_capped(RealVector v, double P)
{
    const double snap = kEigSnapTol * std::max(1.0, P);
    for (Index i = 0; i < v.size(); ++i)
        v(i) = std::max(v(i), 0.0);
    if (v.sum() > P) {
        std::vector<double> s(v.data(), v.data() + v.size());
        std::sort(s.begin(), s.end(), std::greater<>());
        double run = 0.0, tau = 0.0;
        for (std::size_t k = 0; k < s.size(); ++k) {
            run += s[k];
            const double t = (run - P) / static_cast<double>(k + 1);
            if (k + 1 == s.size() || s[k + 1] <= t) {
                tau = t;
                break;
            }
        }
        for (Index i = 0; i < v.size(); ++i)
            v(i) = std::max(v(i) - tau, 0.0);
    }
    for (Index i = 0; i < v.size(); ++i)
        if (v(i) < snap)
            v(i) = 0.0;
    return v;
}

inline ComplexMatrix project_psd_trace(const ComplexMatrix &M, double P)
{
    const auto eig = hermitian_eig(HermitianMatrix::symmetrize(M));
    if (eig.values.size() == 0)
        return M;
    if (eig.values.minCoeff() >= 0.0 && eig.values.sum() <= P)
        return hermitian_part(M);
    const RealVector lam = project_simplex_capped(eig.values, P);
    return hermitian_part(eig.vectors * lam.asDiagonal() * eig.vectors.adjoint());
}

inline ComplexMatrix clip_singular_values(const ComplexMatrix &Phi, double cap)
{
    if (Phi.size() == 0)
        return Phi;
    auto f = svd(Phi);
    if (f.sigma(0) <= cap)
        return Phi;
    for (Index i = 0; i < f.sigma.size(); ++i)
        f.sigma(i) = std::min(f.sigma(i), cap);
    return f.U * f.sigma.asDiagonal() * f.V.adjoint();
}

} // namespace detail

/// Frobenius projection onto {K >= 0, tr K <= P}.
inline InputCovariance project_input_covariance(const HermitianMatrix &M, double P)
{
    if (!(P > 0.0) || !std::isfinite(P))
        throw DomainError("power budget must be finite and positive");
    return InputCovariance::trusted(HermitianMatrix::symmetrize(detail::project_psd_trace(M.matrix(), P)), P);
}

/// Frobenius projection onto the unit spectral-norm ball.
inline NoiseCouple project_contraction(const ComplexMatrix &Phi)
{
    require_finite(Phi, "noise coupling");
    return NoiseCouple::trusted(detail::clip_singular_values(Phi, 1.0));
}

struct SolverConfig {
    int max_iters = 20000;
    double tol_gap = 1e-7;
    // Termination also requires the natural residual ||z - z_half|| / eta to
    // fall below this; a small gap alone does not pin down the saddle.
    double tol_residual = 1e-8;
    double step0 = 0.0; // 0 selects 0.5 / ||Ht||_2^2
    bool averaging = true;
    std::uint64_t seed = 0;
    // Return immediately with K = 0 when sigma_max(Hr, He) <= 1 + kShortcutSigmaTol.
    bool spectral_shortcut = true;
    double phi_clamp = 1.0 - kSingularEps;

    void validate() const
    {
        if (!(tol_gap > 0.0))
            throw DomainError("tol_gap must be positive");
        if (!(tol_residual > 0.0))
            throw DomainError("tol_residual must be positive");
        if (max_iters < 1)
            throw DomainError("max_iters must be at least 1");
        if (step0 < 0.0 || !std::isfinite(step0))
            throw DomainError("step0 must be finite and nonnegative");
        if (!(phi_clamp > 0.0 && phi_clamp <= 1.0))
            throw DomainError("phi_clamp must lie in (0, 1]");
    }
};

enum class SolveStatus { Converged, IterationCap, ZeroCapacityDetected };

inline const char *to_string(SolveStatus s)
{
    switch (s) {
    case SolveStatus::Converged:
        return "Converged";
    case SolveStatus::IterationCap:
        return "IterationCap";
    case SolveStatus::ZeroCapacityDetected:
        return "ZeroCapacityDetected";
    }
    return "?";
}

struct SaddleResult {
    InputCovariance K_bar;
    NoiseCouple Phi_bar;
    double capacity_nats = 0.0; // r_minus(K_bar)
    double final_gap = 0.0;
    double residual = 0.0;
    int iterations = 0;
    int restarts = 0;
    bool averaged = false; // K_bar, Phi_bar are the weighted average iterate
    std::vector<double> gap_history;
    SolveStatus status = SolveStatus::IterationCap;
};

/// r_plus - r_minus at (K, Phi). Unbounded when Phi is singular and
/// incompatible with the channel.
inline ExtendedReal duality_gap(const ChannelPair &pair, const InputCovariance &K, const NoiseCouple &N)
{
    const ExtendedReal rp = evaluate_r_plus(pair, K, N);
    if (rp.is_unbounded())
        return rp;
    return ExtendedReal::finite(rp.value() - r_minus(pair, K));
}

namespace detail {

struct Point {
    ComplexMatrix K, Phi;
};

struct Eval {
    ComplexMatrix gK, gP;
    double gap = 0.0;
};

inline Eval evaluate(const ComplexMatrix &Hr, const ComplexMatrix &He, const Point &z)
{
    const Blocks b = Blocks::at(Hr, He, z.K, z.Phi);
    Eval e;
    e.gK = grad_K_raw(Hr, He, b);
    e.gP = grad_Phi_raw(z.Phi, b);
    const double rp = logdet_hpd(HermitianMatrix::symmetrize(b.Lambda)) - logdet_noise(z.Phi);
    const double rm = logdet_hpd(HermitianMatrix::symmetrize(b.Qr)) - logdet_hpd(HermitianMatrix::symmetrize(b.Qe));
    e.gap = rp - rm;
    return e;
}

class Extragradient {
public:
    Extragradient(const ChannelPair &pair, double P, const SolverConfig &cfg)
        : Hr_(pair.Hr()), He_(pair.He()), P_(P), cfg_(cfg)
    {
        step0_ = cfg.step0 > 0.0 ? cfg.step0 : 0.5 / std::pow(spectral_norm(pair.Ht()), 2);
    }

    Point step(const Point &z, const Eval &f, double eta) const
    {
        return {project_psd_trace(z.K + (eta * P_ * P_) * f.gK, P_),
                clip_singular_values(z.Phi - eta * f.gP, cfg_.phi_clamp)};
    }

    double dist(const Point &a, const Point &b) const
    {
        return std::sqrt((a.K - b.K).squaredNorm() / (P_ * P_) + (a.Phi - b.Phi).squaredNorm());
    }

    double field_dist(const Eval &a, const Eval &b) const
    {
        return std::sqrt(P_ * P_ * (a.gK - b.gK).squaredNorm() + (a.gP - b.gP).squaredNorm());
    }

    // ||z - step(z)|| / eta: zero exactly at a saddle point.
    double natural_residual(const Point &z, const Eval &f, double eta) const { return dist(z, step(z, f, eta)) / eta; }

    bool zero_saddle(const Point &z) const
    {
        return (Hr_ - z.Phi * He_).norm() <= 1e-7 * std::max(1.0, Hr_.norm());
    }

    void check_feasible(const Point &z) const
    {
        const auto eig = hermitian_eig(HermitianMatrix::symmetrize(z.K));
        const double tol = 1e-12 * std::max(1.0, P_);
        if (eig.values.size() && (eig.values.minCoeff() < -tol || eig.values.sum() > P_ + tol))
            throw NumericalBreakdown("solver iterate left the input covariance set");
        if (z.Phi.size() && spectral_norm(z.Phi) > cfg_.phi_clamp + 1e-12)
            throw NumericalBreakdown("solver iterate left the contraction set");
    }

    Point initial() const
    {
        const Index nt = Hr_.cols();
        return {identity(nt) * (P_ / static_cast<double>(nt)), ComplexMatrix::Zero(Hr_.rows(), He_.rows())};
    }

    Point restart_point(const Point &z, int restart) const
    {
        std::mt19937_64 eng(substream_seed(cfg_.seed, static_cast<std::uint64_t>(restart)));
        const Index nt = Hr_.cols();
        const ComplexMatrix A = sample_cn_matrix(nt, nt, eng);
        ComplexMatrix K = A * A.adjoint();
        K *= P_ / K.trace().real();
        return {hermitian_part(K), 0.5 * z.Phi};
    }

    const ComplexMatrix &Hr() const { return Hr_; }
    const ComplexMatrix &He() const { return He_; }
    double step0() const { return step0_; }

private:
    ComplexMatrix Hr_, He_;
    double P_;
    SolverConfig cfg_;
    double step0_ = 0.0;
};

inline SaddleResult make_result(const ChannelPair &pair, double P, const Point &z, SolveStatus status)
{
    auto K = InputCovariance::trusted(HermitianMatrix::symmetrize(z.K), P);
    const double cap = r_minus_raw(pair.Hr(), pair.He(), K.matrix());
    return SaddleResult{std::move(K), NoiseCouple::trusted(z.Phi), cap, 0.0, 0.0, 0, 0, false, {}, status};
}

} // namespace detail

/// Saddle point of r_plus over {K >= 0, tr K <= P} x {sigma_max(Phi) <= 1}.
///
/// The reported capacity is r_minus(K_bar), an achievable rate for any
/// returned K_bar. A zero-capacity channel is reported as
/// ZeroCapacityDetected with K_bar = 0 and a Phi_bar satisfying
/// Phi_bar He = Hr (up to 1e-7 relative).
inline SaddleResult solve(const ChannelPair &pair, const PowerBudget &budget, const SolverConfig &cfg = {})
{
    cfg.validate();
    const double P = budget.value();
    const Index nt = pair.nt();

    const auto gsv = cfg.spectral_shortcut ? largest_generalized_sv(pair) : ExtendedReal::unbounded();
    if (gsv.is_finite() && gsv.value() <= 1.0 + kShortcutSigmaTol) {
        const auto phi = degrading_coupling(pair);
        detail::Point z{ComplexMatrix::Zero(nt, nt), detail::clip_singular_values(*phi, 1.0)};
        auto r = detail::make_result(pair, P, z, SolveStatus::ZeroCapacityDetected);
        r.gap_history.push_back(0.0);
        return r;
    }

    const detail::Extragradient eg(pair, P, cfg);
    detail::Point z = eg.initial();
    detail::Eval fz = detail::evaluate(eg.Hr(), eg.He(), z);
    double eta = eg.step0();

    detail::Point avg{ComplexMatrix::Zero(nt, nt), ComplexMatrix::Zero(pair.nr(), pair.ne())};
    double avg_weight = 0.0;
    std::vector<double> history;
    history.reserve(static_cast<std::size_t>(std::min(cfg.max_iters, 4096)));
    int restarts = 0;
    double residual = INFINITY;
    int stalled = 0; // consecutive iterations that left z unchanged

    auto finish = [&](const detail::Point &at, SolveStatus st, double gap, double res, int iters) {
        auto r = detail::make_result(pair, P, at, st);
        r.final_gap = gap;
        r.residual = res;
        r.iterations = iters;
        r.restarts = restarts;
        r.gap_history = std::move(history);
        return r;
    };

    int it = 0;
    for (; it < cfg.max_iters; ++it) {
        try {
            detail::Point half;
            detail::Eval fh;
            double dz = 0.0;
            for (int bt = 0;; ++bt) {
                half = eg.step(z, fz, eta);
                fh = detail::evaluate(eg.Hr(), eg.He(), half);
                dz = eg.dist(z, half);
                if (dz == 0.0 || eta * eg.field_dist(fz, fh) <= 0.9 * dz)
                    break;
                if (bt > 200)
                    throw NumericalBreakdown("step size underflow in line search");
                eta *= 0.5;
            }
            z = eg.step(z, fh, eta);
            fz = detail::evaluate(eg.Hr(), eg.He(), z);
            residual = dz / eta;
            stalled = dz == 0.0 ? stalled + 1 : 0;

            if (cfg.averaging) {
                avg.K += eta * half.K;
                avg.Phi += eta * half.Phi;
                avg_weight += eta;
            }
        } catch (const NotPositiveDefinite &) {
            if (++restarts > 3)
                throw NumericalBreakdown("rate kernels failed repeatedly during the saddle iteration");
            z = eg.restart_point(z, restarts);
            fz = detail::evaluate(eg.Hr(), eg.He(), z);
            eta = eg.step0();
            avg_weight = 0.0;
            avg.K.setZero();
            avg.Phi.setZero();
            continue;
        }

        history.push_back(fz.gap);
        if ((it + 1) % 100 == 0)
            eg.check_feasible(z);

        if (eg.zero_saddle(z)) {
            detail::Point zero{ComplexMatrix::Zero(nt, nt), z.Phi};
            return finish(zero, SolveStatus::ZeroCapacityDetected, 0.0, residual, it + 1);
        }
        if (fz.gap <= cfg.tol_gap && residual <= cfg.tol_residual)
            return finish(z, SolveStatus::Converged, fz.gap, residual, it + 1);
        if (stalled >= 50) {
            ++it;
            break;
        }
        eta *= 1.2;
    }

    if (cfg.averaging && avg_weight > 0.0) {
        const detail::Point za{hermitian_part(avg.K / avg_weight), avg.Phi / avg_weight};
        try {
            const auto fa = detail::evaluate(eg.Hr(), eg.He(), za);
            const double ra = eg.natural_residual(za, fa, eta);
            if (fa.gap < fz.gap && ra <= cfg.tol_residual) {
                const auto st = fa.gap <= cfg.tol_gap ? SolveStatus::Converged : SolveStatus::IterationCap;
                auto r = finish(za, st, fa.gap, ra, it);
                r.averaged = true;
                return r;
            }
        } catch (const NotPositiveDefinite &) {
        }
    }
    return finish(z, SolveStatus::IterationCap, fz.gap, eg.natural_residual(z, fz, eg.step0()), it);
}

} // namespace mimome
