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

// Large-array behaviour of i.i.d. CN(0, 1) channels with n_t = beta n_e and
// n_r = gamma n_e antennas, and the Monte Carlo experiments that check it.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>
#include <vector>

#include "mimome/channel.hpp"
#include "mimome/errors.hpp"
#include "mimome/spectral.hpp"

namespace mimome {

struct AspectRatios {
    double beta = 0.0;  // n_t / n_e
    double gamma = 0.0; // n_r / n_e

    void validate() const
    {
        if (!std::isfinite(beta) || !std::isfinite(gamma) || beta < 0.0 || gamma < 0.0)
            throw DomainError("aspect ratios must be finite and nonnegative");
    }
};

/// Almost-sure limit of sigma_max(Hr, He)^2:
/// gamma [(1 + sqrt(1 - (1 - beta)(1 - beta / gamma))) / (1 - beta)]^2.
inline double f1_limit(const AspectRatios &r)
{
    r.validate();
    if (!(r.beta < 1.0))
        throw DomainError("f1_limit requires beta < 1");
    if (!(r.gamma > 0.0))
        throw DomainError("f1_limit requires gamma > 0");
    const double inner = 1.0 - (1.0 - r.beta) * (1.0 - r.beta / r.gamma);
    if (inner < 0.0)
        throw DomainError("f1_limit: negative discriminant");
    const double q = (1.0 + std::sqrt(inner)) / (1.0 - r.beta);
    return r.gamma * q * q;
}

/// gamma on the zero-capacity boundary: (1 - sqrt(2 beta))^2, beta in [0, 1/2].
inline double boundary_gamma(double beta)
{
    if (!(beta >= 0.0 && beta <= 0.5))
        throw DomainError("boundary_gamma requires 0 <= beta <= 1/2");
    const double t = 1.0 - std::sqrt(2.0 * beta);
    return t * t;
}

inline bool zero_region(const AspectRatios &r)
{
    r.validate();
    return r.beta <= 0.5 && r.gamma <= 1.0 && r.gamma <= boundary_gamma(r.beta);
}

struct Allocation {
    double beta_star = 0.0;
    double gamma_star = 0.0;
    double min_sum = 0.0;
};

namespace detail {

// Root of a continuous f on [lo, hi] with f(lo) < 0 < f(hi).
template <class F>
double bisect(F f, double lo, double hi)
{
    for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace detail

/// Minimizes beta + gamma over the zero-capacity boundary by locating the
/// root of d/dbeta [beta + (1 - sqrt(2 beta))^2] = 1 - 2 (1 - sqrt(2 beta)) / sqrt(2 beta).
inline Allocation optimal_allocation()
{
    const auto slope = [](double b) {
        const double s = std::sqrt(2.0 * b);
        return 1.0 - 2.0 * (1.0 - s) / s;
    };
    Allocation a;
    a.beta_star = detail::bisect(slope, 1e-300, 0.5);
    a.gamma_star = boundary_gamma(a.beta_star);
    a.min_sum = a.beta_star + a.gamma_star;
    return a;
}

/// Eavesdropper antennas per transmit-plus-receive antenna needed to force
/// zero capacity when n_r / n_t = rho.
inline double ne_per_antenna(double rho)
{
    if (!(rho >= 0.0) || !std::isfinite(rho))
        throw DomainError("antenna ratio must be finite and nonnegative");
    const auto h = [rho](double b) { return rho * b - boundary_gamma(b); };
    const double beta = detail::bisect(h, 0.0, 0.5);
    return 1.0 / (beta * (1.0 + rho));
}

/// ne_per_antenna at n_r = n_t.
inline double equal_split_ne_per_antenna()
{
    return ne_per_antenna(1.0);
}

// ---------------------------------------------------------------------------
// Monte Carlo
// ---------------------------------------------------------------------------

inline unsigned resolve_threads(unsigned requested)
{
    if (requested > 0)
        return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

struct McResult {
    double mean = 0.0;
    double stdev = 0.0;
    std::vector<double> samples; // squared sigma_max(Hr, He), by trial index
    Index nt = 0, nr = 0, ne = 0;
};

namespace detail {

inline Index scaled_dim(double ratio, Index ne)
{
    return static_cast<Index>(std::llround(ratio * static_cast<double>(ne)));
}

inline double squared_gsv_trial(Index nt, Index nr, Index ne, std::uint64_t seed)
{
    const auto s = largest_generalized_sv(sample_gaussian_pair(nt, nr, ne, seed));
    if (s.is_unbounded())
        throw NumericalBreakdown("eavesdropper channel sample is rank deficient");
    return s.value() * s.value();
}

// Runs fn(i) for i in [0, count) on up to `threads` workers.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn fn)
{
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i; !failed && (i = next.fetch_add(1)) < count;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!error)
                        error = std::current_exception();
                    failed = true;
                }
            }
        });
    for (auto &t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

inline McResult run_trials(Index nt, Index nr, Index ne, std::size_t trials, std::uint64_t master, unsigned threads)
{
    McResult out;
    out.nt = nt;
    out.nr = nr;
    out.ne = ne;
    out.samples.assign(trials, 0.0);
    parallel_for(trials, resolve_threads(threads), [&](std::size_t i) {
        out.samples[i] = squared_gsv_trial(nt, nr, ne, substream_seed(master, i));
    });
    double sum = 0.0;
    for (double v : out.samples)
        sum += v;
    out.mean = sum / static_cast<double>(trials);
    if (trials > 1) {
        double ss = 0.0;
        for (double v : out.samples)
            ss += (v - out.mean) * (v - out.mean);
        out.stdev = std::sqrt(ss / static_cast<double>(trials - 1));
    }
    return out;
}

} // namespace detail

/// Squared largest generalized singular value over `trials` independent
/// channel draws with n_t = round(beta n_e), n_r = round(gamma n_e). Trial i
/// uses substream i of `master_seed`, so results do not depend on `threads`.
inline McResult monte_carlo_gsv(const AspectRatios &r, Index ne, std::size_t trials, std::uint64_t master_seed,
                                unsigned threads = 0)
{
    r.validate();
    if (!(r.beta < 1.0))
        throw DomainError("monte_carlo_gsv requires beta < 1");
    if (ne < 1 || trials < 1)
        throw DomainError("monte_carlo_gsv requires ne >= 1 and trials >= 1");
    const Index nt = detail::scaled_dim(r.beta, ne);
    const Index nr = detail::scaled_dim(r.gamma, ne);
    if (nt < 1 || nr < 1)
        throw DomainError("antenna count rounds to zero at this n_e");
    return detail::run_trials(nt, nr, ne, trials, master_seed, threads);
}

struct PhasePoint {
    AspectRatios ratios;
    bool zero_capacity_predicted = false;
    double empirical_gsv = 0.0; // mean squared sigma_max(Hr, He)
    double stdev = 0.0;
    std::size_t trials = 0;
    Index ne = 0, nt = 0, nr = 0;
    bool degenerate = false; // an antenna count was raised from 0 to 1
};

/// Grid point k = i * |gamma_grid| + j runs on substream k of master_seed.
inline std::vector<PhasePoint> phase_diagram(const std::vector<double> &beta_grid,
                                             const std::vector<double> &gamma_grid, Index ne, std::size_t trials,
                                             std::uint64_t master_seed, unsigned threads = 0)
{
    if (beta_grid.empty() || gamma_grid.empty())
        throw DomainError("phase_diagram requires nonempty grids");
    if (ne < 1 || trials < 1)
        throw DomainError("phase_diagram requires ne >= 1 and trials >= 1");
    std::vector<PhasePoint> out;
    out.reserve(beta_grid.size() * gamma_grid.size());
    for (std::size_t i = 0; i < beta_grid.size(); ++i)
        for (std::size_t j = 0; j < gamma_grid.size(); ++j) {
            PhasePoint p;
            p.ratios = {beta_grid[i], gamma_grid[j]};
            p.ratios.validate();
            if (!(p.ratios.beta < 1.0))
                throw DomainError("phase_diagram requires beta < 1");
            p.zero_capacity_predicted = zero_region(p.ratios);
            p.ne = ne;
            p.trials = trials;
            p.nt = detail::scaled_dim(p.ratios.beta, ne);
            p.nr = detail::scaled_dim(p.ratios.gamma, ne);
            if (p.nt < 1 || p.nr < 1) {
                p.degenerate = true;
                p.nt = std::max<Index>(p.nt, 1);
                p.nr = std::max<Index>(p.nr, 1);
            }
            const std::uint64_t k = i * gamma_grid.size() + j;
            const auto mc = detail::run_trials(p.nt, p.nr, ne, trials, substream_seed(master_seed, k), threads);
            p.empirical_gsv = mc.mean;
            p.stdev = mc.stdev;
            out.push_back(p);
        }
    return out;
}

inline void write_phase_csv(std::ostream &out, const std::vector<PhasePoint> &points)
{
    out << "beta,gamma,ne,trials,mean_sq_gsv,stdev,predicted_zero\n";
    char buf[256];
    for (const auto &p : points) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%lld,%zu,%.12g,%.12g,%d\n", p.ratios.beta, p.ratios.gamma,
                      static_cast<long long>(p.ne), p.trials, p.empirical_gsv, p.stdev,
                      p.zero_capacity_predicted ? 1 : 0);
        out << buf;
    }
}

} // namespace mimome
