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

// Largest generalized singular value
//
//   sigma_max(Hr, He) = sup_v ||Hr v|| / ||He v||
//
// and the zero-capacity test sigma_max <= 1.

#include <cmath>
#include <optional>

#include "mimome/channel.hpp"
#include "mimome/extended.hpp"
#include "mimome/linalg.hpp"

namespace mimome {

inline constexpr double kGsvRankTol = 1e-10;

struct GsvReport {
    ExtendedReal sigma_max_gen = ExtendedReal::finite(0.0);
    bool capacity_zero = false;
    double margin = 0.0; // sigma_max_gen - 1; +inf when unbounded
};

namespace detail {

struct Whitened {
    bool unbounded = false;
    ComplexMatrix W; // Hr V_r Sigma_r^{-1}, n_r x rank(He)
    ComplexMatrix Ur; // leading left singular vectors of He
};

// Restricts Hr to the row space of He and whitens by He's singular values.
inline Whitened whiten(const ChannelPair &pair)
{
    const auto f = svd(pair.He(), true);
    const double s1 = f.sigma.size() ? f.sigma(0) : 0.0;
    Index rank = 0;
    while (rank < f.sigma.size() && f.sigma(rank) > kGsvRankTol * s1)
        ++rank;

    Whitened w;
    const Index nullity = pair.nt() - rank;
    if (nullity > 0) {
        const double leak = spectral_norm(pair.Hr() * f.V.rightCols(nullity));
        if (leak > kGsvRankTol * spectral_norm(pair.Hr())) {
            w.unbounded = true;
            return w;
        }
    }
    RealVector inv(rank);
    for (Index i = 0; i < rank; ++i)
        inv(i) = 1.0 / f.sigma(i);
    w.W = pair.Hr() * f.V.leftCols(rank) * inv.asDiagonal();
    w.Ur = f.U.leftCols(rank);
    return w;
}

} // namespace detail

inline ExtendedReal largest_generalized_sv(const ChannelPair &pair)
{
    const auto w = detail::whiten(pair);
    if (w.unbounded)
        return ExtendedReal::unbounded();
    return ExtendedReal::finite(w.W.size() ? spectral_norm(w.W) : 0.0);
}

inline GsvReport zero_capacity_test(const ChannelPair &pair)
{
    GsvReport r;
    r.sigma_max_gen = largest_generalized_sv(pair);
    r.capacity_zero = r.sigma_max_gen <= 1.0;
    r.margin = r.sigma_max_gen.as_double() - 1.0;
    return r;
}

/// A coupling Phi with Phi He = Hr and sigma_max(Phi) = sigma_max(Hr, He),
/// when the latter is finite. For a zero-capacity channel this is a
/// contraction that makes the eavesdropper a degraded copy of the receiver.
inline std::optional<ComplexMatrix> degrading_coupling(const ChannelPair &pair)
{
    const auto w = detail::whiten(pair);
    if (w.unbounded)
        return std::nullopt;
    if (w.W.cols() == 0)
        return ComplexMatrix::Zero(pair.nr(), pair.ne());
    return ComplexMatrix(w.W * w.Ur.adjoint());
}

} // namespace mimome
