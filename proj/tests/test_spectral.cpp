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

#include <catch_amalgamated.hpp>

#include "mimome/saddle.hpp"
#include "mimome/spectral.hpp"
#include "oracles.hpp"

using namespace mimome;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ComplexMatrix col(double a, double b)
{
    ComplexMatrix m(2, 1);
    m << a, b;
    return m;
}

ComplexMatrix random_unitary(oracle::Rng &rng, Index n)
{
    return Eigen::HouseholderQR<ComplexMatrix>(rng.cn(n, n)).householderQ() * oracle::eye(n);
}

ComplexMatrix append_row(const ComplexMatrix &H, const ComplexMatrix &row)
{
    ComplexMatrix out(H.rows() + 1, H.cols());
    out << H, row;
    return out;
}

} // namespace

TEST_CASE("largest_generalized_sv: worked values")
{
    oracle::Rng rng(61);
    const ComplexMatrix H = rng.cn(4, 3);
    CHECK_THAT(largest_generalized_sv(ChannelPair(H, H)).value(), WithinAbs(1.0, 1e-12));
    CHECK_THAT(largest_generalized_sv(ChannelPair(2.0 * H, H)).value(), WithinAbs(2.0, 1e-12));
    CHECK_THAT(largest_generalized_sv(ChannelPair(col(3, 4), col(0, 5))).value(), WithinAbs(1.0, 1e-12));
}

TEST_CASE("largest_generalized_sv: null space of He not contained in that of Hr")
{
    oracle::Rng rng(62);
    const auto p = rng.pair(3, 2, 2);
    CHECK(largest_generalized_sv(p).is_unbounded());
    const auto rep = zero_capacity_test(p);
    CHECK(rep.sigma_max_gen.is_unbounded());
    CHECK_FALSE(rep.capacity_zero);
    CHECK(std::isinf(rep.margin));
    CHECK_FALSE(degrading_coupling(p).has_value());

    // A shared null direction is harmless.
    const ComplexMatrix A = rng.cn(2, 2), B = rng.cn(3, 2), T = rng.cn(2, 3);
    const auto q = ChannelPair(A * T, B * T);
    CHECK(largest_generalized_sv(q).is_finite());
}

TEST_CASE("largest_generalized_sv matches the pencil oracle")
{
    oracle::Rng rng(63);
    for (int t = 0; t < 50; ++t) {
        const Index nt = rng.integer(1, 3);
        const auto p = rng.pair(nt, rng.integer(1, 4), nt + rng.integer(0, 2));
        CHECK_THAT(largest_generalized_sv(p).value(), WithinRel(oracle::gsv_pencil(p), 1e-9));
    }
}

TEST_CASE("zero_capacity_test")
{
    oracle::Rng rng(64);
    const ComplexMatrix H = rng.cn(3, 2);
    const auto half = zero_capacity_test(ChannelPair(0.5 * H, H));
    CHECK(half.capacity_zero);
    CHECK_THAT(half.margin, WithinAbs(-0.5, 1e-12));

    const auto sc = zero_capacity_test(ChannelPair(ComplexMatrix::Constant(1, 1, 2.0), ComplexMatrix::Constant(1, 1, 1.0)));
    CHECK_FALSE(sc.capacity_zero);
    CHECK_THAT(sc.margin, WithinAbs(1.0, 1e-12));

    for (int t = 0; t < 50; ++t) {
        const auto p = rng.pair(2, 3, 3);
        const auto r = zero_capacity_test(p);
        CHECK(r.capacity_zero == (r.sigma_max_gen.value() <= 1.0));
        CHECK(r.margin == r.sigma_max_gen.value() - 1.0);
    }
}

TEST_CASE("degrading_coupling maps the eavesdropper onto the receiver")
{
    oracle::Rng rng(65);
    for (int t = 0; t < 20; ++t) {
        const ComplexMatrix He = rng.cn(4, 3);
        const ChannelPair p(rng.contraction(3, 4, rng.uniform(0.1, 1.0)) * He, He);
        const auto Phi = degrading_coupling(p);
        REQUIRE(Phi.has_value());
        CHECK((*Phi * p.He() - p.Hr()).norm() <= 1e-10 * std::max(1.0, p.Hr().norm()));
        CHECK(spectral_norm(*Phi) <= largest_generalized_sv(p).value() + 1e-10);
    }
}

TEST_CASE("generalized singular value properties")
{
    oracle::Rng rng(66);
    for (int t = 0; t < 50; ++t) {
        const auto p = rng.pair(2, 3, 3);
        const double s = largest_generalized_sv(p).value();
        const cplx c(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0));
        CHECK_THAT(largest_generalized_sv(ChannelPair(c * p.Hr(), p.He())).value(), WithinRel(std::abs(c) * s, 1e-9));

        const ComplexMatrix Ur = random_unitary(rng, 3), Ue = random_unitary(rng, 3);
        CHECK_THAT(largest_generalized_sv(ChannelPair(Ur * p.Hr(), Ue * p.He())).value(), WithinRel(s, 1e-9));

        CHECK(largest_generalized_sv(ChannelPair(p.Hr(), append_row(p.He(), rng.cn(1, 2)))).value() <= s * (1 + 1e-10));
        CHECK(largest_generalized_sv(ChannelPair(append_row(p.Hr(), rng.cn(1, 2)), p.He())).value() >= s * (1 - 1e-10));
    }
}

TEST_CASE("zero capacity agrees with the solver away from the boundary")
{
    oracle::Rng rng(67);
    int compared = 0;
    for (int t = 0; t < 40; ++t) {
        auto p = rng.pair(3, 3, 4);
        const double s0 = largest_generalized_sv(p).value();
        const double target = 1.0 + rng.uniform(-0.5, 0.5);
        p = ChannelPair(p.Hr() * (target / s0), p.He());
        const auto rep = zero_capacity_test(p);
        if (std::abs(rep.margin) < 0.02)
            continue;
        SolverConfig cfg;
        cfg.spectral_shortcut = false;
        const auto r = solve(p, PowerBudget(1.0), cfg);
        CHECK((r.capacity_nats < 1e-5) == rep.capacity_zero);
        ++compared;
    }
    CHECK(compared > 30);
}
