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

#include <sstream>

#include "mimome/certify.hpp"
#include "oracles.hpp"

using namespace mimome;
using Catch::Matchers::WithinAbs;

namespace {

ComplexMatrix scalar(double v)
{
    return ComplexMatrix::Constant(1, 1, cplx(v, 0.0));
}

InputCovariance cov(const ComplexMatrix &K, double P)
{
    return InputCovariance(HermitianMatrix::symmetrize(K), P);
}

// Converged saddles on random instances with positive capacity.
std::vector<std::pair<ChannelPair, SaddleResult>> converged_instances(std::uint64_t seed, int count, Index nt, Index nr,
                                                                      Index ne, double P)
{
    oracle::Rng rng(seed);
    std::vector<std::pair<ChannelPair, SaddleResult>> out;
    while (static_cast<int>(out.size()) < count) {
        auto p = rng.pair(nt, nr, ne);
        auto r = solve(p, PowerBudget(P));
        if (r.status == SolveStatus::Converged && r.capacity_nats > 1e-3)
            out.emplace_back(std::move(p), std::move(r));
    }
    return out;
}

// h(y_e | y_r) up to the common log(pi e) constant.
double conditional_entropy_e_given_r(const ChannelPair &p, const ComplexMatrix &K, const ComplexMatrix &Phi)
{
    const ComplexMatrix J = oracle::joint_output_cov(p, K, Phi);
    return oracle::logabsdet(J) - oracle::logabsdet(oracle::eye(p.nr()) + p.Hr() * K * p.Hr().adjoint());
}

const ChannelPair kScalar(scalar(2.0), scalar(1.0));
const InputCovariance kScalarK = InputCovariance(HermitianMatrix(scalar(1.0)), 1.0);
const NoiseCouple kScalarPhi(scalar(0.5));

} // namespace

TEST_CASE("factor_S")
{
    oracle::Rng rng(41);
    const ComplexMatrix S = factor_S(InputCovariance::isotropic(2, 2.0));
    CHECK(S.cols() == 2);
    CHECK((S * S.adjoint() - oracle::eye(2)).norm() <= 1e-12);

    const ComplexMatrix v = rng.cn(3, 1);
    const ComplexMatrix K1 = v * v.adjoint();
    const ComplexMatrix S1 = factor_S(cov(K1, K1.trace().real()));
    REQUIRE(S1.cols() == 1);
    CHECK((S1 * S1.adjoint() - K1).norm() <= 1e-10);
    CHECK_THAT(std::abs((S1.adjoint() * v)(0, 0)), WithinAbs(v.squaredNorm(), 1e-10));

    for (int t = 0; t < 20; ++t) {
        const ComplexMatrix K = rng.psd(4, 3.0);
        CHECK((factor_S(cov(K, 3.0)) * factor_S(cov(K, 3.0)).adjoint() - K).norm() <= 1e-9 * K.norm());
    }
    CHECK(factor_S(InputCovariance::zero(3, 1.0)).cols() == 0);
}

TEST_CASE("check_noise_condition")
{
    oracle::Rng rng(42);
    const auto p = rng.pair(3, 2, 3);
    CHECK(check_noise_condition(p, InputCovariance::zero(3, 1.0), NoiseCouple(rng.contraction(2, 3, 0.5))) == 0.0);
    CHECK(check_noise_condition(kScalar, kScalarK, kScalarPhi) == 0.0);

    for (const auto &[q, r] : converged_instances(43, 3, 3, 2, 3, 2.0))
        CHECK(check_noise_condition(q, r.K_bar, r.Phi_bar) <= 1e-5);

    for (int t = 0; t < 10; ++t) {
        const auto q = rng.pair(3, 2, 3);
        const auto K = cov(rng.psd(3, 2.0, 3), 2.0);
        CHECK(check_noise_condition(q, K, NoiseCouple(rng.contraction(2, 3, 0.8))) > 1e-3);
    }
}

TEST_CASE("check_degradedness")
{
    oracle::Rng rng(44);
    const auto p = rng.pair(3, 2, 3);
    CHECK(check_degradedness(p, ComplexMatrix(3, 0), NoiseCouple::zero(2, 3)) == 0.0);
    CHECK(check_degradedness(p, InputCovariance::zero(3, 1.0), NoiseCouple::zero(2, 3)) == 0.0);
    CHECK(check_degradedness(kScalar, kScalarK, kScalarPhi) == 0.0);
    for (const auto &[q, r] : converged_instances(45, 3, 3, 3, 2, 5.0))
        CHECK(check_degradedness(q, r.K_bar, r.Phi_bar) <= 1e-4);
}

TEST_CASE("check_input_kkt")
{
    SECTION("scalar optimum")
    {
        const auto k = check_input_kkt(kScalar, kScalarK, kScalarPhi);
        CHECK_THAT(k.lambda0, WithinAbs(0.3, 1e-12));
        CHECK_THAT(k.psi_min_eig, WithinAbs(0.0, 1e-15));
        CHECK_THAT(k.complementary_slackness, WithinAbs(0.0, 1e-15));
        CHECK_THAT(k.trace_slackness, WithinAbs(0.0, 1e-15));
    }
    SECTION("unused power has a vanishing multiplier")
    {
        oracle::Rng rng(46);
        const ComplexMatrix He = rng.cn(3, 2);
        const ChannelPair p(0.5 * He, He);
        const auto r = solve(p, PowerBudget(2.0));
        CHECK(r.K_bar.trace() < 2.0);
        CHECK(oracle::rate_difference(p, rng.psd(2, 2.0)) < 0.0);
        const auto k = check_input_kkt(p, r.K_bar, r.Phi_bar);
        CHECK(k.lambda0 <= 1e-5);
    }
    SECTION("converged instances")
    {
        for (const auto &[q, r] : converged_instances(47, 4, 3, 2, 3, 3.0)) {
            const auto k = check_input_kkt(q, r.K_bar, r.Phi_bar);
            CHECK(k.psi_min_eig >= -1e-5 * k.lambda0);
            CHECK(k.complementary_slackness <= 1e-4 * 3.0 * k.lambda0);
        }
    }
}

TEST_CASE("check_rank_M")
{
    const auto s = check_rank_M(kScalar, kScalarK, kScalarPhi);
    CHECK(s.rank == 1);
    CHECK(s.full);
    CHECK_FALSE(s.zero_saddle);

    oracle::Rng rng(48);
    const ComplexMatrix H = rng.cn(3, 2);
    const ChannelPair same(H, H);
    const auto r = solve(same, PowerBudget(1.0));
    CHECK(r.capacity_nats <= 1e-7);
    CHECK(check_rank_M(same, r.K_bar, r.Phi_bar).zero_saddle);

    for (const auto &[q, res] : converged_instances(49, 4, 3, 3, 2, 3.0))
        CHECK(check_rank_M(q, res.K_bar, res.Phi_bar).full);
}

TEST_CASE("block identities after eliminating the first dual")
{
    oracle::Rng rng(50);
    SECTION("zero input")
    {
        const auto p = rng.pair(2, 3, 2);
        const auto a = check_appendixA_identities(p, InputCovariance::zero(2, 1.0), NoiseCouple(rng.contraction(3, 2, 0.5)),
                                                  HermitianMatrix::zero(2));
        CHECK(a.r21 == 0.0);
        CHECK(a.r22 == 0.0);
        CHECK_FALSE(a.singular_elimination_warning);
    }
    SECTION("scalar optimum")
    {
        const HermitianMatrix U2 = fit_upsilon2(kScalar, kScalarK, kScalarPhi);
        CHECK(U2.matrix().norm() <= 1e-12);
        const auto a = check_appendixA_identities(kScalar, kScalarK, kScalarPhi, HermitianMatrix::zero(1));
        CHECK(a.r21 <= 1e-10);
        CHECK(a.r22 <= 1e-10);
    }
    SECTION("converged instance")
    {
        int checked = 0;
        for (const auto &[q, r] : converged_instances(51, 6, 3, 3, 2, 2.0)) {
            if (r.Phi_bar.sigma_max() >= 0.99)
                continue;
            ++checked;
            const auto a = check_appendixA_identities(q, r.K_bar, r.Phi_bar, fit_upsilon2(q, r.K_bar, r.Phi_bar));
            CHECK(a.r21 <= 1e-5);
            CHECK(a.r22 <= 1e-5);
        }
        CHECK(checked > 0);
    }
    SECTION("near-unit coupling raises the warning")
    {
        const auto p = rng.pair(2, 2, 2);
        const auto a = check_appendixA_identities(p, InputCovariance::zero(2, 1.0),
                                                  NoiseCouple((1.0 - 1e-10) * oracle::eye(2)), HermitianMatrix::zero(2));
        CHECK(a.singular_elimination_warning);
    }
}

TEST_CASE("certify: scalar optimum")
{
    const auto c = certify(kScalar, kScalarK, kScalarPhi);
    CHECK(c.passed);
    CHECK(std::abs(c.gap_nats) <= 1e-8);
    CHECK(c.noise_condition_residual <= 1e-8);
    CHECK(c.degradedness_residual <= 1e-8);
    CHECK(c.lambda_gamma_residual <= 1e-8);
    CHECK(c.rank_S == 1);
    CHECK(c.full_rank_M);
}

TEST_CASE("certify: converged instances satisfy every condition")
{
    for (const auto &[q, r] : converged_instances(52, 8, 3, 2, 3, 4.0)) {
        const auto c = certify(q, r);
        CHECK(c.passed);
        CHECK(std::abs(c.gap_nats) <= 1e-4);
        CHECK(c.noise_condition_residual <= 1e-4);
        CHECK(c.degradedness_residual <= 1e-4);
        CHECK(c.lambda_gamma_residual <= 1e-8);
        CHECK(r.capacity_nats == r_minus(q, r.K_bar));
        if (is_regular_sigma(r.Phi_bar.sigma_max())) {
            const double h = conditional_entropy_e_given_r(q, r.K_bar.matrix(), r.Phi_bar.matrix());
            const ComplexMatrix Phi = r.Phi_bar.matrix();
            const double l = oracle::logabsdet(oracle::eye(q.ne()) - Phi.adjoint() * Phi);
            CHECK_THAT(h, WithinAbs(l, 1e-6));
        }
    }
}

TEST_CASE("certify: zero-capacity saddles")
{
    oracle::Rng rng(53);
    for (int t = 0; t < 10; ++t) {
        const ComplexMatrix He = rng.cn(4, 3);
        const ChannelPair p(rng.contraction(3, 4, rng.uniform(0.1, 0.9)) * He, He);
        const auto r = solve(p, PowerBudget(2.0));
        const auto c = certify(p, r);
        CHECK(r.capacity_nats <= 1e-6);
        CHECK(c.zero_saddle);
        CHECK(c.passed);
    }
}

TEST_CASE("certify: singular coupling uses the reduced channel")
{
    oracle::Rng rng(54);
    const ComplexMatrix H = rng.cn(2, 3);
    const ChannelPair p(H, H);
    const auto c = certify(p, InputCovariance::isotropic(3, 1.0), NoiseCouple(oracle::eye(2)));
    CHECK(c.singular_units == 2);
    CHECK(c.gap_nats == 0.0);
    CHECK_FALSE(c.identities_available);
    CHECK(c.passed);

    const auto bad = certify(rng.pair(3, 2, 2), InputCovariance::isotropic(3, 1.0), NoiseCouple(oracle::eye(2)));
    CHECK(std::isinf(bad.gap_nats));
    CHECK_FALSE(bad.passed);
}

TEST_CASE("certify: a truncated solve is rejected")
{
    oracle::Rng rng(55);
    const auto p = rng.pair(3, 2, 3);
    SolverConfig cfg;
    cfg.max_iters = 2;
    cfg.spectral_shortcut = false;
    const auto r = solve(p, PowerBudget(3.0), cfg);
    CHECK_FALSE(certify(p, r).passed);
    CHECK_THROWS_AS(certify(p, InputCovariance::isotropic(2, 1.0), NoiseCouple::zero(2, 3)), DimensionMismatch);
}

TEST_CASE("certificate serialization")
{
    const auto c = certify(kScalar, kScalarK, kScalarPhi);
    std::ostringstream kv;
    write_certificate_kv(kv, c);
    const std::vector<std::string> keys = {"gap_nats",
                                           "noise_condition_residual",
                                           "degradedness_residual",
                                           "lambda0",
                                           "psi_min_eig",
                                           "complementary_slackness",
                                           "trace_slackness",
                                           "rank_S",
                                           "rank_M",
                                           "full_rank_M",
                                           "zero_saddle",
                                           "rank_S_1e-6",
                                           "rank_S_1e-10",
                                           "degradedness_1e-6",
                                           "degradedness_1e-10",
                                           "lambda_gamma_residual",
                                           "singular_units",
                                           "upsilon_residual_21",
                                           "upsilon_residual_22",
                                           "upsilon_kkt_mismatch",
                                           "singular_elimination_warning",
                                           "passed"};
    std::istringstream in(kv.str());
    std::string line;
    std::size_t i = 0;
    while (std::getline(in, line)) {
        REQUIRE(i < keys.size());
        CHECK(line.substr(0, line.find('=')) == keys[i]);
        ++i;
    }
    CHECK(i == keys.size());
    CHECK(kv.str().find("passed=true\n") != std::string::npos);

    std::ostringstream csv;
    write_certificate_csv_header(csv);
    write_certificate_csv_row(csv, c);
    std::istringstream cin(csv.str());
    std::string header, row;
    std::getline(cin, header);
    std::getline(cin, row);
    CHECK(header.rfind("gap_nats,", 0) == 0);
    CHECK(std::count(header.begin(), header.end(), ',') == std::count(row.begin(), row.end(), ','));
    CHECK(std::count(header.begin(), header.end(), ',') == static_cast<long>(keys.size() - 1));
}
