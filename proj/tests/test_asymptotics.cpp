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

#include "mimome/asymptotics.hpp"
#include "oracles.hpp"

using namespace mimome;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("f1_limit: worked values")
{
    CHECK_THAT(f1_limit({2.0 / 9.0, 1.0 / 9.0}), WithinAbs(1.0, 1e-12));
    for (double g : {0.1, 0.5, 1.0, 3.0})
        CHECK_THAT(f1_limit({1e-20, g}), WithinRel(g, 1e-9));
    CHECK_THROWS_AS(f1_limit({1.0, 0.5}), DomainError);
    CHECK_THROWS_AS(f1_limit({0.5, 0.0}), DomainError);
    CHECK_THROWS_AS(f1_limit({-0.1, 0.5}), DomainError);
}

TEST_CASE("f1_limit equals one on the zero-capacity boundary")
{
    for (int i = 1; i <= 50; ++i) {
        const double beta = 0.5 * i / 51.0;
        CHECK_THAT(f1_limit({beta, boundary_gamma(beta)}), WithinAbs(1.0, 1e-10));
    }
}

TEST_CASE("zero_region")
{
    CHECK(zero_region({0.5, 0.0}));
    CHECK(zero_region({0.0, 1.0}));
    CHECK_FALSE(zero_region({0.0, 1.01}));
    CHECK(zero_region({2.0 / 9.0, 1.0 / 9.0}));
    CHECK_FALSE(zero_region({2.0 / 9.0, 1.0 / 9.0 + 1e-9}));
    CHECK_FALSE(zero_region({0.51, 0.0}));

    oracle::Rng rng(71);
    for (int t = 0; t < 500; ++t) {
        const double b = rng.uniform(0.0, 0.5), g = rng.uniform(0.0, 1.2);
        if (zero_region({b, g})) {
            CHECK(zero_region({b, g * rng.uniform()}));
            CHECK(zero_region({b * rng.uniform(), g}));
        }
    }
}

TEST_CASE("optimal_allocation")
{
    const auto a = optimal_allocation();
    CHECK_THAT(a.beta_star, WithinAbs(2.0 / 9.0, 1e-9));
    CHECK_THAT(a.gamma_star, WithinAbs(1.0 / 9.0, 1e-9));
    CHECK_THAT(a.min_sum, WithinAbs(1.0 / 3.0, 1e-9));
    CHECK(0.3 + boundary_gamma(0.3) > 1.0 / 3.0);
    for (int i = 0; i <= 1000; ++i) {
        const double b = 0.5 * i / 1000.0;
        CHECK(b + boundary_gamma(b) >= a.min_sum - 1e-12);
    }
}

TEST_CASE("eavesdropper antennas per sender plus receiver antenna")
{
    CHECK_THAT(ne_per_antenna(0.5), WithinAbs(3.0, 1e-9));
    CHECK_THAT(equal_split_ne_per_antenna(), WithinAbs((3.0 + 2.0 * std::sqrt(2.0)) / 2.0, 1e-9));
    for (int i = 1; i <= 200; ++i)
        CHECK(ne_per_antenna(0.02 * i) <= 3.0 + 1e-9);
    CHECK_THROWS_AS(ne_per_antenna(-1.0), DomainError);
}

TEST_CASE("monte_carlo_gsv: determinism")
{
    const AspectRatios r{0.25, 0.5};
    const auto a = monte_carlo_gsv(r, 40, 12, 7, 1);
    const auto b = monte_carlo_gsv(r, 40, 12, 7, 4);
    const auto c = monte_carlo_gsv(r, 40, 12, 7, 3);
    CHECK(a.samples == b.samples);
    CHECK(a.samples == c.samples);
    CHECK(a.mean == b.mean);
    CHECK(a.nt == 10);
    CHECK(a.nr == 20);
    CHECK(a.ne == 40);

    // Trial i is a function of (master seed, i) alone.
    const auto d = monte_carlo_gsv(r, 40, 5, 7, 2);
    CHECK(std::equal(d.samples.begin(), d.samples.end(), a.samples.begin()));
    for (std::size_t i = 0; i < d.samples.size(); ++i) {
        const auto s = largest_generalized_sv(sample_gaussian_pair(10, 20, 40, substream_seed(7, i))).value();
        CHECK(d.samples[i] == s * s);
    }
    CHECK(monte_carlo_gsv(r, 40, 5, 8, 1).samples != d.samples);
}

TEST_CASE("monte_carlo_gsv: rejects degenerate dimensions")
{
    CHECK_THROWS_AS(monte_carlo_gsv({0.01, 0.5}, 10, 3, 1), DomainError);
    CHECK_THROWS_AS(monte_carlo_gsv({0.25, 0.5}, 0, 3, 1), DomainError);
    CHECK_THROWS_AS(monte_carlo_gsv({1.0, 0.5}, 10, 3, 1), DomainError);
}

TEST_CASE("monte_carlo_gsv: the squared value tracks f1_limit as n_e grows")
{
    const AspectRatios r{0.25, 0.5};
    const double f = f1_limit(r);
    std::vector<double> err;
    for (Index ne : {100, 200, 400}) {
        const auto mc = monte_carlo_gsv(r, ne, 20, 11, 0);
        err.push_back(std::abs(mc.mean - f));
        // Squared reading: the unsquared mean sits near sqrt(f), far from f.
        CHECK(std::abs(std::sqrt(mc.mean) - f) > 0.5);
    }
    int nonincreasing = 0;
    for (std::size_t i = 1; i < err.size(); ++i)
        nonincreasing += err[i] <= err[i - 1];
    CHECK(nonincreasing >= 1);
}

TEST_CASE("monte_carlo_gsv: within 5% of f1_limit at n_e = 200", "[mc-accuracy]")
{
    const AspectRatios r{0.25, 0.5};
    const auto mc = monte_carlo_gsv(r, 200, 50, 2026, 0);
    INFO("mean " << mc.mean << " limit " << f1_limit(r));
    CHECK(std::abs(mc.mean - f1_limit(r)) <= 0.05 * f1_limit(r));
}

TEST_CASE("phase_diagram")
{
    const std::vector<double> betas = {0.1, 0.3}, gammas = {0.2, 0.6, 1.5};
    const auto a = phase_diagram(betas, gammas, 20, 4, 5, 1);
    const auto b = phase_diagram(betas, gammas, 20, 4, 5, 3);
    REQUIRE(a.size() == 6);
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].empirical_gsv == b[k].empirical_gsv);
        CHECK(a[k].ratios.beta == betas[k / 3]);
        CHECK(a[k].ratios.gamma == gammas[k % 3]);
        CHECK(a[k].zero_capacity_predicted == zero_region(a[k].ratios));
        CHECK(a[k].trials == 4);
        CHECK_FALSE(a[k].degenerate);
    }
    // Point k runs on substream k of the master seed.
    const auto single = detail::run_trials(6, 12, 20, 4, substream_seed(5, 4), 1);
    CHECK(a[4].empirical_gsv == single.mean);

    const auto deg = phase_diagram({0.01}, {0.5}, 10, 2, 1, 1);
    CHECK(deg[0].degenerate);
    CHECK(deg[0].nt == 1);

    CHECK_THROWS_AS(phase_diagram({}, {0.5}, 10, 2, 1), DomainError);
    CHECK_THROWS_AS(phase_diagram({0.2}, {0.5}, 10, 0, 1), DomainError);

    std::ostringstream csv;
    write_phase_csv(csv, a);
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "beta,gamma,ne,trials,mean_sq_gsv,stdev,predicted_zero");
    int rows = 0;
    while (std::getline(in, line)) {
        CHECK(std::count(line.begin(), line.end(), ',') == 6);
        ++rows;
    }
    CHECK(rows == 6);
    CHECK(csv.str().find("\n0.1,0.2,20,4,") != std::string::npos);
}

TEST_CASE("phase boundary point: empirical mean within 10% of one at n_e = 300", "[boundary-mc]")
{
    const auto pts = phase_diagram({2.0 / 9.0}, {1.0 / 9.0}, 300, 20, 2026, 0);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].zero_capacity_predicted);
    INFO("mean " << pts[0].empirical_gsv);
    CHECK(std::abs(pts[0].empirical_gsv - 1.0) <= 0.1);
}
