// SPDX-License-Identifier: Apache-2.0
//
// ris-corr: spatial-temporal correlation and degrees of freedom of RIS arrays
// Copyright (C) 2026 The ris-corr authors
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

#include "ris/dof.hpp"
#include "ris/geometry.hpp"
#include "ris/kernel.hpp"
#include "ris/spectrum.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace ris;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double lambda = 1.0;

EigenSpectrum spectrum_of(double aperture, double spacing)
{
    const auto g = make_grid(aperture, aperture, spacing, spacing, lambda);
    return symmetric_eigenvalues(correlation_matrix(g, 0.0, MotionState()));
}

EigenSpectrum literal(std::vector<double> ev)
{
    EigenSpectrum s;
    s.eigenvalues = std::move(ev);
    for (double v : s.eigenvalues)
        s.trace += v;
    return s;
}

} // namespace

TEST_CASE("symmetric_eigenvalues")
{
    SECTION("identity matrix")
    {
        const auto g = make_grid_with_counts(3, 3, 0.5, 0.5, lambda);
        const CorrelationMatrix r{Eigen::MatrixXd::Identity(9, 9), 0.0, MotionState(), g.meta()};
        const auto s = symmetric_eigenvalues(r);
        REQUIRE(s.size() == 9);
        for (double v : s.eigenvalues)
            CHECK_THAT(v, WithinAbs(1.0, 1e-14));
        CHECK(s.trace == 9.0);
    }
    SECTION("eighth-wavelength pair: 1 +- sinc(1/4)")
    {
        const auto g = make_grid_with_counts(2, 1, lambda / 8, lambda / 8, lambda);
        const auto s = symmetric_eigenvalues(correlation_matrix(g, 0.0, MotionState()));
        CHECK_THAT(s.eigenvalues[0], WithinAbs(1.9003163161571061, 1e-14));
        CHECK_THAT(s.eigenvalues[1], WithinAbs(0.09968368384289393, 1e-14));
    }
    SECTION("descending order")
    {
        const auto s = spectrum_of(2.0, 0.25);
        for (std::size_t i = 1; i < s.size(); ++i)
            REQUIRE(s.eigenvalues[i - 1] >= s.eigenvalues[i]);
    }
    SECTION("lagged matrix is rejected")
    {
        const auto g = make_grid(1.0, 1.0, 0.25, 0.25, lambda);
        const auto r = correlation_matrix(g, 0.1, MotionState(1.0, 0.0, 1.0));
        CHECK_THROWS_AS(symmetric_eigenvalues(r), unsupported_input);
    }
    SECTION("asymmetric matrix is rejected")
    {
        const auto g = make_grid_with_counts(2, 1, 0.5, 0.5, lambda);
        Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 2);
        a(0, 1) = 1e-6;
        CHECK_THROWS_AS(symmetric_eigenvalues({a, 0.0, MotionState(), g.meta()}), invalid_parameter);
    }
    SECTION("indefinite matrix breaks the covariance contract")
    {
        const auto g = make_grid_with_counts(2, 1, 0.5, 0.5, lambda);
        Eigen::MatrixXd a(2, 2);
        a << 1.0, 2.0, 2.0, 1.0;
        CHECK_THROWS_AS(symmetric_eigenvalues({a, 0.0, MotionState(), g.meta()}), numerical_error);
    }
}

TEST_CASE("spectra of random grids conserve trace and stay PSD")
{
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> count(1, 8);
    std::uniform_real_distribution<double> spacing(0.05, 0.75);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto g = make_grid_with_counts(count(rng), count(rng), spacing(rng), spacing(rng), lambda);
        const auto s = symmetric_eigenvalues(correlation_matrix(g, 0.0, MotionState()));
        const double n = static_cast<double>(g.size());
        double sum = 0.0;
        for (double v : s.eigenvalues)
            sum += v;
        REQUIRE(std::abs(sum - n) <= 1e-8 * n);
        REQUIRE(std::abs(s.trace - n) <= 1e-8 * n);
        REQUIRE(s.smallest() >= -1e-8 * n);
    }
}

TEST_CASE("power_capture")
{
    const auto g = make_grid_with_counts(2, 1, lambda / 8, lambda / 8, lambda);
    const auto s = symmetric_eigenvalues(correlation_matrix(g, 0.0, MotionState()));

    CHECK_THAT(power_capture(s, 1), WithinAbs(0.95015815807855303, 1e-14));
    CHECK_THAT(power_capture(s, 2), WithinAbs(1.0, 1e-15));
    CHECK_THROWS_AS(power_capture(s, 0), index_error);
    CHECK_THROWS_AS(power_capture(s, 3), index_error);

    SECTION("tiny negative eigenvalues are clamped")
    {
        const auto t = literal({2.0, 1.0, -1e-12});
        CHECK(power_capture(t, 2) == 1.0);
    }
    SECTION("monotone in k")
    {
        const auto big = spectrum_of(2.0, 0.25);
        double prev = 0.0;
        for (std::size_t k = 1; k <= big.size(); ++k) {
            const double p = power_capture(big, k);
            REQUIRE(p >= prev);
            prev = p;
        }
        CHECK_THAT(prev, WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("effective_rank rules")
{
    SECTION("two-level spectrum")
    {
        CHECK(effective_rank(literal({1.9, 0.1})) == 1);
        CHECK(effective_rank(literal({1.9, 0.1}), RankMethod::ratio()) == 1);
    }
    SECTION("step spectrum: the knee sits at the step")
    {
        const auto s = literal({1, 1, 1, 1, 1, 1e-2, 1e-2, 1e-2, 1e-2, 1e-2});
        CHECK(effective_rank(s) == 5);
        CHECK(effective_rank(s, RankMethod::ratio()) == 5);
    }
    SECTION("flat spectrum has no knee")
    {
        CHECK_THROWS_AS(effective_rank(literal({1, 1, 1, 1})), degenerate_spectrum);
        CHECK_THROWS_AS(effective_rank(literal({1, 1, 1, 1}), RankMethod::ratio()), degenerate_spectrum);
        CHECK_THROWS_AS(effective_rank(literal({0, 0})), degenerate_spectrum);
        CHECK_THROWS_AS(effective_rank(literal({})), invalid_parameter);
    }
    SECTION("power and threshold")
    {
        const auto s = literal({4, 3, 2, 1});
        CHECK(effective_rank(s, RankMethod::power(0.9)) == 3);
        CHECK(effective_rank(s, RankMethod::power(0.91)) == 4);
        CHECK(effective_rank(s, RankMethod::power(0.3)) == 1);
        CHECK(effective_rank(s, RankMethod::threshold(0.5)) == 3);
        CHECK(effective_rank(s, RankMethod::threshold(1.0)) == 1);
        // Power and threshold are defined even without decay.
        CHECK(effective_rank(literal({1, 1, 1, 1}), RankMethod::threshold(0.5)) == 4);
    }
}

TEST_CASE("parse_rank_method")
{
    auto same = [](const RankMethod& a, const RankMethod& b) {
        return a.kind == b.kind && a.parameter == b.parameter;
    };
    CHECK(same(parse_rank_method("knee"), RankMethod::knee()));
    CHECK(same(parse_rank_method("knee:1e-4"), RankMethod::knee(1e-4)));
    CHECK(same(parse_rank_method("ratio"), RankMethod::ratio()));
    CHECK(same(parse_rank_method("power:0.95"), RankMethod::power(0.95)));
    CHECK(same(parse_rank_method("threshold:0.01"), RankMethod::threshold(0.01)));

    for (const auto& m : {RankMethod::knee(), RankMethod::knee(2e-3), RankMethod::ratio(), RankMethod::power(0.9),
                          RankMethod::threshold(0.125)})
        CHECK(same(parse_rank_method(m.to_string()), m));

    CHECK_THROWS_AS(parse_rank_method("power"), invalid_parameter);
    CHECK_THROWS_AS(parse_rank_method("power:1.5"), invalid_parameter);
    CHECK_THROWS_AS(parse_rank_method("threshold:0"), invalid_parameter);
    CHECK_THROWS_AS(parse_rank_method("knee:abc"), invalid_parameter);
    CHECK_THROWS_AS(parse_rank_method("knee:1"), invalid_parameter);
    CHECK_THROWS_AS(parse_rank_method("median"), invalid_parameter);
}

TEST_CASE("spectrum of a 16 lambda^2 aperture across spacings")
{
    const auto half = spectrum_of(4.0, 0.5);
    const auto quarter = spectrum_of(4.0, 0.25);
    const auto eighth = spectrum_of(4.0, 0.125);
    REQUIRE(half.size() == 81);
    REQUIRE(quarter.size() == 289);
    REQUIRE(eighth.size() == 1089);

    const auto r_half = dof_report(half), r_quarter = dof_report(quarter), r_eighth = dof_report(eighth);

    SECTION("rank does not grow as spacing shrinks")
    {
        CHECK(r_half.effective_rank >= r_quarter.effective_rank);
        CHECK(r_quarter.effective_rank >= r_eighth.effective_rank);
    }
    SECTION("dof_limit is a lower bound")
    {
        CHECK(r_half.effective_rank >= 50);
        CHECK(r_quarter.effective_rank >= 50);
        CHECK(r_eighth.effective_rank >= 50);
    }
    SECTION("largest eigenvalue grows with N")
    {
        CHECK(half.largest() < quarter.largest());
        CHECK(quarter.largest() < eighth.largest());
    }
    SECTION("rho falls toward one")
    {
        CHECK(r_half.rho > r_quarter.rho);
        CHECK(r_quarter.rho > r_eighth.rho);
        CHECK(r_eighth.rho >= 1.0);
    }
    SECTION("about fifty dominant eigenvalues at eighth-wavelength spacing")
    {
        CHECK_THAT(power_capture(eighth, 50), WithinAbs(0.82, 0.02));
        CHECK_THAT(r_eighth.power_at_limit, WithinAbs(power_capture(eighth, 50), 1e-15));
    }
    SECTION("knee ranks track the closed-form rank laws")
    {
        CHECK_THAT(static_cast<double>(r_half.effective_rank), WithinRel(70.482573505384508, 0.10));
        CHECK_THAT(static_cast<double>(r_quarter.effective_rank), WithinRel(64.483366621809299, 0.15));
        CHECK_THAT(static_cast<double>(r_eighth.effective_rank), WithinRel(60.241286752692254, 0.15));
    }
}
