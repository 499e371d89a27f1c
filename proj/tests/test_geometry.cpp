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

#include "ris/geometry.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <numbers>
#include <random>

using namespace ris;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double lambda = 0.1;
constexpr double pi = std::numbers::pi;

Mat3 random_rotation(std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
    return q.normalized().toRotationMatrix();
}

} // namespace

TEST_CASE("make_grid element counts")
{
    SECTION("4 lambda aperture at lambda/8 spacing")
    {
        const auto g = make_grid(4 * lambda, 4 * lambda, lambda / 8, lambda / 8, lambda);
        CHECK(g.n_x() == 33);
        CHECK(g.n_z() == 33);
        CHECK(g.size() == 1089);
        CHECK_THAT(g.aperture_x(), WithinAbs(4 * lambda, 1e-15));
    }
    SECTION("two elements span one spacing")
    {
        const auto g = make_grid(lambda / 2, lambda / 2, lambda / 2, lambda / 2, lambda);
        CHECK(g.n_x() == 2);
        CHECK(g.size() == 4);
    }
    SECTION("half-wavelength spacing over 4 lambda")
    {
        CHECK(make_grid(4 * lambda, 4 * lambda, lambda / 2, lambda / 2, lambda).size() == 81);
    }
    SECTION("coordinates follow the row-major index map")
    {
        const auto g = make_grid(4 * lambda, 2 * lambda, lambda / 8, lambda / 4, lambda);
        for (std::size_t n = 1; n <= g.size(); ++n) {
            const auto idx = element_index(n, g.n_x(), g.size());
            const Vec3 expected(static_cast<double>(idx.x) * g.d_x(), 0.0, static_cast<double>(idx.z) * g.d_z());
            REQUIRE((g.coord(n - 1) - expected).norm() < 1e-15);
        }
    }
}

TEST_CASE("make_grid rejects bad parameters")
{
    CHECK_THROWS_AS(make_grid(0.0, 1.0, 0.1, 0.1, lambda), invalid_parameter);
    CHECK_THROWS_AS(make_grid(1.0, 1.0, -0.1, 0.1, lambda), invalid_parameter);
    CHECK_THROWS_AS(make_grid(1.0, 1.0, 0.1, 0.1, 0.0), invalid_parameter);
    CHECK_THROWS_AS(make_grid(0.1, 1.0, 0.2, 0.1, lambda), invalid_parameter);
    CHECK_THROWS_AS(make_grid(1.0, 1.0, 0.1, std::nan(""), lambda), invalid_parameter);
}

TEST_CASE("element_index")
{
    CHECK(element_index(1, 33, 1089) == ElementIndex{0, 0});
    CHECK(element_index(34, 33, 1089) == ElementIndex{0, 1});
    CHECK(element_index(1089, 33, 1089) == ElementIndex{32, 32});
    CHECK_THROWS_AS(element_index(0, 33, 1089), index_error);
    CHECK_THROWS_AS(element_index(1090, 33, 1089), index_error);
}

TEST_CASE("element_index round-trips through the ordinal")
{
    for (std::size_t n_x : {1u, 2u, 7u, 33u})
        for (std::size_t total : {n_x, n_x * 5, n_x * 33})
            for (std::size_t n = 1; n <= total; ++n)
                REQUIRE(element_ordinal(element_index(n, n_x, total), n_x) == n);
}

TEST_CASE("velocity_vector")
{
    CHECK((velocity_vector({1.0, 0.0, pi / 2}) - Vec3(1, 0, 0)).norm() < 1e-15);
    CHECK((velocity_vector({1.0, pi / 2, pi / 2}) - Vec3(0, 1, 0)).norm() < 1e-15);

    // 2 (cos 5deg sin 80deg, sin 5deg sin 80deg, cos 80deg), evaluated in 30-digit arithmetic.
    const Vec3 v = velocity_vector({2.0, pi / 36, 4 * pi / 9});
    CHECK_THAT(v.x(), WithinAbs(1.9621205243808138, 1e-14));
    CHECK_THAT(v.y(), WithinAbs(0.17166330235486259, 1e-14));
    CHECK_THAT(v.z(), WithinAbs(0.3472963553338607, 1e-14));
}

TEST_CASE("velocity_vector norm equals speed")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> speed(0.0, 50.0), az(0.0, 2 * pi), zen(0.0, pi);
    for (int i = 0; i < 1000; ++i) {
        const MotionState m(speed(rng), az(rng), zen(rng));
        REQUIRE(std::abs(velocity_vector(m).norm() - m.speed()) <= 1e-12);
    }
}

TEST_CASE("MotionState validates its ranges")
{
    CHECK_THROWS_AS(MotionState(-1.0, 0.0, 0.0), invalid_parameter);
    CHECK_THROWS_AS(MotionState(1.0, 2 * pi, 0.0), invalid_parameter);
    CHECK_THROWS_AS(MotionState(1.0, -0.1, 0.0), invalid_parameter);
    CHECK_THROWS_AS(MotionState(1.0, 0.0, pi + 1e-9), invalid_parameter);
    CHECK_NOTHROW(MotionState(0.0, 0.0, pi));
}

TEST_CASE("rotate_grid")
{
    const auto g = make_grid(4 * lambda, 2 * lambda, lambda / 4, lambda / 4, lambda);

    SECTION("identity leaves coordinates unchanged")
    {
        const auto r = rotate_grid(g, Mat3::Identity());
        for (std::size_t i = 0; i < g.size(); ++i)
            REQUIRE(r.coord(i) == g.coord(i));
        CHECK(r.d_x() == g.d_x());
        CHECK(r.wavelength() == g.wavelength());
    }
    SECTION("two quarter turns equal a half turn")
    {
        const Mat3 quarter = Eigen::AngleAxisd(pi / 2, Vec3::UnitZ()).toRotationMatrix();
        const Mat3 half = Eigen::AngleAxisd(pi, Vec3::UnitZ()).toRotationMatrix();
        const auto twice = rotate_grid(rotate_grid(g, quarter), quarter);
        const auto once = rotate_grid(g, half);
        for (std::size_t i = 0; i < g.size(); ++i)
            REQUIRE((twice.coord(i) - once.coord(i)).norm() <= 1e-12);
    }
    SECTION("non-orthonormal matrix is rejected")
    {
        Mat3 bad = Mat3::Identity();
        bad(0, 0) = 1.001;
        CHECK_THROWS_AS(rotate_grid(g, bad), invalid_parameter);
    }
    SECTION("lattice basis follows the rotation")
    {
        const Mat3 q = Eigen::AngleAxisd(0.3, Vec3(1, 2, 3).normalized()).toRotationMatrix();
        const auto r = rotate_grid(g, q);
        for (std::size_t n = 0; n < r.size(); ++n) {
            const auto idx = element_index(n + 1, r.n_x(), r.size());
            const Vec3 p = r.origin() + static_cast<double>(idx.x) * r.step_x() + static_cast<double>(idx.z) * r.step_z();
            REQUIRE((p - r.coord(n)).norm() <= 1e-15);
        }
    }
}

TEST_CASE("rotate_grid is an isometry")
{
    std::mt19937_64 rng(11);
    const auto g = make_grid(2 * lambda, 2 * lambda, lambda / 4, lambda / 8, lambda);
    for (int trial = 0; trial < 50; ++trial) {
        const auto r = rotate_grid(g, random_rotation(rng));
        for (std::size_t a = 0; a < g.size(); ++a)
            for (std::size_t b = a + 1; b < g.size(); ++b)
                REQUIRE(std::abs((r.coord(a) - r.coord(b)).norm() - (g.coord(a) - g.coord(b)).norm()) <= 1e-12);
    }
}
