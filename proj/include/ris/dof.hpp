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
#ifndef RIS_DOF_HPP
#define RIS_DOF_HPP

#include "error.hpp"
#include "spectrum.hpp"

#include <Eigen/Core>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ris {

// Rank of R(0) for a dense, large aperture: floor(pi L_x L_z / lambda^2).
inline std::size_t dof_limit(double aperture_x, double aperture_z, double wavelength)
{
    detail::require_positive(aperture_x, "L_x");
    detail::require_positive(aperture_z, "L_z");
    detail::require_positive(wavelength, "wavelength");
    const double area = (aperture_x / wavelength) * (aperture_z / wavelength);
    return static_cast<std::size_t>(std::floor(std::numbers::pi * area * (1.0 + 1e-14)));
}

inline constexpr double rank_coefficient = 4.4;
inline constexpr double rank_exponent = 0.55;

// pi A + c1 A^c2, the finite-aperture rank model with fitted correction term.
inline double rank_model(double area_over_lambda2, double c1, double c2) noexcept
{
    return std::numbers::pi * area_over_lambda2 + c1 * std::pow(area_over_lambda2, c2);
}

// Rank of a square, half-wavelength-spaced RIS with normalized area A = L_x L_z / lambda^2.
inline double rank_eq10(double area_over_lambda2)
{
    detail::require_positive(area_over_lambda2, "normalized aperture area");
    return rank_model(area_over_lambda2, rank_coefficient, rank_exponent);
}

// Rank for spacings at or below half a wavelength:
//   floor(pi A) (1 + (b d_x d_z / lambda^2)^(1/4)),  b = 4 (r / floor(pi A) - 1)^4,
// with r = rank_eq10(A). b only depends on the area, so non-square apertures reuse the
// square-aperture value for the same L_x L_z.
inline double rank_eq11(double aperture_x, double aperture_z, double d_x, double d_z, double wavelength)
{
    detail::require_positive(d_x, "d_x");
    detail::require_positive(d_z, "d_z");
    const std::size_t limit = dof_limit(aperture_x, aperture_z, wavelength);
    const double half = 0.5 * wavelength * (1.0 + 1e-12);
    if (d_x > half || d_z > half)
        throw out_of_domain("rank_eq11: element spacing above half a wavelength");
    if (limit == 0)
        throw out_of_domain("rank_eq11: aperture below the first degree of freedom");

    const double area = (aperture_x / wavelength) * (aperture_z / wavelength);
    const double lim = static_cast<double>(limit);
    const double b = 4.0 * std::pow(rank_eq10(area) / lim - 1.0, 4);
    return lim * (1.0 + std::pow(b * (d_x / wavelength) * (d_z / wavelength), 0.25));
}

struct DofReport {
    std::size_t effective_rank = 0;
    std::size_t dof_limit = 0;
    std::optional<double> rank_eq10; // square aperture with half-wavelength spacing
    std::optional<double> rank_eq11; // spacing at or below half a wavelength
    double power_at_limit = 0.0;     // trace fraction in the top dof_limit eigenvalues
    double rho = std::numeric_limits<double>::quiet_NaN(); // effective_rank / dof_limit
};

inline DofReport dof_report(const EigenSpectrum& s, const RankMethod& method = RankMethod::knee())
{
    const GridMeta& g = s.grid_meta;
    DofReport r;
    r.effective_rank = effective_rank(s, method);

    if (!(g.aperture_x > 0.0 && g.aperture_z > 0.0 && g.wavelength > 0.0))
        return r;
    r.dof_limit = dof_limit(g.aperture_x, g.aperture_z, g.wavelength);
    if (r.dof_limit > 0) {
        r.rho = static_cast<double>(r.effective_rank) / static_cast<double>(r.dof_limit);
        r.power_at_limit = power_capture(s, std::min(r.dof_limit, s.size()));
    }

    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); };
    const double half = 0.5 * g.wavelength;
    const double area = (g.aperture_x / g.wavelength) * (g.aperture_z / g.wavelength);
    if (close(g.aperture_x, g.aperture_z) && close(g.d_x, half) && close(g.d_z, half))
        r.rank_eq10 = rank_eq10(area);
    if (r.dof_limit > 0 && g.d_x <= half * (1.0 + 1e-12) && g.d_z <= half * (1.0 + 1e-12))
        r.rank_eq11 = rank_eq11(g.aperture_x, g.aperture_z, g.d_x, g.d_z, g.wavelength);
    return r;
}

struct DofSample {
    double area = 0.0; // L_x L_z / lambda^2
    double rank = 0.0;
};

struct DofFit {
    double c1 = 0.0;
    double c2 = 0.0;
    double residual = 0.0; // sum of squared rank errors
    int iterations = 0;
};

namespace detail {

inline double fit_objective(std::span<const DofSample> samples, double c1, double c2)
{
    double sum = 0.0;
    for (const auto& s : samples) {
        const double e = s.rank - rank_model(s.area, c1, c2);
        sum += e * e;
    }
    return sum;
}

// Least-squares c1 for a fixed exponent (the model is linear in c1).
inline double best_coefficient(std::span<const DofSample> samples, double c2)
{
    double num = 0.0;
    double den = 0.0;
    for (const auto& s : samples) {
        const double basis = std::pow(s.area, c2);
        num += (s.rank - std::numbers::pi * s.area) * basis;
        den += basis * basis;
    }
    return num / den;
}

} // namespace detail

// Fits rank ~ pi A + c1 A^c2. The exponent is seeded from a grid over [-1, 2] with c1 solved
// in closed form, then (c1, c2) are polished with damped Gauss-Newton.
inline DofFit fit_dof_coefficients(std::span<const DofSample> samples)
{
    if (samples.size() < 3)
        throw fit_error("fit_dof_coefficients: need at least 3 samples");
    std::vector<double> areas;
    for (const auto& s : samples) {
        if (!(s.area > 0.0) || !std::isfinite(s.area) || !std::isfinite(s.rank))
            throw fit_error("fit_dof_coefficients: areas must be positive and ranks finite");
        areas.push_back(s.area);
    }
    std::sort(areas.begin(), areas.end());
    if (std::unique(areas.begin(), areas.end()) - areas.begin() < 3)
        throw fit_error("fit_dof_coefficients: need at least 3 distinct areas");

    DofFit fit;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 300; ++i) {
        const double c2 = -1.0 + 0.01 * i;
        const double c1 = detail::best_coefficient(samples, c2);
        const double obj = detail::fit_objective(samples, c1, c2);
        if (obj < best) {
            best = obj;
            fit.c1 = c1;
            fit.c2 = c2;
        }
    }

    for (fit.iterations = 0; fit.iterations < 200; ++fit.iterations) {
        Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
        Eigen::Vector2d jtr = Eigen::Vector2d::Zero();
        for (const auto& s : samples) {
            const double basis = std::pow(s.area, fit.c2);
            const Eigen::Vector2d jac(basis, fit.c1 * basis * std::log(s.area));
            const double res = s.rank - rank_model(s.area, fit.c1, fit.c2);
            jtj += jac * jac.transpose();
            jtr += jac * res;
        }
        const double scale = jtj.diagonal().maxCoeff();
        if (!(std::abs(jtj.determinant()) > 1e-14 * scale * scale))
            throw fit_error("fit_dof_coefficients: normal equations are singular");

        const Eigen::Vector2d step = jtj.fullPivLu().solve(jtr);
        double t = 1.0;
        double trial = detail::fit_objective(samples, fit.c1 + step(0), fit.c2 + step(1));
        while (trial > best && t > 1e-10) {
            t *= 0.5;
            trial = detail::fit_objective(samples, fit.c1 + t * step(0), fit.c2 + t * step(1));
        }
        if (trial > best)
            break;
        fit.c1 += t * step(0);
        fit.c2 += t * step(1);
        best = trial;
        if (std::abs(t * step(0)) <= 1e-15 * std::max(1.0, std::abs(fit.c1)) &&
            std::abs(t * step(1)) <= 1e-15 * std::max(1.0, std::abs(fit.c2)))
            break;
    }
    fit.residual = best;
    return fit;
}

} // namespace ris

#endif
