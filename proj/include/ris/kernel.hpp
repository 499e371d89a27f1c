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
#ifndef RIS_KERNEL_HPP
#define RIS_KERNEL_HPP

#include "error.hpp"
#include "geometry.hpp"
#include "parallel.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace ris {

inline constexpr std::size_t default_memory_budget = std::size_t{2} << 30; // 2 GiB

// Normalized sinc, sin(pi x) / (pi x), continuous at 0.
inline double sinc(double x) noexcept
{
    const double px = std::numbers::pi * x;
    if (std::abs(x) < 1e-6)
        return 1.0 - px * px / 6.0;
    return std::sin(px) / px;
}

// Correlation between element m at time t and element n at time t + tau under isotropic
// scattering: sinc(2 |d_m - d_n - tau v| / lambda).
inline double st_correlation(const Vec3& d_m, const Vec3& d_n, double tau, const Vec3& velocity,
                             double wavelength) noexcept
{
    const Vec3 offset = (d_m - d_n) - tau * velocity;
    return sinc(2.0 * offset.norm() / wavelength);
}

struct CorrelationMatrix {
    Eigen::MatrixXd values;
    double tau = 0.0;
    MotionState motion;
    GridMeta grid_meta;

    std::size_t size() const noexcept { return static_cast<std::size_t>(values.rows()); }
};

inline void check_memory_budget(std::size_t required_bytes, std::size_t budget_bytes)
{
    if (required_bytes > budget_bytes)
        throw capacity_error(required_bytes, budget_bytes);
}

inline std::size_t dense_matrix_bytes(std::size_t n) noexcept { return n * n * sizeof(double); }

// Full N x N matrix R(tau). Rows are evaluated independently, so the result does not depend
// on the worker count.
inline CorrelationMatrix correlation_matrix(const RisGrid& g, double tau, const MotionState& m,
                                            std::size_t memory_budget = default_memory_budget,
                                            unsigned workers = 0)
{
    const std::size_t n = g.size();
    check_memory_budget(dense_matrix_bytes(n), memory_budget);

    CorrelationMatrix out{Eigen::MatrixXd(n, n), tau, m, g.meta()};
    const Vec3 velocity = velocity_vector(m);
    const auto& coords = g.coords();
    const double wavelength = g.wavelength();

    // Eigen is column-major: fill column n from all rows m.
    parallel_for(n, workers, [&](std::size_t col) {
        for (std::size_t row = 0; row < n; ++row)
            out.values(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
                st_correlation(coords[row], coords[col], tau, velocity, wavelength);
    });
    return out;
}

// Correlation of one element with itself at lag tau; independent of motion direction.
inline double temporal_correlation(double tau, double speed, double wavelength)
{
    if (!(speed >= 0.0))
        throw invalid_parameter("speed must be non-negative");
    detail::require_positive(wavelength, "wavelength");
    return sinc(2.0 * std::abs(tau) * speed / wavelength);
}

namespace detail {

// Smallest u* such that |sinc(u)| <= threshold for all u >= u*. Scans u with step 1e-4
// up to a cap past which the envelope 1 / (pi u) stays below the threshold, then bisects
// the last crossing.
inline double last_sinc_crossing(double threshold)
{
    if (!(threshold > 0.0 && threshold < 1.0))
        throw invalid_parameter("threshold must lie in (0, 1)");

    constexpr double step = 1e-4;
    const double cap = std::max(10.0, 1.0 / (std::numbers::pi * threshold) + 1.0);
    const auto steps = static_cast<std::size_t>(std::ceil(cap / step));

    std::size_t last_above = 0; // |sinc(0)| = 1 > threshold
    for (std::size_t i = 1; i <= steps; ++i)
        if (std::abs(sinc(static_cast<double>(i) * step)) > threshold)
            last_above = i;

    double lo = static_cast<double>(last_above) * step;
    double hi = static_cast<double>(last_above + 1) * step;
    while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (std::abs(sinc(mid)) > threshold)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

} // namespace detail

inline constexpr double inv_e = 0.36787944117144233; // 1 / e

// Lag after which |temporal_correlation| stays at or below the threshold.
inline double decorrelation_time(double speed, double wavelength, double threshold = inv_e)
{
    detail::require_positive(wavelength, "wavelength");
    if (speed == 0.0)
        throw no_decorrelation("decorrelation_time: a stationary surface never decorrelates");
    if (!(speed > 0.0) || !std::isfinite(speed))
        throw invalid_parameter("speed must be positive");
    return detail::last_sinc_crossing(threshold) * wavelength / (2.0 * speed);
}

// Element separation after which |sinc(2 delta / lambda)| stays at or below the threshold.
inline double decorrelation_distance(double wavelength, double threshold = inv_e)
{
    detail::require_positive(wavelength, "wavelength");
    return detail::last_sinc_crossing(threshold) * wavelength / 2.0;
}

// Correlation between an element displaced by (dx, 0, dz) and the origin element at the lag
// where the surface has travelled v_tau. Stored as values[(i * nz + j) * nt + k].
struct CorrelationSlice {
    std::vector<double> delta_x;
    std::vector<double> delta_z;
    std::vector<double> v_tau;
    std::vector<double> values;

    double at(std::size_t i, std::size_t j, std::size_t k) const
    {
        return values.at((i * delta_z.size() + j) * v_tau.size() + k);
    }
};

inline CorrelationSlice correlation_slice(const RisGrid& g, const MotionState& m,
                                          std::span<const double> delta_x,
                                          std::span<const double> delta_z,
                                          std::span<const double> v_tau)
{
    if (delta_x.empty() || delta_z.empty() || v_tau.empty())
        throw invalid_parameter("correlation_slice: sweep grids must be non-empty");
    if (m.speed() == 0.0)
        for (double vt : v_tau)
            if (vt != 0.0)
                throw invalid_parameter("correlation_slice: non-zero v*tau with zero speed");

    CorrelationSlice out{{delta_x.begin(), delta_x.end()},
                         {delta_z.begin(), delta_z.end()},
                         {v_tau.begin(), v_tau.end()},
                         {}};
    out.values.reserve(delta_x.size() * delta_z.size() * v_tau.size());

    // tau * velocity == v_tau * direction; the travelled distance is the sweep variable.
    const Vec3 direction = direction_vector(m.azimuth(), m.zenith());
    const Vec3 origin = Vec3::Zero();
    for (double dx : delta_x)
        for (double dz : delta_z)
            for (double vt : v_tau)
                out.values.push_back(
                    st_correlation(Vec3(dx, 0.0, dz), origin, 1.0, vt * direction, g.wavelength()));
    return out;
}

} // namespace ris

#endif
