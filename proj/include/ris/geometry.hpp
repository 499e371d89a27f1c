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
#ifndef RIS_GEOMETRY_HPP
#define RIS_GEOMETRY_HPP

#include "error.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

namespace ris {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Scalar description of a planar grid, carried alongside matrices and spectra.
struct GridMeta {
    std::size_t n = 0;   // total element count
    std::size_t n_x = 0; // elements per row
    std::size_t n_z = 0; // elements per column
    double d_x = 0;
    double d_z = 0;
    double aperture_x = 0; // (n_x - 1) * d_x
    double aperture_z = 0; // (n_z - 1) * d_z
    double wavelength = 0;
};

// Zero-based lattice position of an element; ordinal n = z * n_x + x + 1.
struct ElementIndex {
    std::size_t x = 0;
    std::size_t z = 0;

    friend bool operator==(const ElementIndex&, const ElementIndex&) = default;
};

// Maps the 1-based element ordinal onto its (x, z) lattice indices, row-major with x fastest.
inline ElementIndex element_index(std::size_t n, std::size_t n_x, std::size_t total)
{
    if (n_x == 0)
        throw invalid_parameter("element_index: n_x must be positive");
    if (n < 1 || n > total)
        throw index_error("element_index: ordinal " + std::to_string(n) + " outside [1, " +
                          std::to_string(total) + "]");
    return {(n - 1) % n_x, (n - 1) / n_x};
}

inline std::size_t element_ordinal(ElementIndex idx, std::size_t n_x) noexcept
{
    return idx.z * n_x + idx.x + 1;
}

// Planar RIS: a regular lattice origin + x * step_x + z * step_z. Coordinates are
// materialized so rotated layouts go through the same correlation code.
class RisGrid {
public:
    std::size_t n_x() const noexcept { return n_x_; }
    std::size_t n_z() const noexcept { return n_z_; }
    std::size_t size() const noexcept { return coords_.size(); }
    double d_x() const noexcept { return d_x_; }
    double d_z() const noexcept { return d_z_; }
    double wavelength() const noexcept { return wavelength_; }
    double aperture_x() const noexcept { return static_cast<double>(n_x_ - 1) * d_x_; }
    double aperture_z() const noexcept { return static_cast<double>(n_z_ - 1) * d_z_; }

    const std::vector<Vec3>& coords() const noexcept { return coords_; }
    const Vec3& coord(std::size_t i) const { return coords_.at(i); }

    // Lattice basis, used by the plane-wave synthesis to factor per-element phases.
    const Vec3& origin() const noexcept { return origin_; }
    const Vec3& step_x() const noexcept { return step_x_; }
    const Vec3& step_z() const noexcept { return step_z_; }

    GridMeta meta() const noexcept
    {
        return {size(), n_x_, n_z_, d_x_, d_z_, aperture_x(), aperture_z(), wavelength_};
    }

    friend RisGrid make_grid_with_counts(std::size_t, std::size_t, double, double, double);
    friend RisGrid rotate_grid(const RisGrid&, const Mat3&);

private:
    RisGrid() = default;

    void materialize()
    {
        coords_.clear();
        coords_.reserve(n_x_ * n_z_);
        for (std::size_t z = 0; z < n_z_; ++z)
            for (std::size_t x = 0; x < n_x_; ++x)
                coords_.push_back(origin_ + static_cast<double>(x) * step_x_ +
                                  static_cast<double>(z) * step_z_);
    }

    std::size_t n_x_ = 0;
    std::size_t n_z_ = 0;
    double d_x_ = 0;
    double d_z_ = 0;
    double wavelength_ = 0;
    Vec3 origin_ = Vec3::Zero();
    Vec3 step_x_ = Vec3::Zero();
    Vec3 step_z_ = Vec3::Zero();
    std::vector<Vec3> coords_;
};

namespace detail {

inline void require_positive(double value, const char* what)
{
    if (!(value > 0.0) || !std::isfinite(value))
        throw invalid_parameter(std::string(what) + " must be positive and finite");
}

// floor(a / b) tolerant to representation error, e.g. 0.4 / 0.0125.
inline std::size_t lattice_floor(double a, double b)
{
    return static_cast<std::size_t>(std::floor(a / b * (1.0 + 1e-12) + 1e-12));
}

} // namespace detail

// Grid in the xz plane with explicit element counts; element (x, z) sits at (x d_x, 0, z d_z).
inline RisGrid make_grid_with_counts(std::size_t n_x, std::size_t n_z, double d_x, double d_z,
                                     double wavelength)
{
    if (n_x == 0 || n_z == 0)
        throw invalid_parameter("grid element counts must be positive");
    detail::require_positive(d_x, "d_x");
    detail::require_positive(d_z, "d_z");
    detail::require_positive(wavelength, "wavelength");

    RisGrid g;
    g.n_x_ = n_x;
    g.n_z_ = n_z;
    g.d_x_ = d_x;
    g.d_z_ = d_z;
    g.wavelength_ = wavelength;
    g.step_x_ = Vec3(d_x, 0.0, 0.0);
    g.step_z_ = Vec3(0.0, 0.0, d_z);
    g.materialize();
    return g;
}

// Grid spanning apertures L_x by L_z: n = floor(L / d) + 1 elements per axis.
inline RisGrid make_grid(double aperture_x, double aperture_z, double d_x, double d_z,
                         double wavelength)
{
    detail::require_positive(aperture_x, "L_x");
    detail::require_positive(aperture_z, "L_z");
    detail::require_positive(d_x, "d_x");
    detail::require_positive(d_z, "d_z");
    detail::require_positive(wavelength, "wavelength");
    if (d_x > aperture_x * (1.0 + 1e-12) || d_z > aperture_z * (1.0 + 1e-12))
        throw invalid_parameter("element spacing exceeds the aperture");

    return make_grid_with_counts(detail::lattice_floor(aperture_x, d_x) + 1,
                                 detail::lattice_floor(aperture_z, d_z) + 1, d_x, d_z, wavelength);
}

// Applies an orthonormal transform to every element position.
inline RisGrid rotate_grid(const RisGrid& g, const Mat3& rotation)
{
    const double err = (rotation.transpose() * rotation - Mat3::Identity()).cwiseAbs().maxCoeff();
    if (!(err <= 1e-12))
        throw invalid_parameter("rotate_grid: matrix is not orthonormal (max |R^T R - I| = " +
                                std::to_string(err) + ")");

    RisGrid out = g;
    out.origin_ = rotation * g.origin_;
    out.step_x_ = rotation * g.step_x_;
    out.step_z_ = rotation * g.step_z_;
    for (auto& c : out.coords_)
        c = rotation * c;
    return out;
}

// RIS translation: speed v >= 0, azimuth phi in [0, 2 pi), zenith theta in [0, pi].
class MotionState {
public:
    MotionState() = default;

    MotionState(double speed, double azimuth, double zenith)
        : speed_(speed), azimuth_(azimuth), zenith_(zenith)
    {
        if (!(speed >= 0.0) || !std::isfinite(speed))
            throw invalid_parameter("speed must be finite and non-negative");
        if (!(azimuth >= 0.0 && azimuth < 2.0 * std::numbers::pi))
            throw invalid_parameter("azimuth must lie in [0, 2 pi)");
        if (!(zenith >= 0.0 && zenith <= std::numbers::pi))
            throw invalid_parameter("zenith must lie in [0, pi]");
    }

    double speed() const noexcept { return speed_; }
    double azimuth() const noexcept { return azimuth_; }
    double zenith() const noexcept { return zenith_; }

    static MotionState stationary() { return {}; }

private:
    double speed_ = 0.0;
    double azimuth_ = 0.0;
    double zenith_ = std::numbers::pi / 2;
};

inline Vec3 direction_vector(double azimuth, double zenith)
{
    const double st = std::sin(zenith);
    return {std::cos(azimuth) * st, std::sin(azimuth) * st, std::cos(zenith)};
}

// v [cos(phi) sin(theta), sin(phi) sin(theta), cos(theta)]
inline Vec3 velocity_vector(const MotionState& m)
{
    return m.speed() * direction_vector(m.azimuth(), m.zenith());
}

} // namespace ris

#endif
