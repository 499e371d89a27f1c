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
#ifndef RIS_SPECTRUM_HPP
#define RIS_SPECTRUM_HPP

#include "error.hpp"
#include "geometry.hpp"
#include "kernel.hpp"

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace ris {

// Eigenvalues of R(0) in non-increasing order.
struct EigenSpectrum {
    std::vector<double> eigenvalues;
    double trace = 0.0;
    GridMeta grid_meta;

    std::size_t size() const noexcept { return eigenvalues.size(); }
    double largest() const { return eigenvalues.front(); }
    double smallest() const { return eigenvalues.back(); }
};

inline constexpr std::size_t reconstruction_check_limit = 64;

// Full real spectrum of a zero-lag correlation matrix. Checks symmetry on input and the
// trace, PSD and (for N <= 64) reconstruction contracts on output.
inline EigenSpectrum symmetric_eigenvalues(const CorrelationMatrix& r)
{
    if (r.tau != 0.0)
        throw unsupported_input("symmetric_eigenvalues: R(tau) with tau != 0 is not symmetric");
    const Eigen::MatrixXd& a = r.values;
    if (a.rows() != a.cols() || a.rows() == 0)
        throw invalid_parameter("symmetric_eigenvalues: matrix must be square and non-empty");
    const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
    if (!(asym <= 1e-12))
        throw invalid_parameter("symmetric_eigenvalues: matrix is not symmetric (max |R - R^T| = " +
                                std::to_string(asym) + ")");

    const auto n = static_cast<std::size_t>(a.rows());
    const bool reconstruct = n <= reconstruction_check_limit;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        a, reconstruct ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw numerical_error("symmetric_eigenvalues: eigensolver did not converge");

    if (reconstruct) {
        const Eigen::MatrixXd& v = solver.eigenvectors();
        const double err =
            (a - v * solver.eigenvalues().asDiagonal() * v.transpose()).cwiseAbs().maxCoeff();
        if (!(err <= 1e-8))
            throw numerical_error("symmetric_eigenvalues: reconstruction error " + std::to_string(err));
    }

    EigenSpectrum s;
    s.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), std::greater<>());
    s.trace = a.trace();
    s.grid_meta = r.grid_meta;

    const double tol = 1e-8 * static_cast<double>(n);
    double sum = 0.0;
    for (double ev : s.eigenvalues)
        sum += ev;
    if (!(std::abs(sum - s.trace) <= tol))
        throw numerical_error("symmetric_eigenvalues: eigenvalue sum " + std::to_string(sum) +
                              " differs from trace " + std::to_string(s.trace));
    if (!(s.smallest() >= -tol))
        throw numerical_error("symmetric_eigenvalues: matrix is not positive semi-definite (min eigenvalue " +
                              std::to_string(s.smallest()) + ")");
    return s;
}

namespace detail {

// Eigenvalues with round-off negatives clamped to zero.
inline std::vector<double> clamped(const EigenSpectrum& s)
{
    std::vector<double> out(s.eigenvalues);
    for (double& ev : out)
        ev = std::max(ev, 0.0);
    return out;
}

} // namespace detail

// Fraction of the total power held by the k largest eigenvalues.
inline double power_capture(const EigenSpectrum& s, std::size_t k)
{
    if (k < 1 || k > s.size())
        throw index_error("power_capture: k = " + std::to_string(k) + " outside [1, " +
                          std::to_string(s.size()) + "]");
    const auto ev = detail::clamped(s);
    double head = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        total += ev[i];
        if (i < k)
            head += ev[i];
    }
    return total > 0.0 ? head / total : 0.0;
}

// How the number of dominant eigenvalues is counted.
//  knee:      point of the log-spectrum farthest above the chord joining the largest
//             eigenvalue and the last one above floor * lambda_1 (default floor 1e-3).
//  ratio:     index of the largest consecutive ratio lambda_i / lambda_{i+1} above the floor.
//  power:     smallest k whose power capture reaches gamma.
//  threshold: number of eigenvalues >= delta * lambda_1.
struct RankMethod {
    enum class Kind { knee, ratio, power, threshold };

    Kind kind = Kind::knee;
    double parameter = 1e-3;

    static RankMethod knee(double floor = 1e-3) { return {Kind::knee, floor}; }
    static RankMethod ratio(double floor = 1e-6) { return {Kind::ratio, floor}; }
    static RankMethod power(double gamma) { return {Kind::power, gamma}; }
    static RankMethod threshold(double delta) { return {Kind::threshold, delta}; }

    std::string to_string() const
    {
        switch (kind) {
        case Kind::knee:
            return parameter == 1e-3 ? "knee" : "knee:" + format(parameter);
        case Kind::ratio:
            return parameter == 1e-6 ? "ratio" : "ratio:" + format(parameter);
        case Kind::power:
            return "power:" + format(parameter);
        case Kind::threshold:
            return "threshold:" + format(parameter);
        }
        return "knee";
    }

private:
    static std::string format(double v)
    {
        char buf[32];
        auto res = std::to_chars(buf, buf + sizeof buf, v);
        return {buf, res.ptr};
    }
};

// Parses "knee", "knee:<floor>", "ratio", "ratio:<floor>", "power:<gamma>", "threshold:<delta>".
inline RankMethod parse_rank_method(std::string_view text)
{
    const auto colon = text.find(':');
    const std::string_view name = text.substr(0, colon);
    double value = std::numeric_limits<double>::quiet_NaN();
    if (colon != std::string_view::npos) {
        const std::string_view arg = text.substr(colon + 1);
        auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), value);
        if (ec != std::errc{} || ptr != arg.data() + arg.size())
            throw invalid_parameter("rank method: cannot parse parameter in '" + std::string(text) + "'");
    }
    const bool has_value = colon != std::string_view::npos;
    auto in_unit = [&](bool closed_top) {
        return value > 0.0 && (closed_top ? value <= 1.0 : value < 1.0);
    };

    if (name == "knee") {
        if (!has_value)
            return RankMethod::knee();
        if (in_unit(false))
            return RankMethod::knee(value);
    } else if (name == "ratio") {
        if (!has_value)
            return RankMethod::ratio();
        if (in_unit(false))
            return RankMethod::ratio(value);
    } else if (name == "power") {
        if (has_value && in_unit(true))
            return RankMethod::power(value);
    } else if (name == "threshold") {
        if (has_value && in_unit(true))
            return RankMethod::threshold(value);
    } else {
        throw invalid_parameter("rank method: unknown method '" + std::string(text) + "'");
    }
    throw invalid_parameter("rank method: missing or out-of-range parameter in '" + std::string(text) + "'");
}

namespace detail {

inline std::size_t ratio_rank(const std::vector<double>& ev, double floor)
{
    const double top = ev.front();
    double best = 1.0;
    std::size_t rank = 0;
    for (std::size_t i = 0; i + 1 < ev.size() && ev[i] >= floor * top; ++i) {
        const double r = ev[i + 1] > 0.0 ? ev[i] / ev[i + 1] : std::numeric_limits<double>::infinity();
        if (r > best) {
            best = r;
            rank = i + 1;
        }
    }
    if (rank == 0)
        throw degenerate_spectrum("effective_rank: spectrum shows no decay");
    return rank;
}

inline std::size_t knee_rank(const std::vector<double>& ev, double floor)
{
    const double top = ev.front();
    std::size_t m = 0;
    while (m < ev.size() && ev[m] >= floor * top)
        ++m;

    if (m >= 3) {
        const double y0 = std::log(ev.front());
        const double slope = (std::log(ev[m - 1]) - y0) / static_cast<double>(m - 1);
        double best = 0.0;
        std::size_t rank = 0;
        for (std::size_t i = 1; i + 1 < m; ++i) {
            const double gap = std::log(ev[i]) - (y0 + slope * static_cast<double>(i));
            if (gap > best) {
                best = gap;
                rank = i + 1;
            }
        }
        if (rank != 0 && best > 1e-12)
            return rank;
    }
    // No interior point above the chord (two values, or a log-convex tail).
    return ratio_rank(ev, floor);
}

} // namespace detail

inline std::size_t effective_rank(const EigenSpectrum& s, const RankMethod& method = RankMethod::knee())
{
    if (s.size() == 0)
        throw invalid_parameter("effective_rank: empty spectrum");
    const auto ev = detail::clamped(s);
    if (!(ev.front() > 0.0))
        throw degenerate_spectrum("effective_rank: spectrum has no positive eigenvalue");

    switch (method.kind) {
    case RankMethod::Kind::knee:
    case RankMethod::Kind::ratio:
        if (ev.back() >= ev.front() * (1.0 - 1e-12))
            throw degenerate_spectrum("effective_rank: all eigenvalues are equal, no knee");
        return method.kind == RankMethod::Kind::knee ? detail::knee_rank(ev, method.parameter)
                                                     : detail::ratio_rank(ev, method.parameter);
    case RankMethod::Kind::power: {
        double total = 0.0;
        for (double v : ev)
            total += v;
        double head = 0.0;
        for (std::size_t k = 1; k <= ev.size(); ++k) {
            head += ev[k - 1];
            if (head / total >= method.parameter)
                return k;
        }
        return ev.size();
    }
    case RankMethod::Kind::threshold: {
        std::size_t count = 0;
        for (double v : ev)
            if (v >= method.parameter * ev.front())
                ++count;
        return count;
    }
    }
    return 0;
}

} // namespace ris

#endif
