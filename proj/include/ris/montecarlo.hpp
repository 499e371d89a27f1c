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
#ifndef RIS_MONTECARLO_HPP
#define RIS_MONTECARLO_HPP

#include "error.hpp"
#include "geometry.hpp"
#include "kernel.hpp"
#include "parallel.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace ris {

using cplx = std::complex<double>;

// P plane waves: azimuth phi_p in [0, pi], zenith theta_p in [0, pi], complex gain alpha_p.
struct PlaneWaveEnsemble {
    std::vector<double> azimuths;
    std::vector<double> zeniths;
    std::vector<cplx> gains;

    std::size_t wave_count() const noexcept { return gains.size(); }
};

struct ChannelRealization {
    Eigen::VectorXcd values;
    double time = 0.0;
};

// Seeding contract: realization k of a run seeded with s draws from substream_seed(s, k);
// angles and gains use separate engines derived from that substream.
inline std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) noexcept
{
    return splitmix64(seed ^ splitmix64(index + 0x632BE59BD9B4E019ull));
}

// Isotropic half-space ensemble: phi ~ U[0, pi], theta with density sin(theta) / 2,
// alpha ~ CN(0, 1).
inline PlaneWaveEnsemble sample_isotropic(std::size_t wave_count, std::uint64_t rng_seed)
{
    if (wave_count == 0)
        throw invalid_parameter("sample_isotropic: wave count must be at least 1");

    std::mt19937_64 angle_rng(substream_seed(rng_seed, 1));
    std::mt19937_64 gain_rng(substream_seed(rng_seed, 2));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, std::numbers::sqrt2 / 2.0);

    PlaneWaveEnsemble ens;
    ens.azimuths.resize(wave_count);
    ens.zeniths.resize(wave_count);
    ens.gains.resize(wave_count);
    for (std::size_t p = 0; p < wave_count; ++p) {
        ens.azimuths[p] = std::numbers::pi * unit(angle_rng);
        ens.zeniths[p] = std::acos(1.0 - 2.0 * unit(angle_rng));
    }
    for (std::size_t p = 0; p < wave_count; ++p) {
        const double re = gauss(gain_rng);
        const double im = gauss(gain_rng);
        ens.gains[p] = {re, im};
    }
    return ens;
}

// Unit-norm array response a(phi, theta): exp(j 2 pi / lambda d_n . e) / sqrt(N).
inline Eigen::VectorXcd array_response(const RisGrid& g, double phi, double theta)
{
    const Vec3 e = direction_vector(phi, theta);
    const double k0 = 2.0 * std::numbers::pi / g.wavelength();
    const double scale = 1.0 / std::sqrt(static_cast<double>(g.size()));
    Eigen::VectorXcd a(static_cast<Eigen::Index>(g.size()));
    for (std::size_t n = 0; n < g.size(); ++n)
        a(static_cast<Eigen::Index>(n)) = std::polar(scale, k0 * g.coord(n).dot(e));
    return a;
}

// h(t) = sqrt(N / P) sum_p alpha_p a(phi_p, theta_p) exp(j 2 pi / lambda v . e_p t)
inline ChannelRealization simulate_channel(const RisGrid& g, const PlaneWaveEnsemble& ens,
                                           const MotionState& m, double t)
{
    const double k0 = 2.0 * std::numbers::pi / g.wavelength();
    const Vec3 velocity = velocity_vector(m);
    const double scale = std::sqrt(static_cast<double>(g.size()) /
                                   static_cast<double>(ens.wave_count()));

    ChannelRealization h{Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(g.size())), t};
    for (std::size_t p = 0; p < ens.wave_count(); ++p) {
        const Vec3 e = direction_vector(ens.azimuths[p], ens.zeniths[p]);
        const cplx doppler = std::polar(1.0, k0 * velocity.dot(e) * t);
        h.values += (ens.gains[p] * doppler) * array_response(g, ens.azimuths[p], ens.zeniths[p]);
    }
    h.values *= scale;
    return h;
}

struct MonteCarloEstimate {
    CorrelationMatrix real; // Re R_hat, reported estimate
    Eigen::MatrixXd imag;   // Im R_hat, vanishes in expectation for in-plane offsets
    std::size_t realizations = 0;
    std::size_t wave_count = 0;
};

namespace detail {

// Synthesizes h(0) and h(tau_i) for one ensemble. The lattice structure factors every
// element phase into (x-phase) * (z-phase), so the wave sum is an (n_x x P)(P x n_z) product.
class LatticeSynthesizer {
public:
    LatticeSynthesizer(const RisGrid& g, const MotionState& m, std::span<const double> taus)
        : grid_(g), velocity_(velocity_vector(m)), taus_(taus.begin(), taus.end())
    {
    }

    // Returns the channels at t = 0 and at each lag; column i + 1 holds h(tau_i).
    Eigen::MatrixXcd channels(const PlaneWaveEnsemble& ens)
    {
        const auto nx = static_cast<Eigen::Index>(grid_.n_x());
        const auto nz = static_cast<Eigen::Index>(grid_.n_z());
        const auto waves = static_cast<Eigen::Index>(ens.wave_count());
        const double k0 = 2.0 * std::numbers::pi / grid_.wavelength();
        const double scale = 1.0 / std::sqrt(static_cast<double>(waves));

        x_part_.resize(nx, waves);
        z_part_.resize(waves, nz);
        doppler_phase_.resize(waves);
        for (Eigen::Index p = 0; p < waves; ++p) {
            const auto pi = static_cast<std::size_t>(p);
            const Vec3 e = direction_vector(ens.azimuths[pi], ens.zeniths[pi]);
            const cplx step_x = std::polar(1.0, k0 * grid_.step_x().dot(e));
            const cplx step_z = std::polar(1.0, k0 * grid_.step_z().dot(e));
            cplx w = scale * ens.gains[pi] * std::polar(1.0, k0 * grid_.origin().dot(e));
            for (Eigen::Index ix = 0; ix < nx; ++ix, w *= step_x)
                x_part_(ix, p) = w;
            cplx s = 1.0;
            for (Eigen::Index iz = 0; iz < nz; ++iz, s *= step_z)
                z_part_(p, iz) = s;
            doppler_phase_(p) = k0 * velocity_.dot(e);
        }

        const Eigen::Index n = nx * nz;
        Eigen::MatrixXcd out(n, static_cast<Eigen::Index>(taus_.size()) + 1);
        // Column-major n_x x n_z storage is exactly the x-fastest element ordering.
        plane_.noalias() = x_part_ * z_part_;
        out.col(0) = Eigen::Map<const Eigen::VectorXcd>(plane_.data(), n);
        for (std::size_t i = 0; i < taus_.size(); ++i) {
            Eigen::VectorXcd shift(waves);
            for (Eigen::Index p = 0; p < waves; ++p)
                shift(p) = std::polar(1.0, doppler_phase_(p) * taus_[i]);
            plane_.noalias() = (x_part_ * shift.asDiagonal()) * z_part_;
            out.col(static_cast<Eigen::Index>(i) + 1) = Eigen::Map<const Eigen::VectorXcd>(plane_.data(), n);
        }
        return out;
    }

private:
    const RisGrid& grid_;
    Vec3 velocity_;
    std::vector<double> taus_;
    Eigen::MatrixXcd x_part_;
    Eigen::MatrixXcd z_part_;
    Eigen::MatrixXcd plane_;
    Eigen::VectorXd doppler_phase_;
};

} // namespace detail

inline constexpr std::size_t mc_block_size = 64;

// Empirical R_hat(tau) = (1/K) sum_k h_k(0) h_k(tau)^H over independent ensembles, for every
// lag in `taus` and for every prefix length in `checkpoints` (ascending). Realizations are
// summed in fixed blocks and the blocks are reduced in order, so results are bitwise identical
// for any worker count. Returns result[checkpoint][lag].
inline std::vector<std::vector<MonteCarloEstimate>>
estimate_correlation_sweep(const RisGrid& g, const MotionState& m, std::span<const double> taus,
                           std::size_t wave_count, std::span<const std::size_t> checkpoints,
                           std::uint64_t rng_seed, std::size_t memory_budget = default_memory_budget,
                           unsigned workers = 0)
{
    if (wave_count == 0)
        throw invalid_parameter("estimate_correlation: wave count must be at least 1");
    if (taus.empty())
        throw invalid_parameter("estimate_correlation: no lags requested");
    if (checkpoints.empty() || checkpoints.front() == 0 ||
        !std::is_sorted(checkpoints.begin(), checkpoints.end()))
        throw invalid_parameter("estimate_correlation: realization counts must be positive and ascending");

    const std::size_t n = g.size();
    const std::size_t lags = taus.size();
    workers = resolve_workers(workers);
    // Running sums plus one partial sum per in-flight block, all complex.
    const std::size_t required = (workers + 1) * lags * n * n * sizeof(cplx) +
                                 checkpoints.size() * lags * 2 * dense_matrix_bytes(n);
    check_memory_budget(required, memory_budget);

    // Block boundaries: multiples of mc_block_size, also cut at every checkpoint.
    std::vector<std::size_t> bounds{0};
    const std::size_t total = checkpoints.back();
    std::size_t next_cp = 0;
    while (bounds.back() < total) {
        std::size_t end = (bounds.back() / mc_block_size + 1) * mc_block_size;
        while (next_cp < checkpoints.size() && checkpoints[next_cp] <= bounds.back())
            ++next_cp;
        if (next_cp < checkpoints.size())
            end = std::min(end, checkpoints[next_cp]);
        bounds.push_back(std::min(end, total));
    }
    const std::size_t blocks = bounds.size() - 1;

    const auto ni = static_cast<Eigen::Index>(n);
    std::vector<Eigen::MatrixXcd> running(lags, Eigen::MatrixXcd::Zero(ni, ni));
    std::vector<std::vector<MonteCarloEstimate>> result;
    std::size_t cp = 0;

    for (std::size_t first = 0; first < blocks; first += workers) {
        const std::size_t group = std::min<std::size_t>(workers, blocks - first);
        std::vector<std::vector<Eigen::MatrixXcd>> partial(
            group, std::vector<Eigen::MatrixXcd>(lags, Eigen::MatrixXcd::Zero(ni, ni)));

        parallel_for(group, workers, [&](std::size_t b) {
            detail::LatticeSynthesizer synth(g, m, taus);
            for (std::size_t k = bounds[first + b]; k < bounds[first + b + 1]; ++k) {
                const Eigen::MatrixXcd h = synth.channels(sample_isotropic(wave_count, substream_seed(rng_seed, k)));
                for (std::size_t i = 0; i < lags; ++i)
                    partial[b][i].noalias() += h.col(0) * h.col(static_cast<Eigen::Index>(i) + 1).adjoint();
            }
        });

        for (std::size_t b = 0; b < group; ++b) {
            for (std::size_t i = 0; i < lags; ++i)
                running[i] += partial[b][i];
            const std::size_t done = bounds[first + b + 1];
            while (cp < checkpoints.size() && checkpoints[cp] == done) {
                std::vector<MonteCarloEstimate> row;
                for (std::size_t i = 0; i < lags; ++i) {
                    const Eigen::MatrixXcd mean = running[i] / static_cast<double>(done);
                    row.push_back({CorrelationMatrix{mean.real(), taus[i], m, g.meta()}, mean.imag(),
                                   done, wave_count});
                }
                result.push_back(std::move(row));
                ++cp;
            }
        }
    }
    return result;
}

inline MonteCarloEstimate estimate_correlation(const RisGrid& g, const MotionState& m, double tau,
                                               std::size_t wave_count, std::size_t realizations,
                                               std::uint64_t rng_seed,
                                               std::size_t memory_budget = default_memory_budget,
                                               unsigned workers = 0)
{
    if (realizations == 0)
        throw invalid_parameter("estimate_correlation: realization count must be at least 1");
    const double lag[] = {tau};
    const std::size_t counts[] = {realizations};
    return std::move(
        estimate_correlation_sweep(g, m, lag, wave_count, counts, rng_seed, memory_budget, workers)
            .front()
            .front());
}

} // namespace ris

#endif
