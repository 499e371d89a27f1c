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
#ifndef RIS_CLI_EXPERIMENTS_HPP
#define RIS_CLI_EXPERIMENTS_HPP

#include "../dof.hpp"
#include "../geometry.hpp"
#include "../kernel.hpp"
#include "../montecarlo.hpp"
#include "../spectrum.hpp"
#include "config.hpp"
#include "table.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

namespace ris::cli {

struct RunResult {
    std::vector<std::filesystem::path> files;
    std::vector<std::string> notes; // human-readable summary lines
};

namespace detail {

inline constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// All experiment geometry is built in wavelength units (lambda = 1); correlations only
// depend on lengths relative to lambda.
inline RisGrid normalized_grid(double lx, double lz, double dx, double dz)
{
    return make_grid(lx, lz, dx, dz, 1.0);
}

inline RisGrid config_grid(const ExperimentConfig& c)
{
    return normalized_grid(c.aperture_x, c.aperture_z, c.spacing_x, c.spacing_z);
}

// Velocity in wavelengths per second, so tau = v_tau / speed stays in seconds.
inline MotionState config_motion(const ExperimentConfig& c)
{
    return {c.speed / c.wavelength, c.azimuth, c.zenith};
}

inline double lag_seconds(const ExperimentConfig& c, double v_tau)
{
    return v_tau == 0.0 ? 0.0 : v_tau * c.wavelength / c.speed;
}

class Emitter {
public:
    Emitter(const ExperimentConfig& c, RunResult& result) : config_(c), echo_(to_json(c)), result_(result)
    {
        std::error_code ec;
        std::filesystem::create_directories(c.out_dir, ec);
        if (ec)
            throw io_error("cannot create output directory '" + c.out_dir.string() + "': " + ec.message());
    }

    Table table(std::string title, std::vector<std::string> columns) const
    {
        Table t;
        t.title = std::move(title);
        t.config = echo_;
        t.columns = std::move(columns);
        return t;
    }

    void emit(const Table& t, const std::string& stem)
    {
        const auto path = config_.out_dir / (stem + "." + to_string(config_.format));
        write_table(t, config_.format, path);
        result_.files.push_back(path);
    }

private:
    const ExperimentConfig& config_;
    nlohmann::json echo_;
    RunResult& result_;
};

inline CorrelationMatrix zero_lag_matrix(const ExperimentConfig& c, const RisGrid& g)
{
    return correlation_matrix(g, 0.0, MotionState::stationary(), c.memory_budget_bytes(), c.workers);
}

inline Table spectrum_table(const Emitter& out, const EigenSpectrum& s, std::string title)
{
    Table t = out.table(std::move(title), {"index", "eigenvalue", "cumulative_power"});
    double total = 0.0;
    for (double ev : s.eigenvalues)
        total += std::max(ev, 0.0);
    double head = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        head += std::max(s.eigenvalues[i], 0.0);
        t.add_row({static_cast<double>(i + 1), s.eigenvalues[i], head / total});
    }
    return t;
}

inline Table slice_table(const Emitter& out, const CorrelationSlice& s, std::string title)
{
    Table t = out.table(std::move(title), {"delta_x", "delta_z", "v_tau", "value"});
    for (std::size_t i = 0; i < s.delta_x.size(); ++i)
        for (std::size_t j = 0; j < s.delta_z.size(); ++j)
            for (std::size_t k = 0; k < s.v_tau.size(); ++k)
                t.add_row({s.delta_x[i], s.delta_z[j], s.v_tau[k], s.at(i, j, k)});
    return t;
}

inline std::string fmt(double v) { return format_number(v); }

inline void run_corr_matrix(const ExperimentConfig& c, Emitter& out, RunResult& r)
{
    const RisGrid g = config_grid(c);
    const MotionState m = config_motion(c);
    for (std::size_t i = 0; i < c.lags.values.size(); ++i) {
        const double v_tau = c.lags.values[i];
        const auto mat = correlation_matrix(g, lag_seconds(c, v_tau), m, c.memory_budget_bytes(), c.workers);
        Table t = out.table("corr-matrix v_tau=" + fmt(v_tau) + " tau_s=" + fmt(mat.tau), {"m", "n", "value"});
        for (Eigen::Index row = 0; row < mat.values.rows(); ++row)
            for (Eigen::Index col = 0; col < mat.values.cols(); ++col)
                t.add_row({static_cast<double>(row + 1), static_cast<double>(col + 1), mat.values(row, col)});
        out.emit(t, "corr_matrix_" + std::to_string(i));
    }
    r.notes.push_back("elements: " + std::to_string(g.size()) + ", lags: " + std::to_string(c.lags.values.size()));
}

inline void run_mc_validate(const ExperimentConfig& c, Emitter& out, RunResult& r)
{
    const RisGrid g = config_grid(c);
    const MotionState m = config_motion(c);
    std::vector<double> taus;
    for (double v_tau : c.lags.values)
        taus.push_back(lag_seconds(c, v_tau));

    const auto sweep = estimate_correlation_sweep(g, m, taus, c.waves, c.realizations, *c.seed,
                                                  c.memory_budget_bytes(), c.workers);

    Table t = out.table("mc-validate: Monte Carlo estimate vs closed form",
                        {"v_tau", "tau_s", "realizations", "max_abs_error", "mean_abs_error", "max_abs_imag"});
    std::vector<std::vector<double>> errors(taus.size());
    for (const auto& row : sweep) {
        for (std::size_t i = 0; i < taus.size(); ++i) {
            const auto closed = correlation_matrix(g, taus[i], m, c.memory_budget_bytes(), c.workers);
            const Eigen::MatrixXd diff = (row[i].real.values - closed.values).cwiseAbs();
            errors[i].push_back(diff.maxCoeff());
            t.add_row({c.lags.values[i], taus[i], static_cast<double>(row[i].realizations), diff.maxCoeff(),
                       diff.mean(), row[i].imag.cwiseAbs().maxCoeff()});
        }
    }
    out.emit(t, "mc_validate");

    std::string failures;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        const auto& e = errors[i];
        r.notes.push_back("v_tau=" + fmt(c.lags.values[i]) + ": max |error| at K=" +
                          std::to_string(c.realizations.back()) + " is " + fmt(e.back()));
        if (!(e.back() <= c.mc_tolerance))
            failures += " v_tau=" + fmt(c.lags.values[i]) + " error " + fmt(e.back()) + " > " + fmt(c.mc_tolerance) + ";";
        for (std::size_t k = 1; k < e.size(); ++k)
            if (!(e[k] < e[k - 1]))
                failures += " v_tau=" + fmt(c.lags.values[i]) + " error not decreasing in K;";
    }
    if (!failures.empty())
        throw numerical_error("mc-validate:" + failures);
}

inline EigenSpectrum config_spectrum(const ExperimentConfig& c)
{
    return symmetric_eigenvalues(zero_lag_matrix(c, config_grid(c)));
}

inline void run_spectrum(const ExperimentConfig& c, Emitter& out, RunResult& r)
{
    const auto s = config_spectrum(c);
    out.emit(spectrum_table(out, s, "spectrum: eigenvalues of R(0)"), "spectrum");
    r.notes.push_back("N = " + std::to_string(s.size()) + ", largest eigenvalue " + fmt(s.largest()));
}

inline Table dof_table(const Emitter& out, const EigenSpectrum& s, const RankMethod& method)
{
    const DofReport d = dof_report(s, method);
    Table t = out.table("dof: degrees of freedom report (rank method " + method.to_string() + ")",
                        {"n", "n_x", "n_z", "effective_rank", "dof_limit", "rank_eq10", "rank_eq11",
                         "power_at_limit", "rho"});
    t.add_row({static_cast<double>(s.grid_meta.n), static_cast<double>(s.grid_meta.n_x),
               static_cast<double>(s.grid_meta.n_z), static_cast<double>(d.effective_rank),
               static_cast<double>(d.dof_limit), d.rank_eq10.value_or(nan), d.rank_eq11.value_or(nan),
               d.power_at_limit, d.rho});
    return t;
}

inline void run_dof(const ExperimentConfig& c, Emitter& out, RunResult& r)
{
    const auto s = config_spectrum(c);
    const DofReport d = dof_report(s, c.rank_method);
    out.emit(dof_table(out, s, c.rank_method), "dof_report");
    r.notes.push_back("effective rank " + std::to_string(d.effective_rank) + ", limit " +
                      std::to_string(d.dof_limit) + ", power at limit " + fmt(d.power_at_limit));
}

// Effective rank of a square aperture of normalized area `area` at spacing `spacing`.
inline std::size_t measured_rank(const ExperimentConfig& c, double area, double spacing)
{
    const double side = std::sqrt(area);
    const auto g = normalized_grid(side, side, spacing, spacing);
    return effective_rank(symmetric_eigenvalues(zero_lag_matrix(c, g)), c.rank_method);
}

inline void run_fit(const ExperimentConfig& c, Emitter& out, RunResult& r)
{
    std::vector<DofSample> samples = c.fit_samples;
    if (samples.empty())
        for (double a : c.areas)
            samples.push_back({a, static_cast<double>(measured_rank(c, a, 0.5))});

    const DofFit fit = fit_dof_coefficients(samples);

    Table s = out.table("fit: samples and fitted model", {"area", "rank", "model"});
    for (const auto& p : samples)
        s.add_row({p.area, p.rank, rank_model(p.area, fit.c1, fit.c2)});
    out.emit(s, "fit_samples");

    Table t = out.table("fit: rank = pi A + c1 A^c2", {"c1", "c2", "residual", "samples"});
    t.add_row({fit.c1, fit.c2, fit.residual, static_cast<double>(samples.size())});
    out.emit(t, "fit_result");
    r.notes.push_back("c1 = " + fmt(fit.c1) + ", c2 = " + fmt(fit.c2));
}

inline void run_fig2(const ExperimentConfig& c, Emitter& out, RunResult& r)
{
    const RisGrid g = config_grid(c);
    const double zero[] = {0.0};
    const auto slice = correlation_slice(g, MotionState::stationary(), c.delta_x.values, c.delta_z.values, zero);
    Table spatial = out.table("fig2: spatial correlation sinc(2 |(dx, 0, dz)| / lambda)", {"delta_x", "delta_z", "value"});
    for (std::size_t i = 0; i < slice.delta_x.size(); ++i)
        for (std::size_t j = 0; j < slice.delta_z.size(); ++j)
            spatial.add_row({slice.delta_x[i], slice.delta_z[j], slice.at(i, j, 0)});
    out.emit(spatial, "fig2_spatial");

    const auto s = symmetric_eigenvalues(zero_lag_matrix(c, g));
    out.emit(spectrum_table(out, s, "fig2: eigenvalues of R(0)"), "fig2_eigenvalues");
    const std::size_t limit = dof_limit(g.aperture_x(), g.aperture_z(), 1.0);
    r.notes.push_back("N = " + std::to_string(s.size()) + ", dof limit " + std::to_string(limit) +
                      ", power in top " + std::to_string(limit) + ": " +
                      fmt(power_capture(s, std::min(limit, s.size()))));
}

inline void run_fig3(const ExperimentConfig& c, Emitter& out, RunResult& r)
{
    Table ranks = out.table("fig3: measured rank vs heuristic formulas",
                            {"area", "spacing", "n", "effective_rank", "dof_limit", "rho", "rank_over_area",
                             "rank_eq10", "rank_eq11"});
    Table eig = out.table("fig3: eigenvalues of R(0)", {"area", "spacing", "index", "eigenvalue"});

    for (double area : c.areas) {
        const double side = std::sqrt(area);
        for (double spacing : c.spacings) {
            const auto g = normalized_grid(side, side, spacing, spacing);
            if (g.size() > c.max_elements || dense_matrix_bytes(g.size()) > c.memory_budget_bytes()) {
                r.notes.push_back("skipped area " + fmt(area) + " spacing " + fmt(spacing) + " (N = " +
                                  std::to_string(g.size()) + ")");
                continue;
            }
            const auto s = symmetric_eigenvalues(zero_lag_matrix(c, g));
            const DofReport d = dof_report(s, c.rank_method);
            ranks.add_row({area, spacing, static_cast<double>(g.size()), static_cast<double>(d.effective_rank),
                           static_cast<double>(d.dof_limit), d.rho, static_cast<double>(d.effective_rank) / area,
                           d.rank_eq10.value_or(nan), d.rank_eq11.value_or(nan)});
            for (std::size_t i = 0; i < s.size(); ++i)
                eig.add_row({area, spacing, static_cast<double>(i + 1), s.eigenvalues[i]});
        }
    }
    out.emit(ranks, "fig3_rank");
    out.emit(eig, "fig3_eigenvalues");
}

inline void run_slice(const ExperimentConfig& c, Emitter& out, const std::string& name)
{
    const RisGrid g = config_grid(c);
    const MotionState direction{c.speed > 0.0 ? 1.0 : 0.0, c.azimuth, c.zenith};
    const auto slice = correlation_slice(g, direction, c.delta_x.values, c.delta_z.values, c.v_tau.values);
    out.emit(slice_table(out, slice, name + ": joint spatial-temporal correlation"), name + "_slice");
}

} // namespace detail

// Runs one experiment and writes its tables under config.out_dir.
inline RunResult run(const ExperimentConfig& config)
{
    validate(config);
    RunResult result;
    detail::Emitter out(config, result);
    switch (config.experiment) {
    case Experiment::corr_matrix: detail::run_corr_matrix(config, out, result); break;
    case Experiment::mc_validate: detail::run_mc_validate(config, out, result); break;
    case Experiment::spectrum: detail::run_spectrum(config, out, result); break;
    case Experiment::dof: detail::run_dof(config, out, result); break;
    case Experiment::fit: detail::run_fit(config, out, result); break;
    case Experiment::fig2: detail::run_fig2(config, out, result); break;
    case Experiment::fig3: detail::run_fig3(config, out, result); break;
    case Experiment::fig4: detail::run_slice(config, out, "fig4"); break;
    case Experiment::fig5: detail::run_slice(config, out, "fig5"); break;
    case Experiment::fig6: detail::run_slice(config, out, "fig6"); break;
    }
    return result;
}

} // namespace ris::cli

#endif
