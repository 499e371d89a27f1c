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
#ifndef RIS_CLI_CONFIG_HPP
#define RIS_CLI_CONFIG_HPP

#include "../error.hpp"
#include "../dof.hpp"
#include "../spectrum.hpp"
#include "table.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace ris::cli {

enum class Experiment { corr_matrix, mc_validate, spectrum, dof, fit, fig2, fig3, fig4, fig5, fig6 };

inline constexpr std::array<std::pair<Experiment, std::string_view>, 10> experiment_names{{
    {Experiment::corr_matrix, "corr-matrix"},
    {Experiment::mc_validate, "mc-validate"},
    {Experiment::spectrum, "spectrum"},
    {Experiment::dof, "dof"},
    {Experiment::fit, "fit"},
    {Experiment::fig2, "fig2"},
    {Experiment::fig3, "fig3"},
    {Experiment::fig4, "fig4"},
    {Experiment::fig5, "fig5"},
    {Experiment::fig6, "fig6"},
}};

inline std::string_view to_string(Experiment e)
{
    for (const auto& [k, name] : experiment_names)
        if (k == e)
            return name;
    return "?";
}

inline Experiment parse_experiment(std::string_view name)
{
    for (const auto& [k, n] : experiment_names)
        if (n == name)
            return k;
    throw invalid_parameter("experiment: unknown value '" + std::string(name) + "'");
}

// A list of values given either literally or as {"start", "stop", "step"} (inclusive).
struct Sweep {
    nlohmann::json spec;
    std::vector<double> values;
};

// Every length is a multiple of the wavelength; `wavelength` (meters) only converts lags to
// seconds. Angles are radians.
struct ExperimentConfig {
    Experiment experiment = Experiment::fig2;
    double wavelength = 0.1;

    double aperture_x = 4.0;
    double aperture_z = 4.0;
    double spacing_x = 0.125;
    double spacing_z = 0.125;

    double speed = 1.0;
    double azimuth = 0.0;
    double zenith = std::numbers::pi / 2;

    Sweep lags;    // v*tau values for corr-matrix and mc-validate
    Sweep delta_x; // slice sweeps for fig2 and fig4..fig6
    Sweep delta_z;
    Sweep v_tau;

    std::size_t waves = 10000;
    std::vector<std::size_t> realizations{100, 1000, 10000};
    std::optional<std::uint64_t> seed;
    double mc_tolerance = 0.05;

    std::vector<double> areas{16.0, 64.0, 144.0};
    std::vector<double> spacings{0.5, 0.25, 0.125};
    std::size_t max_elements = 4225;
    std::vector<DofSample> fit_samples; // empty: measure knee ranks at `areas`, half-wavelength spacing

    RankMethod rank_method = RankMethod::knee();
    std::filesystem::path out_dir = "out";
    TableFormat format = TableFormat::csv;
    std::size_t mem_budget_mib = 2048;
    unsigned workers = 0;

    std::size_t memory_budget_bytes() const noexcept { return mem_budget_mib * std::size_t{1} << 20; }
};

namespace detail {

inline Sweep range(double start, double stop, double step)
{
    return {{{"start", start}, {"stop", stop}, {"step", step}}, {}};
}

inline void expand(Sweep& s, const std::string& field)
{
    s.values.clear();
    if (s.spec.is_array()) {
        for (const auto& v : s.spec) {
            if (!v.is_number())
                throw invalid_parameter(field + ": entries must be numbers");
            s.values.push_back(v.get<double>());
        }
    } else if (s.spec.is_object()) {
        const double start = s.spec.at("start").get<double>();
        const double stop = s.spec.at("stop").get<double>();
        const double step = s.spec.at("step").get<double>();
        if (!(step > 0.0) || !(stop >= start))
            throw invalid_parameter(field + ": need step > 0 and stop >= start");
        const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        if (count > 10'000'000)
            throw invalid_parameter(field + ": sweep too long");
        for (std::size_t i = 0; i < count; ++i)
            s.values.push_back(start + static_cast<double>(i) * step);
    } else {
        throw invalid_parameter(field + ": expected a list or {start, stop, step}");
    }
}

inline void apply_experiment_defaults(ExperimentConfig& c)
{
    switch (c.experiment) {
    case Experiment::fig5:
        c.azimuth = std::numbers::pi / 2;
        c.zenith = std::numbers::pi / 2;
        break;
    case Experiment::fig6:
    case Experiment::mc_validate:
        c.azimuth = std::numbers::pi / 36;
        c.zenith = 4 * std::numbers::pi / 9;
        break;
    default:
        break;
    }
    if (c.experiment == Experiment::mc_validate) {
        c.aperture_x = c.aperture_z = 1.0;
        c.spacing_x = c.spacing_z = 0.25;
        c.lags = {nlohmann::json::array({0.0, 0.25}), {}};
    } else {
        c.lags = {nlohmann::json::array({0.0}), {}};
    }
    c.delta_x = range(-4.0, 4.0, 0.125);
    c.delta_z = range(-4.0, 4.0, 0.125);
    c.v_tau = range(0.0, 4.0, 0.125);
}

template <typename T>
T get_field(const nlohmann::json& obj, const char* key, const std::string& path)
{
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw invalid_parameter(path + "." + key + ": " + e.what());
    }
}

inline void only_known(const nlohmann::json& obj, std::initializer_list<std::string_view> known,
                       const std::string& path)
{
    if (!obj.is_object())
        throw invalid_parameter(path + ": expected an object");
    for (const auto& [key, _] : obj.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw invalid_parameter(path + ": unknown field '" + key + "'");
}

inline void positive(double v, const std::string& field)
{
    if (!(v > 0.0) || !std::isfinite(v))
        throw invalid_parameter(field + ": must be positive");
}

} // namespace detail

inline ExperimentConfig default_config(Experiment e)
{
    ExperimentConfig c;
    c.experiment = e;
    detail::apply_experiment_defaults(c);
    detail::expand(c.lags, "lags");
    detail::expand(c.delta_x, "sweep.delta_x");
    detail::expand(c.delta_z, "sweep.delta_z");
    detail::expand(c.v_tau, "sweep.v_tau");
    return c;
}

inline void validate(const ExperimentConfig& c)
{
    detail::positive(c.wavelength, "wavelength");
    detail::positive(c.aperture_x, "grid.Lx");
    detail::positive(c.aperture_z, "grid.Lz");
    detail::positive(c.spacing_x, "grid.dx");
    detail::positive(c.spacing_z, "grid.dz");
    if (c.spacing_x > c.aperture_x || c.spacing_z > c.aperture_z)
        throw invalid_parameter("grid: spacing exceeds aperture");
    if (!(c.speed >= 0.0) || !std::isfinite(c.speed))
        throw invalid_parameter("motion.speed: must be non-negative");
    if (!(c.azimuth >= 0.0 && c.azimuth < 2 * std::numbers::pi))
        throw invalid_parameter("motion.azimuth: must lie in [0, 2 pi)");
    if (!(c.zenith >= 0.0 && c.zenith <= std::numbers::pi))
        throw invalid_parameter("motion.zenith: must lie in [0, pi]");
    if (c.lags.values.empty())
        throw invalid_parameter("lags: must be non-empty");
    if (c.delta_x.values.empty() || c.delta_z.values.empty() || c.v_tau.values.empty())
        throw invalid_parameter("sweep: grids must be non-empty");
    if (c.speed == 0.0) {
        for (double v : c.lags.values)
            if (v != 0.0)
                throw invalid_parameter("lags: non-zero v*tau requires a positive speed");
    }
    if (c.waves == 0)
        throw invalid_parameter("monte_carlo.waves: must be at least 1");
    if (c.realizations.empty() || c.realizations.front() == 0)
        throw invalid_parameter("monte_carlo.realizations: must be positive");
    for (std::size_t i = 1; i < c.realizations.size(); ++i)
        if (c.realizations[i] <= c.realizations[i - 1])
            throw invalid_parameter("monte_carlo.realizations: must be strictly ascending");
    if (c.experiment == Experiment::mc_validate && !c.seed)
        throw invalid_parameter("monte_carlo.seed: required for mc-validate (config or --seed)");
    if (c.areas.empty() || c.spacings.empty())
        throw invalid_parameter("fig3: areas and spacings must be non-empty");
    for (double a : c.areas)
        detail::positive(a, "fig3.areas");
    for (double d : c.spacings)
        detail::positive(d, "fig3.spacings");
    if (c.mem_budget_mib == 0)
        throw invalid_parameter("mem_budget_mib: must be positive");
}

inline nlohmann::json to_json(const ExperimentConfig& c)
{
    nlohmann::json fit_samples = nlohmann::json::array();
    for (const auto& s : c.fit_samples)
        fit_samples.push_back({s.area, s.rank});

    nlohmann::json j = {
        {"experiment", std::string(to_string(c.experiment))},
        {"wavelength", c.wavelength},
        {"grid", {{"Lx", c.aperture_x}, {"Lz", c.aperture_z}, {"dx", c.spacing_x}, {"dz", c.spacing_z}}},
        {"motion", {{"speed", c.speed}, {"azimuth", c.azimuth}, {"zenith", c.zenith}}},
        {"lags", c.lags.spec},
        {"sweep", {{"delta_x", c.delta_x.spec}, {"delta_z", c.delta_z.spec}, {"v_tau", c.v_tau.spec}}},
        {"monte_carlo",
         {{"waves", c.waves}, {"realizations", c.realizations}, {"tolerance", c.mc_tolerance}}},
        {"fig3", {{"areas", c.areas}, {"spacings", c.spacings}, {"max_elements", c.max_elements}}},
        {"fit", {{"samples", fit_samples}}},
        {"rank_method", c.rank_method.to_string()},
        {"output", {{"dir", c.out_dir.string()}, {"format", to_string(c.format)}}},
        {"mem_budget_mib", c.mem_budget_mib},
    };
    if (c.seed)
        j["monte_carlo"]["seed"] = *c.seed;
    return j;
}

// Reads a config document over the defaults of `fallback` (or of the document's own
// "experiment" field). Unknown keys are rejected so typos surface as errors.
inline ExperimentConfig from_json(const nlohmann::json& j, std::optional<Experiment> fallback = {})
{
    if (!j.is_object())
        throw invalid_parameter("config: top level must be an object");

    detail::only_known(j,
                       {"experiment", "wavelength", "grid", "motion", "lags", "sweep", "monte_carlo", "fig3",
                        "fit", "rank_method", "output", "mem_budget_mib", "workers"},
                       "config");
    if (j.contains("grid")) detail::only_known(j["grid"], {"Lx", "Lz", "dx", "dz"}, "grid");
    if (j.contains("motion")) detail::only_known(j["motion"], {"speed", "azimuth", "zenith"}, "motion");
    if (j.contains("sweep")) detail::only_known(j["sweep"], {"delta_x", "delta_z", "v_tau"}, "sweep");
    if (j.contains("monte_carlo"))
        detail::only_known(j["monte_carlo"], {"waves", "realizations", "seed", "tolerance"}, "monte_carlo");
    if (j.contains("fig3")) detail::only_known(j["fig3"], {"areas", "spacings", "max_elements"}, "fig3");
    if (j.contains("fit")) detail::only_known(j["fit"], {"samples"}, "fit");
    if (j.contains("output")) detail::only_known(j["output"], {"dir", "format"}, "output");

    Experiment e = fallback.value_or(Experiment::fig2);
    if (j.contains("experiment")) {
        const Experiment declared = parse_experiment(detail::get_field<std::string>(j, "experiment", "config"));
        if (fallback && declared != *fallback)
            throw invalid_parameter("experiment: config is for '" + std::string(to_string(declared)) +
                                    "' but '" + std::string(to_string(*fallback)) + "' was requested");
        e = declared;
    }

    ExperimentConfig c;
    c.experiment = e;
    detail::apply_experiment_defaults(c);

    if (j.contains("wavelength"))
        c.wavelength = detail::get_field<double>(j, "wavelength", "config");
    if (j.contains("grid")) {
        const auto& g = j["grid"];
        if (g.contains("Lx")) c.aperture_x = detail::get_field<double>(g, "Lx", "grid");
        if (g.contains("Lz")) c.aperture_z = detail::get_field<double>(g, "Lz", "grid");
        if (g.contains("dx")) c.spacing_x = detail::get_field<double>(g, "dx", "grid");
        if (g.contains("dz")) c.spacing_z = detail::get_field<double>(g, "dz", "grid");
    }
    if (j.contains("motion")) {
        const auto& m = j["motion"];
        if (m.contains("speed")) c.speed = detail::get_field<double>(m, "speed", "motion");
        if (m.contains("azimuth")) c.azimuth = detail::get_field<double>(m, "azimuth", "motion");
        if (m.contains("zenith")) c.zenith = detail::get_field<double>(m, "zenith", "motion");
    }
    if (j.contains("lags"))
        c.lags.spec = j["lags"];
    if (j.contains("sweep")) {
        const auto& s = j["sweep"];
        if (s.contains("delta_x")) c.delta_x.spec = s["delta_x"];
        if (s.contains("delta_z")) c.delta_z.spec = s["delta_z"];
        if (s.contains("v_tau")) c.v_tau.spec = s["v_tau"];
    }
    if (j.contains("monte_carlo")) {
        const auto& mc = j["monte_carlo"];
        if (mc.contains("waves")) c.waves = detail::get_field<std::size_t>(mc, "waves", "monte_carlo");
        if (mc.contains("realizations")) {
            const auto& r = mc["realizations"];
            c.realizations = r.is_array() ? detail::get_field<std::vector<std::size_t>>(mc, "realizations", "monte_carlo")
                                          : std::vector<std::size_t>{detail::get_field<std::size_t>(mc, "realizations", "monte_carlo")};
        }
        if (mc.contains("seed")) c.seed = detail::get_field<std::uint64_t>(mc, "seed", "monte_carlo");
        if (mc.contains("tolerance")) c.mc_tolerance = detail::get_field<double>(mc, "tolerance", "monte_carlo");
    }
    if (j.contains("fig3")) {
        const auto& f = j["fig3"];
        if (f.contains("areas")) c.areas = detail::get_field<std::vector<double>>(f, "areas", "fig3");
        if (f.contains("spacings")) c.spacings = detail::get_field<std::vector<double>>(f, "spacings", "fig3");
        if (f.contains("max_elements")) c.max_elements = detail::get_field<std::size_t>(f, "max_elements", "fig3");
    }
    if (j.contains("fit") && j["fit"].contains("samples")) {
        for (const auto& s : j["fit"]["samples"]) {
            if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number())
                throw invalid_parameter("fit.samples: each sample must be [area, rank]");
            c.fit_samples.push_back({s[0].get<double>(), s[1].get<double>()});
        }
    }
    if (j.contains("rank_method"))
        c.rank_method = parse_rank_method(detail::get_field<std::string>(j, "rank_method", "config"));
    if (j.contains("output")) {
        const auto& o = j["output"];
        if (o.contains("dir")) c.out_dir = detail::get_field<std::string>(o, "dir", "output");
        if (o.contains("format")) c.format = parse_table_format(detail::get_field<std::string>(o, "format", "output"));
    }
    if (j.contains("mem_budget_mib"))
        c.mem_budget_mib = detail::get_field<std::size_t>(j, "mem_budget_mib", "config");
    if (j.contains("workers"))
        c.workers = detail::get_field<unsigned>(j, "workers", "config");

    detail::expand(c.lags, "lags");
    detail::expand(c.delta_x, "sweep.delta_x");
    detail::expand(c.delta_z, "sweep.delta_z");
    detail::expand(c.v_tau, "sweep.v_tau");
    return c;
}

// Parses a config document. Also accepts an emitted CSV table, whose "# config:" header line
// holds the resolved configuration of the run that produced it.
inline nlohmann::json load_config_document(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is)
        throw invalid_parameter("config: cannot open '" + path.string() + "'");
    std::stringstream buf;
    buf << is.rdbuf();
    const std::string text = buf.str();

    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line))
        if (line.rfind(config_prefix, 0) == 0)
            return nlohmann::json::parse(line.substr(config_prefix.size()));

    try {
        auto j = nlohmann::json::parse(text);
        // An emitted JSON table carries the config under "config".
        if (j.is_object() && j.contains("columns") && j.contains("config"))
            return j["config"];
        return j;
    } catch (const nlohmann::json::parse_error& e) {
        // Report the line of the offending byte.
        std::size_t line_no = 1;
        for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i)
            if (text[i] == '\n')
                ++line_no;
        throw invalid_parameter("config '" + path.string() + "' line " + std::to_string(line_no) + ": " + e.what());
    }
}

} // namespace ris::cli

#endif
