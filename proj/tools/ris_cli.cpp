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
#include "ris/cli/config.hpp"
#include "ris/cli/experiments.hpp"
#include "ris/error.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

namespace {

enum ExitCode : int { ok = 0, failure = 1, config_error = 2, capacity = 3, numerical = 4 };

struct Flags {
    std::string config_path;
    std::string out_dir;
    std::string format;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> mem_budget_mib;
    std::string rank_method;
    std::optional<unsigned> workers;
};

ris::cli::ExperimentConfig resolve(ris::cli::Experiment experiment, const Flags& flags)
{
    using namespace ris::cli;
    ExperimentConfig c = flags.config_path.empty()
                             ? from_json(nlohmann::json::object(), experiment)
                             : from_json(load_config_document(flags.config_path), experiment);
    if (!flags.out_dir.empty())
        c.out_dir = flags.out_dir;
    if (!flags.format.empty())
        c.format = parse_table_format(flags.format);
    if (flags.seed)
        c.seed = flags.seed;
    if (flags.mem_budget_mib)
        c.mem_budget_mib = *flags.mem_budget_mib;
    if (!flags.rank_method.empty())
        c.rank_method = ris::parse_rank_method(flags.rank_method);
    if (flags.workers)
        c.workers = *flags.workers;
    return c;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"ris_cli: spatial-temporal correlation and degrees of freedom of planar RIS arrays"};
    app.require_subcommand(1);

    Flags flags;
    for (const auto& [experiment, name] : ris::cli::experiment_names) {
        auto* sub = app.add_subcommand(std::string(name), "run the " + std::string(name) + " experiment");
        sub->add_option("--config", flags.config_path, "JSON config, or a previously emitted table to re-run")
            ->check(CLI::ExistingFile);
        sub->add_option("--out", flags.out_dir, "output directory");
        sub->add_option("--format", flags.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--seed", flags.seed, "Monte Carlo seed");
        sub->add_option("--mem-budget", flags.mem_budget_mib, "dense matrix budget in MiB");
        sub->add_option("--rank-method", flags.rank_method, "knee | ratio | power:<gamma> | threshold:<delta>");
        sub->add_option("--workers", flags.workers, "worker threads (0 = all cores)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    const auto experiment = ris::cli::parse_experiment(app.get_subcommands().front()->get_name());
    try {
        const auto config = resolve(experiment, flags);
        const auto result = ris::cli::run(config);
        for (const auto& note : result.notes)
            std::cout << note << '\n';
        for (const auto& file : result.files)
            std::cout << "wrote " << file.string() << '\n';
        return ok;
    } catch (const ris::capacity_error& e) {
        std::cerr << "capacity error: " << e.what() << '\n';
        return capacity;
    } catch (const ris::numerical_error& e) {
        std::cerr << "numerical contract violation: " << e.what() << '\n';
        return numerical;
    } catch (const ris::degenerate_spectrum& e) {
        std::cerr << "numerical contract violation: " << e.what() << '\n';
        return numerical;
    } catch (const ris::fit_error& e) {
        std::cerr << "numerical contract violation: " << e.what() << '\n';
        return numerical;
    } catch (const ris::io_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return failure;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return failure;
    }
}
