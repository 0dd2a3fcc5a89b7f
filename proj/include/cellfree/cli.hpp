// SPDX-License-Identifier: Apache-2.0
//
// cellfree-sim: downlink system-level simulator for cell-free massive MIMO
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

#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cellfree/config.hpp"
#include "cellfree/experiment.hpp"
#include "cellfree/io.hpp"
#include "cellfree/validation.hpp"

namespace cellfree {

namespace cli_detail {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
    std::optional<int> workers;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

inline void add_common_options(CLI::App *cmd, CommonArgs &args) {
    cmd->add_option("--config", args.config_path, "Config file (dotted key = value)");
    cmd->add_option("--out", args.out_dir, "Output directory");
    cmd->add_option("--set", args.overrides, "Override a config key (KEY=VALUE, repeatable)");
    cmd->add_option("--workers", args.workers, "Worker thread count (0 = hardware)");
    cmd->add_option("--seed", args.seed, "Master seed (overrides experiment.master_seed)");
    cmd->add_flag("--quiet", args.quiet, "Suppress progress output");
}

inline ConfigMap effective_config(const CommonArgs &args) {
    ConfigMap cfg = ConfigMap::defaults();
    if (!args.config_path.empty())
        cfg.load_file(args.config_path);
    for (const std::string &assignment : args.overrides)
        cfg.set_override(assignment);
    if (args.seed)
        cfg.set("experiment.master_seed", std::to_string(*args.seed));
    if (args.workers) {
        cfg.set("experiment.workers", std::to_string(*args.workers));
    } else if (const char *env = std::getenv("CELLFREE_SIM_WORKERS")) {
        ConfigMap probe = cfg;
        probe.set("experiment.workers", env);
        if (probe.get_int("experiment.workers") < 0)
            throw ConfigError("CELLFREE_SIM_WORKERS: must be >= 0");
        cfg.set("experiment.workers", env);
    }
    return cfg;
}

inline void write_experiment_outputs(const ExperimentResult &result,
                                     const std::filesystem::path &out_dir) {
    std::filesystem::create_directories(out_dir);
    write_samples_csv(result, out_dir / "samples.csv");
    write_cdf_csv(result, out_dir / "cdf.csv");
    write_summary_json(result, out_dir / "summary.json");
}

inline void print_percentile_table(const ExperimentResult &result, std::ostream &os) {
    os << "variant            metric        ";
    if (result.variants.empty())
        return;
    for (const auto &[p, unused] : result.variants[0].pooled_percentiles) {
        char buf[24];
        std::snprintf(buf, sizeof(buf), "p%-10g", p);
        os << buf;
    }
    os << "\n";
    for (const VariantResult &vr : result.variants) {
        for (const char *metric : {"per_user_se", "min_se"}) {
            char head[64];
            std::snprintf(head, sizeof(head), "%-18s %-12s ", vr.name.c_str(), metric);
            os << head;
            const auto &table = std::string(metric) == "per_user_se" ? vr.pooled_percentiles
                                                                     : vr.min_percentiles;
            for (const auto &[p, value] : table) {
                char buf[24];
                std::snprintf(buf, sizeof(buf), "%-11.4f", value);
                os << buf;
            }
            os << "\n";
        }
    }
}

inline int run_validate_oracle(const ExperimentConfig &cfg, bool quiet, std::ostream &os) {
    const ValidationInstance inst =
        make_validation_instance(cfg.oracle.n_aps, cfg.oracle.n_ues, cfg.oracle.pattern,
                                 cfg.assoc.mode, cfg.policy, cfg.master_seed);
    if (!quiet)
        os << "oracle validation: " << inst.label << ", " << cfg.oracle.n_realizations
           << " realizations\n";
    const auto rows = compare_terms(inst, cfg.oracle.n_realizations,
                                    derive_seed(cfg.master_seed, 0xFACEu));
    os << "ue  term          closed-form     oracle          std-err        z\n";
    bool all_pass = true;
    for (const TermComparison &row : rows) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%-3d %-13s %-15.6g %-15.6g %-14.3g %-8.2f %s\n", row.ue,
                      row.term.c_str(), row.closed_form, row.estimate, row.std_err, row.z,
                      row.pass ? "ok" : "FAIL");
        os << buf;
        all_pass = all_pass && row.pass;
    }
    if (!all_pass) {
        os << "oracle validation FAILED: closed form and simulation disagree beyond 3 std errors\n";
        return 2;
    }
    os << "oracle validation passed: all terms within 3 standard errors\n";
    return 0;
}

} // namespace cli_detail

// Command-line front end; returns the process exit code
// (0 ok, 1 configuration error, 2 runtime error).
inline int run_cli(std::vector<std::string> args) {
    CLI::App app{"cellfree-sim: downlink system-level simulator for cell-free massive MIMO"};
    app.require_subcommand(1);

    cli_detail::CommonArgs common;
    auto *cmd_run = app.add_subcommand("run", "Run the configured experiment variant");
    auto *cmd_sweep = app.add_subcommand("sweep-alpha", "Sweep the power-policy exponent alpha");
    auto *cmd_modes =
        app.add_subcommand("compare-modes", "Compare proposed/canonical/comp_jt on shared snapshots");
    auto *cmd_oracle =
        app.add_subcommand("validate-oracle", "Check the closed-form SINR against the Monte-Carlo oracle");
    auto *cmd_print = app.add_subcommand("print-config", "Print the effective configuration");
    for (CLI::App *cmd : {cmd_run, cmd_sweep, cmd_modes, cmd_oracle, cmd_print})
        cli_detail::add_common_options(cmd, common);

    // CLI11 wants argv in reverse order without the program name.
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        const ConfigMap cfg_map = cli_detail::effective_config(common);
        if (cmd_print->parsed()) {
            std::cout << cfg_map.print();
            return 0;
        }
        const ExperimentConfig cfg = build_experiment_config(cfg_map);
        const std::filesystem::path out_dir = common.out_dir;

        if (cmd_oracle->parsed())
            return cli_detail::run_validate_oracle(cfg, common.quiet, std::cout);

        ExperimentResult result;
        if (cmd_run->parsed()) {
            result = run_experiment(cfg, variants_for_run(cfg), result_config_echo(cfg_map));
        } else if (cmd_modes->parsed()) {
            result = run_experiment(cfg, variants_for_modes(cfg), result_config_echo(cfg_map));
        } else if (cmd_sweep->parsed()) {
            SweepResult sweep = sweep_alpha(cfg, cfg.alpha_grid, result_config_echo(cfg_map));
            std::filesystem::create_directories(out_dir);
            write_sweep_csv(sweep.rows, out_dir / "sweep.csv");
            if (!common.quiet) {
                std::cout << "alpha      95%-likely SE   median SE\n";
                for (const SweepRow &row : sweep.rows) {
                    char buf[80];
                    std::snprintf(buf, sizeof(buf), "%-10g %-15.4f %-12.4f\n", row.alpha,
                                  row.likely95, row.median);
                    std::cout << buf;
                }
            }
            result = std::move(sweep.merged);
        }
        cli_detail::write_experiment_outputs(result, out_dir);
        if (!common.quiet && !cmd_sweep->parsed())
            cli_detail::print_percentile_table(result, std::cout);
        if (!common.quiet)
            std::cout << "wrote " << (out_dir / "samples.csv").string() << ", cdf.csv, summary.json\n";
        return 0;
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

inline int run_cli(int argc, char **argv) {
    return run_cli(std::vector<std::string>(argv + 1, argv + argc));
}

} // namespace cellfree
