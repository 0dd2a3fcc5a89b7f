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

#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cellfree/association.hpp"
#include "cellfree/errors.hpp"
#include "cellfree/geometry.hpp"
#include "cellfree/power.hpp"

namespace cellfree {

// Flat `dotted.key = value` configuration with '#' comments. Every key must
// exist in the built-in registry; unknown keys are configuration errors so
// that typos in files or --set overrides fail loudly.

namespace detail {

inline std::string trim(const std::string &s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos)
        return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace detail

class ConfigMap {
  public:
    // Registry of known keys with their defaults; order defines print order.
    static const std::vector<std::pair<std::string, std::string>> &registry() {
        static const std::vector<std::pair<std::string, std::string>> keys = {
            {"deployment.area_side_m", "2500"},
            {"deployment.focus_side_m", "1000"},
            {"deployment.n_aps", "625"},
            {"deployment.n_ues", "125"},
            {"deployment.n_focus_aps", "100"},
            {"deployment.n_focus_ues", "20"},
            {"deployment.clusters_per_side", "5"},
            {"channel.carrier_freq_ghz", "1.9"},
            {"channel.ap_height_m", "15"},
            {"channel.ue_height_m", "1.65"},
            {"channel.pathloss_d0_m", "10"},
            {"channel.pathloss_d1_m", "50"},
            {"channel.shadow_sigma_db", "8"},
            {"channel.bandwidth_hz", "20000000"},
            {"channel.noise_figure_db", "9"},
            {"channel.ap_power_mw", "200"},
            {"channel.ue_power_mw", "100"},
            {"channel.tau_pilots", "10"},
            {"assoc.mode", "proposed"},
            {"assoc.selection", "distance"},
            {"assoc.num_aps", "5"},
            {"assoc.llsf_delta", "0.95"},
            {"assoc.comp_jt_metric", "beta_sum"},
            {"power.basis", "gamma"},
            {"power.alpha", "-0.5"},
            {"power.alpha_grid", "-1,-0.75,-0.5,-0.25,0,0.25,0.5"},
            {"eval.prelog", "auto"},
            {"eval.coherence_symbols", "200"},
            {"eval.percentiles", "5,50,95"},
            {"experiment.n_snapshots", "500"},
            {"experiment.master_seed", "1"},
            {"experiment.workers", "0"},
            {"oracle.n_aps", "3"},
            {"oracle.n_ues", "2"},
            {"oracle.pilot_pattern", "one_collision"},
            {"oracle.n_realizations", "1000000"},
        };
        return keys;
    }

    static ConfigMap defaults() {
        ConfigMap cfg;
        for (const auto &[key, value] : registry())
            cfg.values_[key] = value;
        return cfg;
    }

    void set(const std::string &key, const std::string &value) {
        if (!values_.count(key))
            throw ConfigError("unknown config key '" + key + "'");
        values_[key] = detail::trim(value);
    }

    // Applies one `key=value` override (the --set flag).
    void set_override(const std::string &assignment) {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override '" + assignment + "' is not of the form key=value");
        set(detail::trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
    }

    void load_file(const std::string &path) {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open config file '" + path + "'");
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos)
                line.erase(hash);
            line = detail::trim(line);
            if (line.empty())
                continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
            set(detail::trim(line.substr(0, eq)), line.substr(eq + 1));
        }
    }

    const std::string &raw(const std::string &key) const {
        auto it = values_.find(key);
        if (it == values_.end())
            throw ConfigError("unknown config key '" + key + "'");
        return it->second;
    }

    double get_double(const std::string &key) const {
        const std::string &v = raw(key);
        errno = 0;
        char *end = nullptr;
        const double x = std::strtod(v.c_str(), &end);
        if (end != v.c_str() + v.size() || v.empty() || errno == ERANGE)
            throw ConfigError("config key '" + key + "': cannot parse '" + v + "' as a number");
        return x;
    }

    long long get_int(const std::string &key) const {
        const double x = get_double(key);
        const long long i = static_cast<long long>(x);
        if (static_cast<double>(i) != x)
            throw ConfigError("config key '" + key + "': '" + raw(key) + "' is not an integer");
        return i;
    }

    std::uint64_t get_u64(const std::string &key) const {
        const std::string &v = raw(key);
        errno = 0;
        char *end = nullptr;
        const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
        if (end != v.c_str() + v.size() || v.empty() || errno == ERANGE || v.find('-') != std::string::npos)
            throw ConfigError("config key '" + key + "': cannot parse '" + v +
                              "' as an unsigned integer");
        return x;
    }

    std::vector<double> get_double_list(const std::string &key) const {
        const std::string &v = raw(key);
        std::vector<double> out;
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = detail::trim(item);
            errno = 0;
            char *end = nullptr;
            const double x = std::strtod(item.c_str(), &end);
            if (item.empty() || end != item.c_str() + item.size() || errno == ERANGE)
                throw ConfigError("config key '" + key + "': cannot parse '" + item +
                                  "' as a number");
            out.push_back(x);
        }
        if (out.empty())
            throw ConfigError("config key '" + key + "': empty list");
        return out;
    }

    // Effective configuration, re-parsable by load_file.
    std::string print() const {
        std::string out;
        for (const auto &[key, unused] : registry()) {
            out += key;
            out += " = ";
            out += values_.at(key);
            out += "\n";
        }
        return out;
    }

    std::vector<std::pair<std::string, std::string>> entries() const {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto &[key, unused] : registry())
            out.emplace_back(key, values_.at(key));
        return out;
    }

  private:
    std::map<std::string, std::string> values_;
};

// ---- typed experiment configuration built from a ConfigMap ----

enum class PilotPattern { random_assignment, orthogonal, one_collision, full_collision };

struct OracleConfig {
    int n_aps = 3;
    int n_ues = 2;
    PilotPattern pattern = PilotPattern::one_collision;
    std::uint64_t n_realizations = 1000000;
};

struct AssocConfig {
    Mode mode = Mode::proposed;
    SelectionStrategy selection = SelectionStrategy::distance;
    int num_aps = 5;      // L for distance selection
    double delta = 0.95;  // mass fraction for llsf selection
    CompJtMetric comp_jt_metric = CompJtMetric::beta_sum;
};

struct ExperimentConfig {
    DeploymentConfig deployment;
    int clusters_per_side = 5;
    ChannelParams channel;
    AssocConfig assoc;
    PowerPolicy policy;
    std::vector<double> alpha_grid;
    double prelog = 0.95;
    std::vector<double> percentiles;
    int n_snapshots = 500;
    std::uint64_t master_seed = 1;
    int workers = 0; // 0 = hardware concurrency
    OracleConfig oracle;
};

// Config entries that define the experiment. Execution-only keys (the
// worker count) are excluded so that emitted results are byte-identical
// across execution schedules.
inline std::vector<std::pair<std::string, std::string>> result_config_echo(const ConfigMap &cfg) {
    auto entries = cfg.entries();
    std::erase_if(entries, [](const auto &kv) { return kv.first == "experiment.workers"; });
    return entries;
}

namespace detail {

template <typename E>
inline E parse_enum(const ConfigMap &cfg, const std::string &key,
                    const std::vector<std::pair<std::string, E>> &table) {
    const std::string &v = cfg.raw(key);
    for (const auto &[name, value] : table)
        if (v == name)
            return value;
    std::string allowed;
    for (const auto &[name, unused] : table)
        allowed += (allowed.empty() ? "" : ", ") + name;
    throw ConfigError("config key '" + key + "': unknown value '" + v + "' (expected one of " +
                      allowed + ")");
}

} // namespace detail

inline ExperimentConfig build_experiment_config(const ConfigMap &cfg) {
    ExperimentConfig ec;
    ec.deployment.area_side_m = cfg.get_double("deployment.area_side_m");
    ec.deployment.focus_side_m = cfg.get_double("deployment.focus_side_m");
    ec.deployment.n_aps = static_cast<int>(cfg.get_int("deployment.n_aps"));
    ec.deployment.n_ues = static_cast<int>(cfg.get_int("deployment.n_ues"));
    ec.deployment.n_focus_aps = static_cast<int>(cfg.get_int("deployment.n_focus_aps"));
    ec.deployment.n_focus_ues = static_cast<int>(cfg.get_int("deployment.n_focus_ues"));
    validate_deployment_config(ec.deployment);
    ec.clusters_per_side = static_cast<int>(cfg.get_int("deployment.clusters_per_side"));
    if (ec.clusters_per_side < 1)
        throw ConfigError("config key 'deployment.clusters_per_side': must be >= 1");

    const int tau = static_cast<int>(cfg.get_int("channel.tau_pilots"));
    if (tau < 1)
        throw ConfigError("config key 'channel.tau_pilots': must be >= 1");
    ec.channel = make_channel_params(
        cfg.get_double("channel.carrier_freq_ghz"), cfg.get_double("channel.ap_height_m"),
        cfg.get_double("channel.ue_height_m"), cfg.get_double("channel.pathloss_d0_m"),
        cfg.get_double("channel.pathloss_d1_m"), cfg.get_double("channel.shadow_sigma_db"),
        cfg.get_double("channel.bandwidth_hz"), cfg.get_double("channel.noise_figure_db"),
        cfg.get_double("channel.ap_power_mw"), cfg.get_double("channel.ue_power_mw"), tau);

    ec.assoc.mode = detail::parse_enum<Mode>(cfg, "assoc.mode",
                                             {{"proposed", Mode::proposed},
                                              {"canonical", Mode::canonical},
                                              {"comp_jt", Mode::comp_jt}});
    ec.assoc.selection = detail::parse_enum<SelectionStrategy>(
        cfg, "assoc.selection",
        {{"distance", SelectionStrategy::distance}, {"llsf", SelectionStrategy::llsf}});
    ec.assoc.num_aps = static_cast<int>(cfg.get_int("assoc.num_aps"));
    if (ec.assoc.num_aps < 1 || ec.assoc.num_aps > ec.deployment.n_aps)
        throw ConfigError("config key 'assoc.num_aps': must be in [1, deployment.n_aps]");
    ec.assoc.delta = cfg.get_double("assoc.llsf_delta");
    if (!(ec.assoc.delta > 0.0) || ec.assoc.delta > 1.0)
        throw ConfigError("config key 'assoc.llsf_delta': must lie in (0, 1]");
    ec.assoc.comp_jt_metric = detail::parse_enum<CompJtMetric>(
        cfg, "assoc.comp_jt_metric",
        {{"beta_sum", CompJtMetric::beta_sum},
         {"max_beta", CompJtMetric::max_beta},
         {"nearest_ap", CompJtMetric::nearest_ap}});

    ec.policy.basis = detail::parse_enum<PowerBasis>(
        cfg, "power.basis", {{"gamma", PowerBasis::gamma}, {"beta", PowerBasis::beta}});
    ec.policy.alpha = cfg.get_double("power.alpha");
    ec.alpha_grid = cfg.get_double_list("power.alpha_grid");

    const long long coherence = cfg.get_int("eval.coherence_symbols");
    if (coherence < 1)
        throw ConfigError("config key 'eval.coherence_symbols': must be >= 1");
    if (cfg.raw("eval.prelog") == "auto") {
        ec.prelog = 1.0 - static_cast<double>(tau) / static_cast<double>(coherence);
        if (ec.prelog < 0.0)
            throw ConfigError("eval.prelog = auto requires tau_pilots <= coherence_symbols");
    } else {
        ec.prelog = cfg.get_double("eval.prelog");
    }
    if (ec.prelog < 0.0 || ec.prelog > 1.0)
        throw ConfigError("config key 'eval.prelog': must lie in [0, 1]");
    ec.percentiles = cfg.get_double_list("eval.percentiles");
    for (double p : ec.percentiles)
        if (p < 0.0 || p > 100.0)
            throw ConfigError("config key 'eval.percentiles': ranks must lie in [0, 100]");

    ec.n_snapshots = static_cast<int>(cfg.get_int("experiment.n_snapshots"));
    if (ec.n_snapshots < 1)
        throw ConfigError("config key 'experiment.n_snapshots': must be >= 1");
    ec.master_seed = cfg.get_u64("experiment.master_seed");
    ec.workers = static_cast<int>(cfg.get_int("experiment.workers"));
    if (ec.workers < 0)
        throw ConfigError("config key 'experiment.workers': must be >= 0");

    ec.oracle.n_aps = static_cast<int>(cfg.get_int("oracle.n_aps"));
    ec.oracle.n_ues = static_cast<int>(cfg.get_int("oracle.n_ues"));
    if (ec.oracle.n_aps < 1 || ec.oracle.n_aps > 8 || ec.oracle.n_ues < 1 || ec.oracle.n_ues > 4)
        throw ConfigError("oracle instance size must satisfy 1 <= n_aps <= 8, 1 <= n_ues <= 4");
    ec.oracle.pattern = detail::parse_enum<PilotPattern>(
        cfg, "oracle.pilot_pattern",
        {{"random", PilotPattern::random_assignment},
         {"orthogonal", PilotPattern::orthogonal},
         {"one_collision", PilotPattern::one_collision},
         {"full_collision", PilotPattern::full_collision}});
    ec.oracle.n_realizations = cfg.get_u64("oracle.n_realizations");
    if (ec.oracle.n_realizations < 10000)
        throw ConfigError("config key 'oracle.n_realizations': must be >= 10000");
    return ec;
}

} // namespace cellfree
