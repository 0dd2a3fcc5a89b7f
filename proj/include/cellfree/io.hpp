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
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "cellfree/experiment.hpp"
#include "cellfree/stats.hpp"
#include "cellfree/version.hpp"

namespace cellfree {

// Shortest exact decimal representation of a double (%.17g round-trips).
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Writes via a temp file in the target directory plus rename, so a failed
// run never leaves a partial output behind.
inline void atomic_write_text(const std::filesystem::path &path, const std::string &content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        out << content;
        if (!out.flush())
            throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

// samples.csv: one row per (variant, snapshot, in-focus UE).
inline void write_samples_csv(const ExperimentResult &result, const std::filesystem::path &path) {
    std::string out = "variant,snapshot,ue,sinr,se\n";
    for (const VariantResult &vr : result.variants)
        for (const SampleRow &row : vr.rows)
            out += vr.name + "," + std::to_string(row.snapshot) + "," + std::to_string(row.ue) +
                   "," + format_double(row.sinr) + "," + format_double(row.se) + "\n";
    atomic_write_text(path, out);
}

// cdf.csv: empirical CDF points per variant and metric, cdf = rank / n over
// the sorted values.
inline void write_cdf_csv(const ExperimentResult &result, const std::filesystem::path &path) {
    std::string out = "variant,metric,value,cdf\n";
    for (const VariantResult &vr : result.variants) {
        if (vr.pooled_se.empty() || vr.min_se.empty())
            throw std::runtime_error("variant '" + vr.name + "' has no samples");
        for (const char *metric : {"per_user_se", "min_se"}) {
            const auto pts =
                ecdf_points(std::string(metric) == "per_user_se" ? vr.pooled_se : vr.min_se);
            for (const auto &[value, cdf] : pts)
                out += vr.name + "," + metric + "," + format_double(value) + "," +
                       format_double(cdf) + "\n";
        }
    }
    atomic_write_text(path, out);
}

inline nlohmann::ordered_json summary_json(const ExperimentResult &result) {
    nlohmann::ordered_json j;
    j["version"] = k_version;
    j["seed_scheme"] = k_seed_scheme;
    j["master_seed"] = result.master_seed;
    j["prelog"] = result.prelog;
    j["derived"] = {{"rho_d", result.rho_d},
                    {"rho_p", result.rho_p},
                    {"pathloss_fixed_db", result.pathloss_fixed_db}};
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto &[key, value] : result.config_echo)
        cfg[key] = value;
    j["config"] = cfg;
    j["variants"] = nlohmann::ordered_json::array();
    for (const VariantResult &vr : result.variants) {
        nlohmann::ordered_json v;
        v["name"] = vr.name;
        v["n_per_user_samples"] = vr.pooled_se.size();
        v["n_min_samples"] = vr.min_se.size();
        auto table = [](const std::vector<std::pair<double, double>> &percentiles) {
            nlohmann::ordered_json t = nlohmann::ordered_json::object();
            for (const auto &[p, value] : percentiles) {
                char key[32];
                std::snprintf(key, sizeof(key), "%g", p);
                t[key] = value;
            }
            return t;
        };
        v["per_user_se_percentiles"] = table(vr.pooled_percentiles);
        v["min_se_percentiles"] = table(vr.min_percentiles);
        v["mean_selected_aps"] = vr.mean_selected_aps;
        nlohmann::ordered_json hist = nlohmann::ordered_json::object();
        for (const auto &[b, count] : vr.cluster_histogram)
            hist[std::to_string(b)] = count;
        v["serving_cluster_histogram"] = hist;
        j["variants"].push_back(v);
    }
    return j;
}

inline void write_summary_json(const ExperimentResult &result, const std::filesystem::path &path) {
    atomic_write_text(path, summary_json(result).dump(2) + "\n");
}

// sweep.csv: the alpha-sweep table.
inline void write_sweep_csv(const std::vector<SweepRow> &rows, const std::filesystem::path &path) {
    std::string out = "alpha,se_95likely,se_median\n";
    for (const SweepRow &row : rows)
        out += format_double(row.alpha) + "," + format_double(row.likely95) + "," +
               format_double(row.median) + "\n";
    atomic_write_text(path, out);
}

} // namespace cellfree
