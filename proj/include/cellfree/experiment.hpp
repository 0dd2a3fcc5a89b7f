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

#include <atomic>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "cellfree/config.hpp"
#include "cellfree/evaluation.hpp"
#include "cellfree/version.hpp"

namespace cellfree {

// One Monte-Carlo deployment: geometry, cluster partition and large-scale
// channel state. All variants of an experiment are evaluated against the
// identical snapshot, which is what makes cross-variant comparisons paired.
struct Snapshot {
    NetworkGeometry geometry;
    ClusterPartition partition;
    LargeScaleState state;
};

inline Snapshot make_snapshot(const ExperimentConfig &cfg, std::uint64_t snapshot_seed) {
    Snapshot s;
    s.geometry =
        generate_deployment(cfg.deployment, derive_seed(snapshot_seed, seed_stream::geometry));
    s.partition = partition_clusters(s.geometry, cfg.clusters_per_side);
    s.state = make_large_scale_state(s.geometry, cfg.channel,
                                     derive_seed(snapshot_seed, seed_stream::shadowing),
                                     derive_seed(snapshot_seed, seed_stream::pilots));
    return s;
}

// An experiment variant: an association scheme plus a power policy, sharing
// the snapshot state with every other variant of the run.
struct Variant {
    std::string name;
    AssocConfig assoc;
    PowerPolicy policy;
};

inline ServingMap build_serving_map(const Snapshot &snap, const AssocConfig &assoc) {
    std::vector<std::vector<int>> selection;
    if (assoc.mode == Mode::proposed) {
        selection.resize(snap.geometry.n_ues());
        for (int k = 0; k < snap.geometry.n_ues(); ++k)
            selection[k] = assoc.selection == SelectionStrategy::distance
                               ? select_aps_distance(snap.geometry, k, assoc.num_aps)
                               : select_aps_llsf(snap.state.beta.col(k), assoc.delta);
    }
    return derive_serving_map(selection, snap.partition, assoc.mode, snap.state.beta,
                              snap.geometry, assoc.comp_jt_metric);
}

struct VariantSnapshotOutput {
    SEReport report;
    std::vector<int> focus_selected_sizes; // L_k over in-focus UEs
    std::vector<int> focus_cluster_counts; // B_k over in-focus UEs
};

inline VariantSnapshotOutput evaluate_variant(const Snapshot &snap, const Variant &variant,
                                              double prelog) {
    const ServingMap map = build_serving_map(snap, variant.assoc);
    const PowerMatrix eta = compute_eta(snap.state, map, variant.policy);
    VariantSnapshotOutput out;
    out.report = make_se_report(snap.state, eta, prelog, snap.geometry.ue_in_focus);
    for (int k = 0; k < snap.geometry.n_ues(); ++k) {
        if (!snap.geometry.ue_in_focus[k])
            continue;
        out.focus_selected_sizes.push_back(static_cast<int>(map.selected_aps[k].size()));
        out.focus_cluster_counts.push_back(static_cast<int>(map.serving_clusters[k].size()));
    }
    return out;
}

struct SampleRow {
    int snapshot = 0;
    int ue = 0; // global UE index within the snapshot's geometry
    double sinr = 0.0;
    double se = 0.0;
};

struct VariantResult {
    std::string name;
    std::vector<SampleRow> rows;   // one row per (snapshot, in-focus UE)
    std::vector<double> pooled_se; // same order as rows
    std::vector<double> min_se;    // one per snapshot
    std::vector<std::pair<double, double>> pooled_percentiles;
    std::vector<std::pair<double, double>> min_percentiles;
    double mean_selected_aps = 0.0;        // mean L_k over pooled in-focus UEs
    std::map<int, long> cluster_histogram; // B_k -> count over pooled in-focus UEs
};

struct ExperimentResult {
    std::vector<std::pair<std::string, std::string>> config_echo;
    std::uint64_t master_seed = 0;
    double prelog = 1.0;
    // derived channel quantities, echoed for reproducibility
    double rho_d = 0.0;
    double rho_p = 0.0;
    double pathloss_fixed_db = 0.0;
    std::vector<VariantResult> variants;
};

inline int resolve_workers(int configured) {
    if (configured > 0)
        return configured;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace detail {

struct SnapshotOutputs {
    std::vector<int> focus_ues; // global indices of in-focus UEs
    std::vector<VariantSnapshotOutput> variants;
};

} // namespace detail

// Runs n_snapshots independent snapshots, evaluating every variant on each.
// Snapshot i is fully determined by derive_seed(master_seed, i), so the
// result is bit-identical for any worker count; workers only race for
// indices, never for data.
inline ExperimentResult run_experiment(const ExperimentConfig &cfg,
                                       const std::vector<Variant> &variants,
                                       std::vector<std::pair<std::string, std::string>>
                                           config_echo = {}) {
    if (variants.empty())
        throw std::invalid_argument("run_experiment: no variants");
    const int n_snapshots = cfg.n_snapshots;
    const int n_variants = static_cast<int>(variants.size());

    std::vector<detail::SnapshotOutputs> outputs(n_snapshots);
    std::atomic<int> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    int error_snapshot = -1;

    auto work = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n_snapshots)
                return;
            try {
                const Snapshot snap = make_snapshot(cfg, derive_seed(cfg.master_seed, i));
                detail::SnapshotOutputs out;
                for (int k = 0; k < snap.geometry.n_ues(); ++k)
                    if (snap.geometry.ue_in_focus[k])
                        out.focus_ues.push_back(k);
                out.variants.reserve(n_variants);
                for (const Variant &v : variants)
                    out.variants.push_back(evaluate_variant(snap, v, cfg.prelog));
                outputs[i] = std::move(out);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error || i < error_snapshot) {
                    first_error = std::current_exception();
                    error_snapshot = i;
                }
            }
        }
    };

    const int n_workers = std::min(resolve_workers(cfg.workers), n_snapshots);
    if (n_workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (int w = 0; w < n_workers; ++w)
            pool.emplace_back(work);
        for (auto &t : pool)
            t.join();
    }
    if (first_error) {
        try {
            std::rethrow_exception(first_error);
        } catch (const std::exception &e) {
            throw std::runtime_error("snapshot " + std::to_string(error_snapshot) + ": " +
                                     e.what());
        }
    }

    ExperimentResult result;
    result.config_echo = std::move(config_echo);
    result.master_seed = cfg.master_seed;
    result.prelog = cfg.prelog;
    result.rho_d = cfg.channel.rho_d;
    result.rho_p = cfg.channel.rho_p;
    result.pathloss_fixed_db = cfg.channel.pathloss.fixed_loss_db;
    result.variants.resize(n_variants);
    for (int v = 0; v < n_variants; ++v) {
        VariantResult &vr = result.variants[v];
        vr.name = variants[v].name;
        long selected_total = 0;
        long selected_count = 0;
        std::vector<SEReport> reports;
        reports.reserve(n_snapshots);
        for (int i = 0; i < n_snapshots; ++i) {
            const VariantSnapshotOutput &out = outputs[i].variants[v];
            for (std::size_t f = 0; f < outputs[i].focus_ues.size(); ++f) {
                const int ue = outputs[i].focus_ues[f];
                vr.rows.push_back({i, ue, out.report.sinr[ue], out.report.focus_se[f]});
                vr.pooled_se.push_back(out.report.focus_se[f]);
            }
            vr.min_se.push_back(out.report.focus_min_se);
            for (int b : out.focus_cluster_counts)
                ++vr.cluster_histogram[b];
            for (int l : out.focus_selected_sizes) {
                selected_total += l;
                ++selected_count;
            }
            reports.push_back(out.report);
        }
        const AggregateSummary agg = aggregate(reports, cfg.percentiles);
        vr.pooled_percentiles = agg.pooled_percentiles;
        vr.min_percentiles = agg.min_percentiles;
        vr.mean_selected_aps =
            selected_count > 0 ? static_cast<double>(selected_total) / selected_count : 0.0;
    }
    return result;
}

// ---- canned experiment suites ----

inline std::string format_alpha(double alpha) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "alpha_%g", alpha);
    return buf;
}

inline std::vector<Variant> variants_for_run(const ExperimentConfig &cfg) {
    return {Variant{to_string(cfg.assoc.mode), cfg.assoc, cfg.policy}};
}

// Three-way mode comparison on shared snapshots: proposed vs canonical vs
// comp_jt, everything else equal.
inline std::vector<Variant> variants_for_modes(const ExperimentConfig &cfg) {
    std::vector<Variant> variants;
    for (Mode mode : {Mode::proposed, Mode::canonical, Mode::comp_jt}) {
        AssocConfig assoc = cfg.assoc;
        assoc.mode = mode;
        variants.push_back({to_string(mode), assoc, cfg.policy});
    }
    return variants;
}

struct SweepRow {
    double alpha = 0.0;
    double likely95 = 0.0; // 5th percentile of pooled per-user SE
    double median = 0.0;   // 50th percentile
};

struct SweepResult {
    std::vector<SweepRow> rows;
    ExperimentResult merged; // per-alpha variants, for file emission
};

// Runs one experiment per alpha with the identical master seed, so each
// grid point sees the same snapshots (paired sweep).
inline SweepResult sweep_alpha(const ExperimentConfig &cfg, const std::vector<double> &grid,
                               std::vector<std::pair<std::string, std::string>> config_echo = {}) {
    if (grid.empty())
        throw std::invalid_argument("sweep_alpha: empty grid");
    SweepResult sweep;
    sweep.merged.config_echo = std::move(config_echo);
    sweep.merged.master_seed = cfg.master_seed;
    sweep.merged.prelog = cfg.prelog;
    sweep.merged.rho_d = cfg.channel.rho_d;
    sweep.merged.rho_p = cfg.channel.rho_p;
    sweep.merged.pathloss_fixed_db = cfg.channel.pathloss.fixed_loss_db;
    for (double alpha : grid) {
        ExperimentConfig point = cfg;
        point.policy.alpha = alpha;
        Variant variant{format_alpha(alpha), point.assoc, point.policy};
        ExperimentResult res = run_experiment(point, {variant});
        VariantResult &vr = res.variants[0];
        sweep.rows.push_back({alpha, percentile(vr.pooled_se, 5.0), percentile(vr.pooled_se, 50.0)});
        sweep.merged.variants.push_back(std::move(vr));
    }
    return sweep;
}

} // namespace cellfree
