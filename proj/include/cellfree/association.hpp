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

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "cellfree/channel.hpp"
#include "cellfree/errors.hpp"
#include "cellfree/geometry.hpp"

namespace cellfree {

// Who serves whom.
//
//   proposed  - user-centric: the selected APs identify serving cell-centric
//               clusters, and every AP of those clusters transmits to the UE.
//   canonical - every AP in the network serves every UE.
//   comp_jt   - cell-centric baseline: exactly one cluster serves each UE.
enum class Mode { proposed, canonical, comp_jt };

enum class SelectionStrategy { distance, llsf };

// Metric used by comp_jt to pick the single serving cluster.
enum class CompJtMetric { beta_sum, max_beta, nearest_ap };

// Per-UE serving sets plus the per-AP inverse map. All index lists are
// sorted ascending; that ordering is what makes downstream floating-point
// reductions reproducible.
struct ServingMap {
    std::vector<std::vector<int>> selected_aps;     // user-centric cluster (size L_k)
    std::vector<std::vector<int>> serving_clusters; // cell-centric clusters (size B_k)
    std::vector<std::vector<int>> serving_aps;      // union of the serving clusters' APs
    std::vector<std::vector<int>> served_ues_of_ap; // T_m, derived by inversion

    int n_ues() const { return static_cast<int>(serving_aps.size()); }
    int n_aps() const { return static_cast<int>(served_ues_of_ap.size()); }
};

// The L APs closest to the UE; distance ties resolve to the lower AP index.
inline std::vector<int> select_aps_distance(const NetworkGeometry &geom, int ue_index, int l_aps) {
    const int m_aps = geom.n_aps();
    if (l_aps < 1 || l_aps > m_aps)
        throw ConfigError("assoc: AP selection size L must be in [1, n_aps]");
    const Point ue = geom.ue_positions[ue_index];
    std::vector<int> order(m_aps);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> d2(m_aps);
    for (int m = 0; m < m_aps; ++m) {
        const double dx = geom.ap_positions[m].x - ue.x;
        const double dy = geom.ap_positions[m].y - ue.y;
        d2[m] = dx * dx + dy * dy;
    }
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return d2[a] != d2[b] ? d2[a] < d2[b] : a < b; });
    order.resize(l_aps);
    std::sort(order.begin(), order.end());
    return order;
}

// Largest-large-scale-fading selection: the smallest prefix of APs, sorted
// by descending beta, whose beta mass reaches delta of the column total.
inline std::vector<int> select_aps_llsf(const Eigen::ArrayXd &beta_col, double delta) {
    if (!(delta > 0.0) || delta > 1.0)
        throw ConfigError("assoc: llsf delta must lie in (0, 1]");
    const int m_aps = static_cast<int>(beta_col.size());
    std::vector<int> order(m_aps);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return beta_col[a] != beta_col[b] ? beta_col[a] > beta_col[b] : a < b;
    });
    double total = 0.0;
    for (int m : order)
        total += beta_col[m];
    const double target = delta * total;
    double acc = 0.0;
    int count = 0;
    for (int m : order) {
        acc += beta_col[m];
        ++count;
        if (acc >= target)
            break;
    }
    order.resize(count);
    std::sort(order.begin(), order.end());
    return order;
}

// Cluster with the largest beta sum towards the UE; ties to the lower index.
inline int best_cluster(const Matrix &beta, const ClusterPartition &partition, int ue_index) {
    std::vector<double> sums(partition.n_clusters, 0.0);
    for (std::size_t m = 0; m < partition.cluster_of_ap.size(); ++m)
        sums[partition.cluster_of_ap[m]] += beta(static_cast<int>(m), ue_index);
    int best = 0;
    for (int c = 1; c < partition.n_clusters; ++c)
        if (sums[c] > sums[best])
            best = c;
    return best;
}

inline int best_cluster_metric(const Matrix &beta, const ClusterPartition &partition,
                               const NetworkGeometry &geom, int ue_index, CompJtMetric metric) {
    switch (metric) {
    case CompJtMetric::beta_sum:
        return best_cluster(beta, partition, ue_index);
    case CompJtMetric::max_beta: {
        int best_ap = 0;
        for (int m = 1; m < static_cast<int>(beta.rows()); ++m)
            if (beta(m, ue_index) > beta(best_ap, ue_index))
                best_ap = m;
        return partition.cluster_of_ap[best_ap];
    }
    case CompJtMetric::nearest_ap: {
        const Point ue = geom.ue_positions[ue_index];
        int best_ap = 0;
        double best_d = distance(geom.ap_positions[0], ue);
        for (int m = 1; m < geom.n_aps(); ++m) {
            const double d = distance(geom.ap_positions[m], ue);
            if (d < best_d) {
                best_d = d;
                best_ap = m;
            }
        }
        return partition.cluster_of_ap[best_ap];
    }
    }
    throw std::invalid_argument("best_cluster_metric: unknown metric");
}

namespace detail {

// Expands per-UE serving-cluster sets into serving AP sets and the per-AP
// served-UE inverse.
inline ServingMap expand_serving_map(std::vector<std::vector<int>> selected,
                                     std::vector<std::vector<int>> clusters,
                                     const ClusterPartition &partition, int n_aps) {
    ServingMap map;
    map.selected_aps = std::move(selected);
    map.serving_clusters = std::move(clusters);
    const auto members = partition.members();
    const int n_ues = static_cast<int>(map.serving_clusters.size());
    map.serving_aps.resize(n_ues);
    map.served_ues_of_ap.resize(n_aps);
    for (int k = 0; k < n_ues; ++k) {
        auto &aps = map.serving_aps[k];
        for (int c : map.serving_clusters[k])
            aps.insert(aps.end(), members[c].begin(), members[c].end());
        std::sort(aps.begin(), aps.end());
        for (int m : aps)
            map.served_ues_of_ap[m].push_back(k);
    }
    return map;
}

inline std::vector<int> clusters_of(const std::vector<int> &aps, const ClusterPartition &partition) {
    std::vector<int> clusters;
    for (int m : aps)
        clusters.push_back(partition.cluster_of_ap[m]);
    std::sort(clusters.begin(), clusters.end());
    clusters.erase(std::unique(clusters.begin(), clusters.end()), clusters.end());
    return clusters;
}

} // namespace detail

// Builds the ServingMap for the given mode.
//
//   proposed  - serving clusters are those touched by each UE's selection.
//   canonical - every (non-empty) cluster serves every UE.
//   comp_jt   - the single highest-quality cluster per the chosen metric.
//
// `selection` is consulted only in proposed mode; `beta`/`geom` only by
// comp_jt metrics that need them.
inline ServingMap derive_serving_map(const std::vector<std::vector<int>> &selection,
                                     const ClusterPartition &partition, Mode mode,
                                     const Matrix &beta, const NetworkGeometry &geom,
                                     CompJtMetric comp_metric = CompJtMetric::beta_sum) {
    const int n_aps = static_cast<int>(partition.cluster_of_ap.size());
    const int n_ues = static_cast<int>(beta.cols());
    std::vector<std::vector<int>> selected(n_ues);
    std::vector<std::vector<int>> clusters(n_ues);
    switch (mode) {
    case Mode::proposed: {
        if (static_cast<int>(selection.size()) != n_ues)
            throw std::invalid_argument("derive_serving_map: selection size mismatch");
        for (int k = 0; k < n_ues; ++k) {
            if (selection[k].empty())
                throw std::invalid_argument("derive_serving_map: empty AP selection for UE " +
                                            std::to_string(k));
            selected[k] = selection[k];
            std::sort(selected[k].begin(), selected[k].end());
            clusters[k] = detail::clusters_of(selected[k], partition);
        }
        break;
    }
    case Mode::canonical: {
        // All clusters that contain at least one AP; their union is all APs.
        std::vector<int> all;
        for (int c = 0; c < partition.n_clusters; ++c)
            all.push_back(c);
        const auto members = partition.members();
        std::erase_if(all, [&](int c) { return members[c].empty(); });
        for (int k = 0; k < n_ues; ++k)
            clusters[k] = all;
        break;
    }
    case Mode::comp_jt: {
        for (int k = 0; k < n_ues; ++k)
            clusters[k] = {best_cluster_metric(beta, partition, geom, k, comp_metric)};
        break;
    }
    }
    return detail::expand_serving_map(std::move(selected), std::move(clusters), partition, n_aps);
}

inline const char *to_string(Mode mode) {
    switch (mode) {
    case Mode::proposed:
        return "proposed";
    case Mode::canonical:
        return "canonical";
    case Mode::comp_jt:
        return "comp_jt";
    }
    return "?";
}

} // namespace cellfree
