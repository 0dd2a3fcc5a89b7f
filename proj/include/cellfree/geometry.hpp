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

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "cellfree/errors.hpp"
#include "cellfree/rng.hpp"

namespace cellfree {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Point &a, const Point &b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

// Random AP/UE deployment with border-effect suppression: transmitters cover
// the whole outer square, but statistics are evaluated only over the
// elements flagged as lying in the centered focus square.
struct DeploymentConfig {
    double area_side_m = 2500.0;
    double focus_side_m = 1000.0;
    int n_aps = 625;
    int n_ues = 125;
    int n_focus_aps = 100;
    int n_focus_ues = 20;
};

struct NetworkGeometry {
    double area_side_m = 0.0;
    double focus_side_m = 0.0;
    std::vector<Point> ap_positions;
    std::vector<Point> ue_positions;
    std::vector<bool> ap_in_focus;
    std::vector<bool> ue_in_focus;

    int n_aps() const { return static_cast<int>(ap_positions.size()); }
    int n_ues() const { return static_cast<int>(ue_positions.size()); }

    // Closed-square membership test for the focus region.
    bool in_focus(const Point &p) const {
        const double lo = (area_side_m - focus_side_m) / 2.0;
        const double hi = (area_side_m + focus_side_m) / 2.0;
        return p.x >= lo && p.x <= hi && p.y >= lo && p.y <= hi;
    }
};

namespace detail {

struct Rect {
    double x0, x1, y0, y1;
    double area() const { return (x1 - x0) * (y1 - y0); }
};

// Draws n points uniformly in the focus square followed by n_outer points
// uniformly in the frame between the outer and focus squares. Drawing the
// two regions separately is distributionally equivalent to conditioning a
// uniform draw over the outer square on the in-focus count, and it keeps
// the runtime bounded and the draw sequence fixed.
inline void draw_region_points(Rng &rng, const NetworkGeometry &geom, int n_focus, int n_outer,
                               std::vector<Point> &out, std::vector<bool> &focus_flags) {
    const double s = geom.area_side_m;
    const double lo = (s - geom.focus_side_m) / 2.0;
    const double hi = (s + geom.focus_side_m) / 2.0;
    for (int i = 0; i < n_focus; ++i) {
        Point p{rng.uniform(lo, hi), rng.uniform(lo, hi)};
        out.push_back(p);
        focus_flags.push_back(true);
    }
    if (n_outer == 0)
        return;
    // Frame decomposition: left and right bands full height, then the bottom
    // and top strips between them.
    const Rect rects[4] = {
        {0.0, lo, 0.0, s}, {hi, s, 0.0, s}, {lo, hi, 0.0, lo}, {lo, hi, hi, s}};
    double total = 0.0;
    for (const Rect &r : rects)
        total += r.area();
    for (int i = 0; i < n_outer; ++i) {
        for (;;) {
            const double u = rng.uniform() * total;
            double acc = 0.0;
            const Rect *pick = &rects[3];
            for (const Rect &r : rects) {
                acc += r.area();
                if (u < acc) {
                    pick = &r;
                    break;
                }
            }
            Point p{rng.uniform(pick->x0, pick->x1), rng.uniform(pick->y0, pick->y1)};
            // uniform() may round onto the focus boundary; redraw so the
            // focus flags stay consistent with the membership test.
            if (!geom.in_focus(p)) {
                out.push_back(p);
                focus_flags.push_back(false);
                break;
            }
        }
    }
}

} // namespace detail

inline void validate_deployment_config(const DeploymentConfig &cfg) {
    auto fail = [](const std::string &what) { throw ConfigError("deployment: " + what); };
    if (cfg.area_side_m <= 0.0 || cfg.focus_side_m <= 0.0)
        fail("side lengths must be positive");
    if (cfg.focus_side_m > cfg.area_side_m)
        fail("focus_side_m exceeds area_side_m");
    if (cfg.n_aps < 1 || cfg.n_ues < 1 || cfg.n_focus_aps < 1 || cfg.n_focus_ues < 1)
        fail("element counts must be positive");
    if (cfg.n_focus_aps > cfg.n_aps || cfg.n_focus_ues > cfg.n_ues)
        fail("focus counts exceed total counts");
    // Equal densities inside and outside the focus square, up to rounding:
    // n_focus = round(n_total * focus_area / total_area).
    const double ratio = (cfg.focus_side_m * cfg.focus_side_m) / (cfg.area_side_m * cfg.area_side_m);
    if (std::llround(static_cast<double>(cfg.n_aps) * ratio) != cfg.n_focus_aps)
        fail("n_focus_aps != round(n_aps * focus_area / total_area)");
    if (std::llround(static_cast<double>(cfg.n_ues) * ratio) != cfg.n_focus_ues)
        fail("n_focus_ues != round(n_ues * focus_area / total_area)");
}

inline NetworkGeometry generate_deployment(const DeploymentConfig &cfg, std::uint64_t seed) {
    validate_deployment_config(cfg);
    NetworkGeometry geom;
    geom.area_side_m = cfg.area_side_m;
    geom.focus_side_m = cfg.focus_side_m;
    Rng rng(seed);
    detail::draw_region_points(rng, geom, cfg.n_focus_aps, cfg.n_aps - cfg.n_focus_aps,
                               geom.ap_positions, geom.ap_in_focus);
    detail::draw_region_points(rng, geom, cfg.n_focus_ues, cfg.n_ues - cfg.n_focus_ues,
                               geom.ue_positions, geom.ue_in_focus);
    return geom;
}

// Disjoint, exhaustive assignment of every AP to one cell-centric cluster.
struct ClusterPartition {
    int n_clusters = 0;
    std::vector<int> cluster_of_ap;

    std::vector<std::vector<int>> members() const {
        std::vector<std::vector<int>> by_cluster(n_clusters);
        for (std::size_t m = 0; m < cluster_of_ap.size(); ++m)
            by_cluster[cluster_of_ap[m]].push_back(static_cast<int>(m));
        return by_cluster;
    }
};

namespace detail {

// 1-D tile index with the boundary rule: a coordinate exactly on a tile
// edge belongs to the lower tile.
inline int tile_index_1d(double v, double tile_side, int n) {
    int i = static_cast<int>(std::floor(v / tile_side));
    if (i >= 1 && v <= static_cast<double>(i) * tile_side)
        --i;
    if (i < 0)
        i = 0;
    if (i >= n)
        i = n - 1;
    return i;
}

} // namespace detail

// Tiles the outer square into n_per_side x n_per_side equal rectangles and
// assigns each AP the tile containing it (row-major tile indices).
inline ClusterPartition partition_clusters(const NetworkGeometry &geom, int n_per_side) {
    if (n_per_side < 1)
        throw std::invalid_argument("partition_clusters: n_per_side must be >= 1");
    const double tile = geom.area_side_m / static_cast<double>(n_per_side);
    ClusterPartition part;
    part.n_clusters = n_per_side * n_per_side;
    part.cluster_of_ap.reserve(geom.ap_positions.size());
    for (const Point &p : geom.ap_positions) {
        const int col = detail::tile_index_1d(p.x, tile, n_per_side);
        const int row = detail::tile_index_1d(p.y, tile, n_per_side);
        part.cluster_of_ap.push_back(row * n_per_side + col);
    }
    return part;
}

} // namespace cellfree
