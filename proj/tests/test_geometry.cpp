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

#include <catch2/catch_amalgamated.hpp>

#include "cellfree/geometry.hpp"

using namespace cellfree;

namespace {

int count_true(const std::vector<bool> &flags) {
    int n = 0;
    for (bool f : flags)
        n += f ? 1 : 0;
    return n;
}

} // namespace

TEST_CASE("default embedding yields 525 dummy APs and 105 dummy UEs") {
    const NetworkGeometry g = generate_deployment(DeploymentConfig{}, 1);
    REQUIRE(g.n_aps() == 625);
    REQUIRE(g.n_ues() == 125);
    CHECK(count_true(g.ap_in_focus) == 100);
    CHECK(count_true(g.ue_in_focus) == 20);
    CHECK(625 - count_true(g.ap_in_focus) == 525);
    CHECK(125 - count_true(g.ue_in_focus) == 105);
}

TEST_CASE("positions lie in the outer square and flags match the membership test") {
    const NetworkGeometry g = generate_deployment(DeploymentConfig{}, 123);
    for (int m = 0; m < g.n_aps(); ++m) {
        const Point &p = g.ap_positions[m];
        CHECK(p.x >= 0.0);
        CHECK(p.x <= g.area_side_m);
        CHECK(p.y >= 0.0);
        CHECK(p.y <= g.area_side_m);
        CHECK(g.ap_in_focus[m] == g.in_focus(p));
    }
    for (int k = 0; k < g.n_ues(); ++k)
        CHECK(g.ue_in_focus[k] == g.in_focus(g.ue_positions[k]));
}

TEST_CASE("degenerate embedding: focus equals area") {
    DeploymentConfig cfg;
    cfg.area_side_m = cfg.focus_side_m = 800.0;
    cfg.n_aps = cfg.n_focus_aps = 10;
    cfg.n_ues = cfg.n_focus_ues = 10;
    const NetworkGeometry g = generate_deployment(cfg, 99);
    CHECK(count_true(g.ap_in_focus) == 10);
    CHECK(count_true(g.ue_in_focus) == 10);
}

TEST_CASE("same seed reproduces the geometry bit-identically") {
    const NetworkGeometry a = generate_deployment(DeploymentConfig{}, 5);
    const NetworkGeometry b = generate_deployment(DeploymentConfig{}, 5);
    REQUIRE(a.n_aps() == b.n_aps());
    for (int m = 0; m < a.n_aps(); ++m) {
        CHECK(a.ap_positions[m].x == b.ap_positions[m].x);
        CHECK(a.ap_positions[m].y == b.ap_positions[m].y);
    }
    for (int k = 0; k < a.n_ues(); ++k) {
        CHECK(a.ue_positions[k].x == b.ue_positions[k].x);
        CHECK(a.ue_positions[k].y == b.ue_positions[k].y);
    }
}

TEST_CASE("inconsistent densities are rejected with the violated relation") {
    DeploymentConfig cfg;
    cfg.n_focus_aps = 150; // 625 * 0.16 = 100, not 150
    CHECK_THROWS_MATCHES(generate_deployment(cfg, 1), ConfigError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("n_focus_aps")));
    DeploymentConfig bad_side;
    bad_side.focus_side_m = 3000.0;
    CHECK_THROWS_AS(generate_deployment(bad_side, 1), ConfigError);
}

TEST_CASE("focus region is uniformly filled (quadrant counts over 100 seeds)") {
    DeploymentConfig cfg;
    long quadrants[4] = {0, 0, 0, 0};
    long outer_halves[2] = {0, 0};
    const int n_seeds = 100;
    for (int seed = 0; seed < n_seeds; ++seed) {
        const NetworkGeometry g = generate_deployment(cfg, 1000 + seed);
        const double c = g.area_side_m / 2.0;
        for (int m = 0; m < g.n_aps(); ++m) {
            const Point &p = g.ap_positions[m];
            if (g.ap_in_focus[m])
                ++quadrants[(p.x < c ? 0 : 1) + (p.y < c ? 0 : 2)];
            else
                ++outer_halves[p.x < c ? 0 : 1];
        }
    }
    // focus quadrants: Binomial(n_seeds * 100, 1/4) within 5 sigma
    const double nf = n_seeds * 100.0;
    const double sigma_f = std::sqrt(nf * 0.25 * 0.75);
    for (long q : quadrants)
        CHECK(std::abs(q - nf / 4.0) < 5.0 * sigma_f);
    // dummy halves: Binomial(n_seeds * 525, 1/2) within 5 sigma
    const double nd = n_seeds * 525.0;
    const double sigma_d = std::sqrt(nd * 0.25);
    for (long h : outer_halves)
        CHECK(std::abs(h - nd / 2.0) < 5.0 * sigma_d);
}

TEST_CASE("empirical densities inside and outside the focus square are equal") {
    const DeploymentConfig cfg;
    const NetworkGeometry g = generate_deployment(cfg, 77);
    const double area_focus = g.focus_side_m * g.focus_side_m;
    const double area_outer = g.area_side_m * g.area_side_m - area_focus;
    const double density_focus = count_true(g.ap_in_focus) / area_focus;
    const double density_outer = (g.n_aps() - count_true(g.ap_in_focus)) / area_outer;
    CHECK(density_focus == Catch::Approx(density_outer)); // exact by construction
}

TEST_CASE("single tile puts every AP in cluster 0") {
    const NetworkGeometry g = generate_deployment(DeploymentConfig{}, 2);
    const ClusterPartition part = partition_clusters(g, 1);
    CHECK(part.n_clusters == 1);
    for (int c : part.cluster_of_ap)
        CHECK(c == 0);
}

TEST_CASE("5x5 tiling of the 2500 m square") {
    NetworkGeometry g;
    g.area_side_m = 2500.0;
    g.focus_side_m = 1000.0;
    g.ap_positions = {{10.0, 10.0},   {510.0, 10.0},  {10.0, 510.0},
                      {2499.0, 2499.0}, {500.0, 100.0}, {2500.0, 2500.0}};
    const ClusterPartition part = partition_clusters(g, 5);
    CHECK(part.n_clusters == 25);
    CHECK(part.cluster_of_ap[0] == 0);  // (10, 10) in tile 0
    CHECK(part.cluster_of_ap[1] == 1);  // second column
    CHECK(part.cluster_of_ap[2] == 5);  // second row
    CHECK(part.cluster_of_ap[3] == 24); // last tile
    CHECK(part.cluster_of_ap[4] == 0);  // x = 500 exactly: boundary goes to the lower tile
    CHECK(part.cluster_of_ap[5] == 24); // outer corner clamps into the last tile
}

TEST_CASE("partition is exhaustive, disjoint, and order-independent") {
    const NetworkGeometry g = generate_deployment(DeploymentConfig{}, 31);
    const ClusterPartition part = partition_clusters(g, 5);
    REQUIRE(static_cast<int>(part.cluster_of_ap.size()) == g.n_aps());
    long total = 0;
    for (const auto &cluster : part.members())
        total += static_cast<long>(cluster.size());
    CHECK(total == g.n_aps()); // every AP in exactly one cluster
    // mean APs per cluster over the full partition
    CHECK(static_cast<double>(total) / part.n_clusters == Catch::Approx(25.0));

    // reversing the AP order permutes assignments consistently
    NetworkGeometry rev = g;
    std::reverse(rev.ap_positions.begin(), rev.ap_positions.end());
    const ClusterPartition part_rev = partition_clusters(rev, 5);
    for (int m = 0; m < g.n_aps(); ++m)
        CHECK(part.cluster_of_ap[m] == part_rev.cluster_of_ap[g.n_aps() - 1 - m]);

    // idempotent: same geometry, same partition
    const ClusterPartition again = partition_clusters(g, 5);
    CHECK(again.cluster_of_ap == part.cluster_of_ap);
}

TEST_CASE("partition rejects n_per_side < 1") {
    const NetworkGeometry g = generate_deployment(DeploymentConfig{}, 4);
    CHECK_THROWS_AS(partition_clusters(g, 0), std::invalid_argument);
}
