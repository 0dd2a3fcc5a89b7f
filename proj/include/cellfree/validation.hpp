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

#include <string>
#include <vector>

#include "cellfree/experiment.hpp"
#include "cellfree/oracle.hpp"

namespace cellfree {

// Construction of desk-scale instances on which the closed-form SINR is
// checked against the Monte-Carlo oracle.

struct ValidationInstance {
    std::string label;
    Snapshot snapshot;
    ServingMap map;
    PowerMatrix eta;
};

inline std::vector<int> pilots_for_pattern(PilotPattern pattern, int n_ues, int tau,
                                           std::uint64_t seed) {
    switch (pattern) {
    case PilotPattern::random_assignment:
        return assign_pilots(n_ues, tau, seed);
    case PilotPattern::orthogonal: {
        std::vector<int> p(n_ues);
        for (int k = 0; k < n_ues; ++k)
            p[k] = k % tau;
        return p;
    }
    case PilotPattern::one_collision: {
        // UEs 0 and 1 share pilot 0; the rest stay orthogonal.
        std::vector<int> p(n_ues, 0);
        for (int k = 2; k < n_ues; ++k)
            p[k] = k - 1;
        if (n_ues >= 2)
            p[1] = 0;
        return p;
    }
    case PilotPattern::full_collision:
        return std::vector<int>(n_ues, 0);
    }
    throw std::invalid_argument("pilots_for_pattern: unknown pattern");
}

inline const char *to_string(PilotPattern pattern) {
    switch (pattern) {
    case PilotPattern::random_assignment:
        return "random";
    case PilotPattern::orthogonal:
        return "orthogonal";
    case PilotPattern::one_collision:
        return "one_collision";
    case PilotPattern::full_collision:
        return "full_collision";
    }
    return "?";
}

// Small random instance in a 300 m square: M APs, K UEs, 2x2 cluster grid,
// default channel model with tau = K pilots laid out per the pattern.
inline ValidationInstance make_validation_instance(int n_aps, int n_ues, PilotPattern pattern,
                                                   Mode mode, const PowerPolicy &policy,
                                                   std::uint64_t seed) {
    if (n_aps < 1 || n_aps > 8 || n_ues < 1 || n_ues > 4)
        throw std::invalid_argument("make_validation_instance: need 1<=M<=8, 1<=K<=4");
    ValidationInstance inst;
    inst.label = std::string(to_string(mode)) + "/" + to_string(pattern) + " M=" +
                 std::to_string(n_aps) + " K=" + std::to_string(n_ues);

    DeploymentConfig dep;
    dep.area_side_m = dep.focus_side_m = 300.0;
    dep.n_aps = dep.n_focus_aps = n_aps;
    dep.n_ues = dep.n_focus_ues = n_ues;
    inst.snapshot.geometry = generate_deployment(dep, derive_seed(seed, seed_stream::geometry));
    inst.snapshot.partition = partition_clusters(inst.snapshot.geometry, 2);

    const int tau = n_ues;
    ChannelParams chan = make_channel_params(1.9, 15.0, 1.65, 10.0, 50.0, 8.0, 20e6, 9.0, 200.0,
                                             100.0, tau);
    LargeScaleState &st = inst.snapshot.state;
    st.beta = large_scale_gains(inst.snapshot.geometry, chan,
                                derive_seed(seed, seed_stream::shadowing));
    st.pilot_of_ue = pilots_for_pattern(pattern, n_ues, tau, derive_seed(seed, seed_stream::pilots));
    st.gamma = estimate_quality(st.beta, st.pilot_of_ue, chan.rho_p, tau);
    st.rho_d = chan.rho_d;
    st.rho_p = chan.rho_p;
    st.tau = tau;

    std::vector<std::vector<int>> selection(n_ues);
    const int l_aps = std::min(2, n_aps);
    for (int k = 0; k < n_ues; ++k)
        selection[k] = select_aps_distance(inst.snapshot.geometry, k, l_aps);
    inst.map = derive_serving_map(selection, inst.snapshot.partition, mode, st.beta,
                                  inst.snapshot.geometry);
    inst.eta = compute_eta(st, inst.map, policy);
    return inst;
}

// One row of the closed-form vs oracle comparison.
struct TermComparison {
    std::string instance;
    int ue = 0;
    std::string term;
    double closed_form = 0.0;
    double estimate = 0.0;
    double std_err = 0.0;
    double z = 0.0; // |closed_form - estimate| / std_err; 0 when both exact
    bool pass = false;
};

inline std::vector<TermComparison> compare_terms(const ValidationInstance &inst,
                                                 std::uint64_t n_realizations,
                                                 std::uint64_t seed, double z_limit = 3.0) {
    const SinrTerms cf = sinr_terms(inst.snapshot.state, inst.eta);
    const OracleReport mc = simulate_sinr(inst.snapshot.state, inst.map, inst.eta, n_realizations,
                                          seed);
    std::vector<TermComparison> rows;
    auto push = [&](int k, const char *term, double closed, const TermEstimate &est) {
        TermComparison row;
        row.instance = inst.label;
        row.ue = k;
        row.term = term;
        row.closed_form = closed;
        row.estimate = est.value;
        row.std_err = est.std_err;
        const double diff = std::abs(closed - est.value);
        row.z = diff == 0.0 ? 0.0 : diff / est.std_err;
        row.pass = diff == 0.0 || diff <= z_limit * est.std_err;
        rows.push_back(row);
    };
    for (int k = 0; k < inst.snapshot.state.n_ues(); ++k) {
        push(k, "desired", cf.desired[k], mc.ue[k].desired);
        push(k, "pilot_contam", cf.pilot_contamination[k], mc.ue[k].pilot_contamination);
        push(k, "interference", cf.interference[k], mc.ue[k].interference);
    }
    return rows;
}

// The fixed validation battery: small instances spanning pilot regimes and
// all three operating modes.
struct ValidationCase {
    int n_aps;
    int n_ues;
    PilotPattern pattern;
    Mode mode;
    PowerPolicy policy;
};

inline std::vector<ValidationCase> validation_battery() {
    const PowerPolicy sqrt_gamma{PowerBasis::gamma, -0.5};
    const PowerPolicy uniform{PowerBasis::gamma, 0.0};
    const PowerPolicy sqrt_beta{PowerBasis::beta, -0.5};
    return {
        {1, 1, PilotPattern::orthogonal, Mode::proposed, sqrt_gamma},
        {3, 2, PilotPattern::one_collision, Mode::proposed, sqrt_gamma},
        {3, 2, PilotPattern::one_collision, Mode::canonical, sqrt_gamma},
        {3, 2, PilotPattern::one_collision, Mode::comp_jt, sqrt_gamma},
        {4, 3, PilotPattern::orthogonal, Mode::canonical, sqrt_gamma},
        {4, 3, PilotPattern::full_collision, Mode::comp_jt, sqrt_gamma},
        {2, 3, PilotPattern::full_collision, Mode::proposed, uniform},
        {4, 1, PilotPattern::orthogonal, Mode::proposed, sqrt_beta},
        {1, 3, PilotPattern::full_collision, Mode::canonical, sqrt_gamma},
        {3, 3, PilotPattern::one_collision, Mode::comp_jt, sqrt_beta},
        {4, 2, PilotPattern::orthogonal, Mode::comp_jt, uniform},
        {2, 2, PilotPattern::full_collision, Mode::proposed, sqrt_gamma},
    };
}

} // namespace cellfree
