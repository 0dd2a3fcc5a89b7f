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
#include <stdexcept>
#include <vector>

#include "cellfree/channel.hpp"
#include "cellfree/power.hpp"
#include "cellfree/stats.hpp"

namespace cellfree {

// Closed-form per-UE SINR under conjugate beamforming with imperfect CSI
// and non-orthogonal pilots, split into its use-and-then-forget terms:
//
//   SINR_k = desired_k / (pilot_contamination_k + interference_k + 1)
//
//   desired_k  = rho_d ( sum_m sqrt(eta_mk) gamma_mk )^2
//   pilot_k    = rho_d sum_{k'!=k, copilot} ( sum_m sqrt(eta_mk') gamma_mk' beta_mk / beta_mk' )^2
//   interf_k   = rho_d sum_{k'} sum_m eta_mk' gamma_mk' beta_mk
//
// The interference term bundles beamforming-gain uncertainty (k' = k) with
// non-coherent inter-user interference; noise is 1 by normalization. The
// small-scale Monte-Carlo oracle (oracle.hpp) validates this transcription
// term by term.
struct SinrTerms {
    std::vector<double> desired;
    std::vector<double> pilot_contamination;
    std::vector<double> interference;

    std::vector<double> sinr() const {
        std::vector<double> out(desired.size());
        for (std::size_t k = 0; k < desired.size(); ++k)
            out[k] = desired[k] / (pilot_contamination[k] + interference[k] + 1.0);
        return out;
    }
};

inline SinrTerms sinr_terms(const LargeScaleState &state, const PowerMatrix &pm) {
    const int m_aps = state.n_aps();
    const int k_ues = state.n_ues();
    const Matrix &eta = pm.eta;
    const double rho_d = state.rho_d;

    // Per-AP spent power sum_k eta_mk gamma_mk (1 for active APs, 0 else).
    std::vector<double> spent(m_aps, 0.0);
    for (int m = 0; m < m_aps; ++m) {
        double s = 0.0;
        for (int k = 0; k < k_ues; ++k)
            s += eta(m, k) * state.gamma(m, k);
        spent[m] = s;
    }

    // Coherent gain sum_m sqrt(eta_mk) gamma_mk per UE, reused by both the
    // desired and (rescaled) contamination terms.
    std::vector<double> coherent(k_ues, 0.0);
    for (int k = 0; k < k_ues; ++k) {
        double s = 0.0;
        for (int m = 0; m < m_aps; ++m)
            s += std::sqrt(eta(m, k)) * state.gamma(m, k);
        coherent[k] = s;
    }

    SinrTerms t;
    t.desired.resize(k_ues);
    t.pilot_contamination.resize(k_ues);
    t.interference.resize(k_ues);
    for (int k = 0; k < k_ues; ++k) {
        t.desired[k] = rho_d * coherent[k] * coherent[k];

        double interf = 0.0;
        for (int m = 0; m < m_aps; ++m)
            interf += state.beta(m, k) * spent[m];
        t.interference[k] = rho_d * interf;

        double contamination = 0.0;
        for (int k2 = 0; k2 < k_ues; ++k2) {
            if (k2 == k || state.pilot_of_ue[k2] != state.pilot_of_ue[k])
                continue;
            double v = 0.0;
            for (int m = 0; m < m_aps; ++m)
                v += std::sqrt(eta(m, k2)) * state.gamma(m, k2) * state.beta(m, k) /
                     state.beta(m, k2);
            contamination += v * v;
        }
        t.pilot_contamination[k] = rho_d * contamination;
    }
    return t;
}

inline std::vector<double> sinr_closed_form(const LargeScaleState &state, const PowerMatrix &pm) {
    return sinr_terms(state, pm).sinr();
}

// SE_k = prelog * log2(1 + SINR_k). The prelog accounts for the pilot
// overhead share of the coherence interval.
inline std::vector<double> spectral_efficiency(const std::vector<double> &sinr, double prelog) {
    if (prelog < 0.0 || prelog > 1.0)
        throw std::invalid_argument("spectral_efficiency: prelog outside [0, 1]");
    std::vector<double> se(sinr.size());
    for (std::size_t k = 0; k < sinr.size(); ++k) {
        if (sinr[k] < 0.0)
            throw std::invalid_argument("spectral_efficiency: negative SINR");
        se[k] = prelog * std::log2(1.0 + sinr[k]);
    }
    return se;
}

// One snapshot's evaluation output. focus_se holds the SE of in-focus UEs
// in UE-index order; only those enter the pooled statistics.
struct SEReport {
    std::vector<double> sinr; // all K UEs
    std::vector<double> se;   // all K UEs
    std::vector<double> focus_se;
    double focus_min_se = 0.0;
    double prelog = 1.0;
};

inline SEReport make_se_report(const LargeScaleState &state, const PowerMatrix &pm, double prelog,
                               const std::vector<bool> &ue_in_focus) {
    SEReport r;
    r.prelog = prelog;
    r.sinr = sinr_closed_form(state, pm);
    r.se = spectral_efficiency(r.sinr, prelog);
    for (std::size_t k = 0; k < r.se.size(); ++k)
        if (ue_in_focus[k])
            r.focus_se.push_back(r.se[k]);
    if (r.focus_se.empty())
        throw std::invalid_argument("make_se_report: no in-focus UEs");
    r.focus_min_se = *std::min_element(r.focus_se.begin(), r.focus_se.end());
    return r;
}

// Distribution summary over snapshots: the pooled per-user SE sample (all
// in-focus UEs of all snapshots) and the per-snapshot minimum SE sample.
struct AggregateSummary {
    std::vector<double> pooled_se_sorted;
    std::vector<double> min_se_sorted;
    std::vector<std::pair<double, double>> pooled_percentiles; // (rank, value)
    std::vector<std::pair<double, double>> min_percentiles;

    double pooled_percentile(double p) const { return percentile_sorted(pooled_se_sorted, p); }
    double min_percentile(double p) const { return percentile_sorted(min_se_sorted, p); }
};

inline AggregateSummary aggregate(const std::vector<SEReport> &reports,
                                  const std::vector<double> &percentiles) {
    if (reports.empty())
        throw std::invalid_argument("aggregate: no snapshot reports");
    AggregateSummary s;
    for (const SEReport &r : reports) {
        s.pooled_se_sorted.insert(s.pooled_se_sorted.end(), r.focus_se.begin(), r.focus_se.end());
        s.min_se_sorted.push_back(r.focus_min_se);
    }
    std::sort(s.pooled_se_sorted.begin(), s.pooled_se_sorted.end());
    std::sort(s.min_se_sorted.begin(), s.min_se_sorted.end());
    for (double p : percentiles) {
        s.pooled_percentiles.emplace_back(p, percentile_sorted(s.pooled_se_sorted, p));
        s.min_percentiles.emplace_back(p, percentile_sorted(s.min_se_sorted, p));
    }
    return s;
}

} // namespace cellfree
