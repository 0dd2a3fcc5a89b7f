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

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "cellfree/geometry.hpp"
#include "cellfree/pathloss.hpp"
#include "cellfree/rng.hpp"

namespace cellfree {

using Matrix = Eigen::ArrayXXd; // (AP, UE) indexed large-scale quantities

struct ChannelParams {
    PathLossParams pathloss;
    double shadow_sigma_db = 8.0; // log-normal shadowing, applied beyond d1 only
    double rho_d = 0.0;           // downlink SNR, linear (radiated power / noise power)
    double rho_p = 0.0;           // pilot SNR, linear
    int tau = 10;                 // pilot sequence length = number of orthogonal pilots
};

// Noise power in dBm over the given bandwidth: thermal floor plus receiver
// noise figure.
inline double noise_power_dbm(double bandwidth_hz, double noise_figure_db) {
    return -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

// Radiated power (mW) normalized by the noise power, as a linear SNR.
inline double normalized_snr(double power_mw, double noise_dbm) {
    const double power_dbm = 10.0 * std::log10(power_mw);
    return std::pow(10.0, (power_dbm - noise_dbm) / 10.0);
}

inline ChannelParams make_channel_params(double carrier_ghz, double ap_height_m,
                                         double ue_height_m, double d0_m, double d1_m,
                                         double shadow_sigma_db, double bandwidth_hz,
                                         double noise_figure_db, double ap_power_mw,
                                         double ue_power_mw, int tau) {
    ChannelParams p;
    p.pathloss = make_pathloss_params(carrier_ghz, ap_height_m, ue_height_m, d0_m, d1_m);
    p.shadow_sigma_db = shadow_sigma_db;
    const double noise_dbm = noise_power_dbm(bandwidth_hz, noise_figure_db);
    p.rho_d = normalized_snr(ap_power_mw, noise_dbm);
    p.rho_p = normalized_snr(ue_power_mw, noise_dbm);
    p.tau = tau;
    return p;
}

// Large-scale link gains beta_mk (linear): path loss plus i.i.d. zero-mean
// Gaussian shadowing (dB) on links longer than d1. Shadowing draws are
// consumed in (m, k) row-major order, only for the links that use them.
inline Matrix large_scale_gains(const NetworkGeometry &geom, const ChannelParams &params,
                                std::uint64_t seed) {
    const int m_aps = geom.n_aps();
    const int k_ues = geom.n_ues();
    Matrix beta(m_aps, k_ues);
    Rng rng(seed);
    for (int m = 0; m < m_aps; ++m) {
        for (int k = 0; k < k_ues; ++k) {
            const double d = distance(geom.ap_positions[m], geom.ue_positions[k]);
            double db = path_loss_db(d, params.pathloss);
            if (d > params.pathloss.d1_m && params.shadow_sigma_db > 0.0)
                db += params.shadow_sigma_db * rng.gaussian();
            beta(m, k) = std::pow(10.0, db / 10.0);
        }
    }
    return beta;
}

// Uncoordinated random pilot assignment: each UE picks one of tau pilots
// uniformly; collisions are allowed and expected for K > tau.
inline std::vector<int> assign_pilots(int n_ues, int tau, std::uint64_t seed) {
    if (tau < 1)
        throw std::invalid_argument("assign_pilots: tau must be >= 1");
    std::vector<int> pilots(n_ues);
    Rng rng(seed);
    for (int k = 0; k < n_ues; ++k)
        pilots[k] = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(tau)));
    return pilots;
}

// Mean-square of the linear-MMSE channel estimate under non-orthogonal
// pilots:
//   gamma_mk = tau rho_p beta_mk^2 / (tau rho_p sum_{k': pilot(k')=pilot(k)} beta_mk' + 1),
// where the sum includes k itself. Always 0 < gamma < beta for finite
// rho_p, tau.
inline Matrix estimate_quality(const Matrix &beta, const std::vector<int> &pilot_of_ue,
                               double rho_p, int tau) {
    if (rho_p <= 0.0 || tau < 1)
        throw std::invalid_argument("estimate_quality: need rho_p > 0 and tau >= 1");
    const int m_aps = static_cast<int>(beta.rows());
    const int k_ues = static_cast<int>(beta.cols());
    if (static_cast<int>(pilot_of_ue.size()) != k_ues)
        throw std::invalid_argument("estimate_quality: pilot assignment size mismatch");
    for (int p : pilot_of_ue)
        if (p < 0 || p >= tau)
            throw std::invalid_argument("estimate_quality: pilot index outside [0, tau)");
    const double trp = static_cast<double>(tau) * rho_p;
    // Per-AP sum of beta over each pilot group.
    Matrix group_sum = Matrix::Zero(m_aps, tau);
    for (int k = 0; k < k_ues; ++k)
        group_sum.col(pilot_of_ue[k]) += beta.col(k);
    Matrix gamma(m_aps, k_ues);
    for (int k = 0; k < k_ues; ++k)
        gamma.col(k) = trp * beta.col(k).square() / (trp * group_sum.col(pilot_of_ue[k]) + 1.0);
    return gamma;
}

// Everything downstream modules need about one channel snapshot.
struct LargeScaleState {
    Matrix beta;  // M x K linear power gains
    Matrix gamma; // M x K estimate quality, gamma = beta - estimation error variance
    std::vector<int> pilot_of_ue;
    double rho_d = 0.0;
    double rho_p = 0.0;
    int tau = 0;

    int n_aps() const { return static_cast<int>(beta.rows()); }
    int n_ues() const { return static_cast<int>(beta.cols()); }
};

inline LargeScaleState make_large_scale_state(const NetworkGeometry &geom,
                                              const ChannelParams &params,
                                              std::uint64_t shadow_seed,
                                              std::uint64_t pilot_seed) {
    LargeScaleState st;
    st.beta = large_scale_gains(geom, params, shadow_seed);
    st.pilot_of_ue = assign_pilots(geom.n_ues(), params.tau, pilot_seed);
    st.gamma = estimate_quality(st.beta, st.pilot_of_ue, params.rho_p, params.tau);
    st.rho_d = params.rho_d;
    st.rho_p = params.rho_p;
    st.tau = params.tau;
    return st;
}

} // namespace cellfree
