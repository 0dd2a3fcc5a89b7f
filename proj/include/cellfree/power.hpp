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
#include <string>

#include "cellfree/association.hpp"
#include "cellfree/channel.hpp"

namespace cellfree {

// Distributed power-control policy family f(x) = x^alpha, applied to either
// the estimate quality gamma or the raw gain beta. alpha = -1/2 on the
// gamma basis is the recommended operating point; alpha = 0 is uniform
// allocation.
enum class PowerBasis { gamma, beta };

struct PowerPolicy {
    PowerBasis basis = PowerBasis::gamma;
    double alpha = -0.5;
};

// Power-control coefficients eta_mk. Rows of APs with a non-empty served
// set satisfy sum_k eta_mk gamma_mk = 1 exactly up to rounding (the per-AP
// power budget met with equality); all other entries are zero.
struct PowerMatrix {
    Matrix eta;
};

// eta_mk = f(x_mk) / sum_{k' in T_m} gamma_mk' f(x_mk')  for m serving k,
// 0 otherwise. The denominator weight is always gamma regardless of the
// basis; only f's argument changes. Each row depends on that AP's own
// statistics and served set alone, so the computation is local to the AP.
inline PowerMatrix compute_eta(const LargeScaleState &state, const ServingMap &map,
                               const PowerPolicy &policy) {
    const int m_aps = state.n_aps();
    const int k_ues = state.n_ues();
    if (map.n_aps() != m_aps || map.n_ues() != k_ues)
        throw std::invalid_argument("compute_eta: serving map / state shape mismatch");
    const Matrix &basis = policy.basis == PowerBasis::gamma ? state.gamma : state.beta;
    PowerMatrix pm;
    pm.eta = Matrix::Zero(m_aps, k_ues);
    for (int m = 0; m < m_aps; ++m) {
        const auto &served = map.served_ues_of_ap[m];
        if (served.empty())
            continue;
        double denom = 0.0;
        for (int k : served)
            denom += state.gamma(m, k) * std::pow(basis(m, k), policy.alpha);
        if (!(denom > 0.0) || !std::isfinite(denom))
            throw std::runtime_error("compute_eta: non-positive or non-finite normalizer at AP " +
                                     std::to_string(m));
        for (int k : served)
            pm.eta(m, k) = std::pow(basis(m, k), policy.alpha) / denom;
    }
    return pm;
}

// Effective power gamma_mk eta_mk spent by AP m on UE k; rows of active APs
// sum to 1. Under alpha = -1/2 on the gamma basis the shares are
// proportional to sqrt(gamma_mk).
inline Matrix effective_power_share(const LargeScaleState &state, const PowerMatrix &pm) {
    return state.gamma * pm.eta;
}

inline const char *to_string(PowerBasis basis) {
    return basis == PowerBasis::gamma ? "gamma" : "beta";
}

} // namespace cellfree
