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

namespace cellfree {

// Three-slope path loss over the COST231-Hata urban model.
//
// All distances are in meters. Above the outer breakpoint d1 the loss
// follows the full COST231-Hata slope (35 dB/decade); between d0 and d1 it
// falls at 20 dB/decade; below d0 it plateaus. fixed_loss_db carries the
// frequency/height-dependent constant, already converted to the meters
// convention (see make_pathloss_params).
struct PathLossParams {
    double fixed_loss_db = 35.71508370390842; // 1.9 GHz, h_ap 15 m, h_ue 1.65 m
    double d0_m = 10.0;
    double d1_m = 50.0;
};

// COST231-Hata fixed loss (dB) for distances expressed in km:
// 46.3 + 33.9 log10(f) - 13.82 log10(h_ap) - a(h_ue) + (1.56 log10(f) - 0.8),
// with f in MHz and a(h_ue) = (1.1 log10(f) - 0.7) h_ue.
inline double hata_cost231_fixed_loss_db(double carrier_ghz, double ap_height_m,
                                         double ue_height_m) {
    if (carrier_ghz <= 0.0 || ap_height_m <= 0.0)
        throw std::invalid_argument("hata_cost231_fixed_loss_db: non-positive input");
    const double f_mhz = carrier_ghz * 1000.0;
    const double lf = std::log10(f_mhz);
    return 46.3 + 33.9 * lf - 13.82 * std::log10(ap_height_m) -
           (1.1 * lf - 0.7) * ue_height_m + (1.56 * lf - 0.8);
}

// The COST231-Hata constant is defined for d in km; the three-slope model
// here takes d in meters, so the 35 log10(1000) slope offset is folded into
// the constant. path_loss_db(1000 m) then equals -hata_fixed_loss exactly.
inline PathLossParams make_pathloss_params(double carrier_ghz, double ap_height_m,
                                           double ue_height_m, double d0_m = 10.0,
                                           double d1_m = 50.0) {
    if (!(d0_m > 0.0) || !(d1_m > d0_m))
        throw std::invalid_argument("make_pathloss_params: need 0 < d0 < d1");
    PathLossParams p;
    p.fixed_loss_db = hata_cost231_fixed_loss_db(carrier_ghz, ap_height_m, ue_height_m) -
                      35.0 * 3.0; // 35 dB/decade over the km -> m conversion
    p.d0_m = d0_m;
    p.d1_m = d1_m;
    return p;
}

// Continuous, non-increasing path gain in dB (always <= 0 for the default
// parameters). d = 0 returns the inner-slope plateau.
inline double path_loss_db(double distance_m, const PathLossParams &p) {
    if (distance_m < 0.0)
        throw std::invalid_argument("path_loss_db: negative distance");
    if (distance_m > p.d1_m)
        return -p.fixed_loss_db - 35.0 * std::log10(distance_m);
    if (distance_m > p.d0_m)
        return -p.fixed_loss_db - 15.0 * std::log10(p.d1_m) - 20.0 * std::log10(distance_m);
    return -p.fixed_loss_db - 15.0 * std::log10(p.d1_m) - 20.0 * std::log10(p.d0_m);
}

} // namespace cellfree
