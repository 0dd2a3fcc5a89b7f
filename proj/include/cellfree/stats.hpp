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
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace cellfree {

// Percentile with linear interpolation between order statistics:
// h = (n - 1) * p / 100, result = s[floor(h)] + frac(h) * (s[floor(h)+1] - s[floor(h)]).
// The 95%-likely SE convention used throughout is percentile(se, 5).
inline double percentile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty())
        throw std::invalid_argument("percentile of empty sample");
    if (p < 0.0 || p > 100.0)
        throw std::invalid_argument("percentile rank outside [0, 100]");
    if (sorted.size() == 1)
        return sorted[0];
    const double h = static_cast<double>(sorted.size() - 1) * p / 100.0;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size())
        return sorted[sorted.size() - 1];
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline double percentile(std::vector<double> values, double p) {
    std::sort(values.begin(), values.end());
    return percentile_sorted(values, p);
}

// Right-continuous empirical CDF points: value -> rank/n over the sorted
// sample (rank = 1..n). This is the plot-file convention.
inline std::vector<std::pair<double, double>> ecdf_points(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    std::vector<std::pair<double, double>> pts;
    pts.reserve(values.size());
    const double n = static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        pts.emplace_back(values[i], static_cast<double>(i + 1) / n);
    return pts;
}

inline double mean(std::span<const double> values) {
    if (values.empty())
        throw std::invalid_argument("mean of empty sample");
    double s = 0.0;
    for (double v : values)
        s += v;
    return s / static_cast<double>(values.size());
}

} // namespace cellfree
