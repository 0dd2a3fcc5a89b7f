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
#include <complex>
#include <cstdint>
#include <random>

namespace cellfree {

// Deterministic random-number plumbing ("splitmix64-v1" scheme).
//
// Every random quantity in the simulator is drawn from an explicitly seeded
// stream, and seeds are derived with the fixed mixing function below, so
// results are bit-reproducible for a given master seed regardless of thread
// count or execution order. The transforms from raw 64-bit words to uniform
// and Gaussian variates are spelled out here instead of relying on
// std::*_distribution, whose output is implementation-defined.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Derives the seed of sub-stream `stream` from a base seed.
// Snapshot i uses derive_seed(master_seed, i); within a snapshot the
// per-purpose streams use the tags below.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return splitmix64(splitmix64(base) + splitmix64(stream) * 0x9E3779B97F4A7C15ULL);
}

namespace seed_stream {
inline constexpr std::uint64_t geometry = 1;
inline constexpr std::uint64_t shadowing = 2;
inline constexpr std::uint64_t pilots = 3;
} // namespace seed_stream

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform double in [0, 1): top 53 bits of the next word.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform double in [lo, hi). Rounding may yield hi itself when the
    // interval is wide; callers that care treat the interval as closed.
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased uniform integer in [0, n), n >= 1, by rejection.
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n; // 2^64 mod n
        for (;;) {
            const std::uint64_t r = engine_();
            if (r >= threshold)
                return r % n;
        }
    }

    // Standard normal via Box-Muller; the second variate of each pair is
    // cached and handed out on the next call.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        auto [z0, z1] = gaussian_pair();
        spare_ = z1;
        has_spare_ = true;
        return z0;
    }

    // One circularly-symmetric complex Gaussian CN(0, 1).
    std::complex<double> cgaussian() {
        auto [z0, z1] = gaussian_pair();
        constexpr double inv_sqrt2 = 0.70710678118654752440;
        return {z0 * inv_sqrt2, z1 * inv_sqrt2};
    }

  private:
    std::pair<double, double> gaussian_pair() {
        const double u1 = 1.0 - uniform(); // (0, 1], keeps log() finite
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * 3.14159265358979323846 * u2;
        return {r * std::cos(t), r * std::sin(t)};
    }

    std::mt19937_64 engine_; // bit-exact across platforms by [rand.eng.mers]
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace cellfree
