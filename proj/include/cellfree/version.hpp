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

namespace cellfree {

inline constexpr const char *k_version = "0.1.0";

// Version tag of the seed-derivation scheme (see rng.hpp). Bumped whenever
// the mapping from (master seed, snapshot index) to random streams changes,
// since that silently changes every Monte-Carlo result.
inline constexpr const char *k_seed_scheme = "splitmix64-v1";

} // namespace cellfree
