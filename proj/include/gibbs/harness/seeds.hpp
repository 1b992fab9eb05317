// Copyright 2026 The gibbs-adapt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Per-cell seed derivation.
 *
 * cell_seed folds its inputs through splitmix64 in a fixed order:
 *
 *     h = mix(master_seed)
 *     h = mix(h ^ model_code)        ising = 1, xy = 2
 *     h = mix(h ^ beta_index)        position in the beta_inv list
 *     h = mix(h ^ n_ancilla)
 *     h = mix(h ^ restart)
 *
 * where mix is the splitmix64 finalizer applied after adding the golden
 * gamma 0x9e3779b97f4a7c15. The truncation order is not an input, so every
 * truncation order of a cell starts from the same references.
 */
#pragma once

#include <cstdint>

#include "config.hpp"

namespace gibbs::harness {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t model_code(Model m) { return m == Model::ising ? 1 : 2; }

inline constexpr std::uint64_t cell_seed(std::uint64_t master_seed, Model model, std::uint64_t beta_index,
                                         std::uint64_t n_ancilla, std::uint64_t restart) {
    std::uint64_t h = splitmix64(master_seed);
    h = splitmix64(h ^ model_code(model));
    h = splitmix64(h ^ beta_index);
    h = splitmix64(h ^ n_ancilla);
    return splitmix64(h ^ restart);
}

} // namespace gibbs::harness
