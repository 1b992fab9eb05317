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
 * Reference states, ansatz descriptions, and CNOT accounting.
 */
#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "circuit.hpp"
#include "errors.hpp"
#include "models.hpp"
#include "objective.hpp"
#include "pool.hpp"
#include "state.hpp"

namespace gibbs {

/// Uniform double in [0, 1) from the top 53 bits; identical on every standard library.
inline double uniform01(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Angles for the randomized reference, one per qubit in qubit order, drawn from [0, 2pi).
inline std::vector<double> reference_angles(std::size_t n_qubits, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> out(n_qubits);
    for (auto &a : out) a = 2.0 * std::numbers::pi * uniform01(rng);
    return out;
}

/// gamma_0 in [0, pi/2] for the layered loops.
inline double draw_gamma0(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return 0.5 * std::numbers::pi * uniform01(rng);
}

/**
 * e^{-i a_q Y} on every qubit of |0...0>, then CNOT(ancilla i -> data j)
 * for every ancilla/data pair. The CNOTs all commute.
 */
inline StateVector vqe_reference_state(std::size_t n_data, std::size_t n_ancilla, std::span<const double> angles) {
    if (n_ancilla < 1) throw ConfigError("vqe_reference_state: need at least one ancilla qubit");
    if (angles.size() != n_data + n_ancilla) throw ConfigError("vqe_reference_state: one angle per qubit");
    StateVector s(n_data, n_ancilla);
    for (std::size_t q = 0; q < angles.size(); ++q) {
        detail::rotate_raw(PauliString::single(q, Pauli::Y), -angles[q], s.mutable_amplitudes().data(), s.dim());
    }
    // every set ancilla bit flips every data bit, so data bits flip by the ancilla parity
    const std::uint64_t data_mask = (std::uint64_t{1} << n_data) - 1;
    CVector out(s.dim());
    const auto &in = s.amplitudes();
    for (std::uint64_t b = 0; b < s.dim(); ++b) {
        const bool flip = (std::popcount(b >> n_data) & 1) != 0;
        out[static_cast<Eigen::Index>(flip ? b ^ data_mask : b)] = in[static_cast<Eigen::Index>(b)];
    }
    return {n_data, n_ancilla, std::move(out)};
}

inline StateVector vqe_reference_state(std::size_t n_data, std::size_t n_ancilla, std::uint64_t seed) {
    const auto angles = reference_angles(n_data + n_ancilla, seed);
    return vqe_reference_state(n_data, n_ancilla, angles);
}

/// Product of singlets (|0_Dk 1_Ak> - |1_Dk 0_Ak>)/sqrt2, the ground state of the entangler.
inline StateVector qaoa_reference_state(std::size_t n_data) {
    if (n_data < 1) throw ConfigError("qaoa_reference_state: need at least one data qubit");
    const std::uint64_t dd = std::uint64_t{1} << n_data;
    CVector amps = CVector::Zero(static_cast<Eigen::Index>(dd * dd));
    const double norm = std::pow(2.0, -0.5 * static_cast<double>(n_data));
    for (std::uint64_t x = 0; x < dd; ++x) {
        const std::uint64_t a = ~x & (dd - 1);
        amps[static_cast<Eigen::Index>(a * dd + x)] = (std::popcount(x) & 1) ? -norm : norm;
    }
    return {n_data, n_data, std::move(amps)};
}

/**
 * Everything a run needs about one (Hamiltonian, temperature, register) cell.
 * The objective uses `objective_ctx` (exact or truncated); fidelities are
 * always reported against the exact Gibbs state.
 */
struct GibbsProblem {
    std::shared_ptr<const HermitianOperator> hamiltonian;
    std::size_t n_data = 0;
    std::size_t n_ancilla = 0;
    double beta = 0.0;
    std::optional<unsigned> truncation;
    std::shared_ptr<const GibbsTarget> exact;
    std::shared_ptr<const GibbsTarget> target;
    std::shared_ptr<const HermitianOperator> doubled; // H_A + H_D, built on demand for layered flavors

    [[nodiscard]] ObjectiveContext context() const { return {target, n_data, n_ancilla}; }
    [[nodiscard]] DensityMatrix exact_state() const { return exact->state(); }
    [[nodiscard]] double fidelity_of(const StateVector &s) const {
        return fidelity(partial_trace_ancilla(s), exact_state());
    }
};

inline GibbsProblem make_problem(HermitianOperator h, std::size_t n_ancilla, double beta,
                                 std::optional<unsigned> truncation = std::nullopt) {
    GibbsProblem p;
    p.n_data = h.n_qubits();
    p.n_ancilla = n_ancilla;
    p.beta = beta;
    p.truncation = truncation;
    p.hamiltonian = std::make_shared<const HermitianOperator>(std::move(h));
    p.exact = std::make_shared<const GibbsTarget>(gibbs_state(*p.hamiltonian, beta));
    p.target = truncation ? std::make_shared<const GibbsTarget>(truncated_target(*p.hamiltonian, beta, *truncation))
                          : p.exact;
    if (n_ancilla == p.n_data) {
        p.doubled = std::make_shared<const HermitianOperator>(doubled_hamiltonian(*p.hamiltonian));
    }
    return p;
}

enum class Flavor { vqe, qaoa, baseline };

inline const char *to_string(Flavor f) {
    switch (f) {
    case Flavor::vqe: return "vqe";
    case Flavor::qaoa: return "qaoa";
    case Flavor::baseline: return "baseline";
    }
    return "?";
}

struct Reference {
    enum class Kind { random_y, singlet } kind = Kind::random_y;
    std::vector<double> angles; // random_y only
};

/// vqe: generator and alpha. qaoa/baseline: cost angle gamma, then mixer and alpha.
struct AnsatzLayer {
    PoolOperator generator;
    double alpha = 0.0;
    double gamma = 0.0;
};

/**
 * Ansatz description. Layers apply in list order after the reference:
 * vqe:     e^{i a_n P_n} ... e^{i a_1 P_1} |ref>
 * layered: prod_k e^{i a_k M_k} e^{i g_k (H_A + H_D)/2} |singlet>, k = 1 first.
 * Parameter vector layout: vqe [a_1..a_n]; layered [g_1, a_1, g_2, a_2, ...].
 */
struct Ansatz {
    Flavor flavor = Flavor::vqe;
    std::size_t n_data = 0;
    std::size_t n_ancilla = 0;
    Reference reference;
    std::vector<AnsatzLayer> layers;
    std::shared_ptr<const HermitianOperator> cost;  // H_A + H_D, layered flavors
    std::size_t cost_layer_cnots = 0;               // layered flavors

    [[nodiscard]] bool layered() const { return flavor != Flavor::vqe; }
    [[nodiscard]] std::size_t n_params() const { return layered() ? 2 * layers.size() : layers.size(); }

    [[nodiscard]] std::vector<double> params() const {
        std::vector<double> out;
        out.reserve(n_params());
        for (const auto &l : layers) {
            if (layered()) out.push_back(l.gamma);
            out.push_back(l.alpha);
        }
        return out;
    }

    void set_params(std::span<const double> p) {
        if (p.size() != n_params()) throw ConfigError("Ansatz::set_params: parameter count mismatch");
        std::size_t k = 0;
        for (auto &l : layers) {
            if (layered()) l.gamma = p[k++];
            l.alpha = p[k++];
        }
    }

    [[nodiscard]] StateVector reference_state() const {
        return reference.kind == Reference::Kind::singlet ? qaoa_reference_state(n_data)
                                                          : vqe_reference_state(n_data, n_ancilla, reference.angles);
    }

    [[nodiscard]] Circuit circuit() const {
        std::vector<Gate> gates;
        std::size_t k = 0;
        for (const auto &l : layers) {
            if (layered()) {
                if (!cost) throw ConfigError("Ansatz: layered flavor without cost operator");
                gates.push_back(Gate{cost, k++, 0.5});
            }
            if (l.generator.is_pauli()) {
                gates.push_back(Gate{l.generator.pauli, k++, 1.0});
            } else {
                gates.push_back(Gate{l.generator.entangler, k++, 1.0});
            }
        }
        return {reference_state(), std::move(gates), k};
    }

    [[nodiscard]] StateVector state() const { return circuit().prepare(params()); }
};

inline Ansatz make_vqe_ansatz(const GibbsProblem &p, std::span<const double> angles) {
    Ansatz a;
    a.flavor = Flavor::vqe;
    a.n_data = p.n_data;
    a.n_ancilla = p.n_ancilla;
    a.reference = {Reference::Kind::random_y, std::vector<double>(angles.begin(), angles.end())};
    return a;
}

/// Two CNOTs per two-qubit term of the problem Hamiltonian.
inline std::size_t cost_layer_cnots(const HermitianOperator &h) {
    std::size_t n = 0;
    const auto merged = h.aggregated();
    for (const auto &t : merged.terms()) n += t.pauli.weight() == 2 ? 2 : 0;
    return n;
}

inline Ansatz make_layered_ansatz(const GibbsProblem &p, Flavor flavor) {
    if (p.n_ancilla != p.n_data || !p.doubled) throw ConfigError("layered ansatz needs n_ancilla == n_data");
    Ansatz a;
    a.flavor = flavor;
    a.n_data = p.n_data;
    a.n_ancilla = p.n_ancilla;
    a.reference = {Reference::Kind::singlet, {}};
    a.cost = p.doubled;
    a.cost_layer_cnots = cost_layer_cnots(*p.hamiltonian);
    return a;
}

/**
 * CNOTs to execute the ansatz.
 * vqe: n_data*n_ancilla for the reference plus each generator's cost
 *      (2 per two-qubit Pauli string, 0 per single-qubit one).
 * layered: n_data for the singlet reference, then per layer the cost layer
 *      (2 per two-qubit term of H, one copy) plus the mixer (2 per Pauli
 *      string, 3 per pair for the full entangler).
 */
inline std::size_t cnot_count(const Ansatz &a) {
    std::size_t n = a.layered() ? a.n_data : a.n_data * a.n_ancilla;
    for (const auto &l : a.layers) {
        n += l.generator.cnot_cost;
        if (a.layered()) n += a.cost_layer_cnots;
    }
    return n;
}

inline constexpr const char *kCnotConvention =
    "vqe: NdNa reference + 2 per 2-qubit generator; layered: Nd singlet reference + per layer "
    "(2 per 2-qubit term of H) + mixer (2 per Pauli string, 3 per pair for H_AD)";

} // namespace gibbs
