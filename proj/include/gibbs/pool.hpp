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
 * Generator pools for the adaptive loops.
 */
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "errors.hpp"
#include "models.hpp"
#include "operator.hpp"
#include "pauli.hpp"

namespace gibbs {

enum class PoolKind { pauli, sum_entangler };

struct PoolOperator {
    PoolKind kind = PoolKind::pauli;
    PauliString pauli;                                   // kind == pauli
    std::shared_ptr<const HermitianOperator> entangler;  // kind == sum_entangler
    std::size_t cnot_cost = 0;

    static PoolOperator from_pauli(PauliString p) {
        PoolOperator op;
        op.kind = PoolKind::pauli;
        op.cnot_cost = p.weight() == 2 ? 2 : 0;
        op.pauli = std::move(p);
        return op;
    }

    /// The full data-ancilla entangler; costed at 3 CNOTs per (data, ancilla) pair.
    static PoolOperator sum_entangler(std::size_t n_data) {
        PoolOperator op;
        op.kind = PoolKind::sum_entangler;
        op.entangler = std::make_shared<const HermitianOperator>(entangling_hamiltonian(n_data));
        op.cnot_cost = 3 * n_data;
        return op;
    }

    [[nodiscard]] bool is_pauli() const { return kind == PoolKind::pauli; }
    [[nodiscard]] std::string label() const { return is_pauli() ? pauli.str() : std::string("H_AD"); }

    friend bool operator==(const PoolOperator &a, const PoolOperator &b) {
        if (a.kind != b.kind) return false;
        return a.is_pauli() ? a.pauli == b.pauli : a.entangler->n_qubits() == b.entangler->n_qubits();
    }
};

/// Every weight-1 and weight-2 Pauli string on n qubits, in PauliString order.
inline std::vector<PoolOperator> build_vqe_pool(std::size_t n_qubits) {
    if (n_qubits < 2) throw ConfigError("build_vqe_pool: need at least 2 qubits");
    constexpr Pauli letters[] = {Pauli::X, Pauli::Y, Pauli::Z};
    std::vector<PoolOperator> pool;
    pool.reserve(3 * n_qubits + 9 * n_qubits * (n_qubits - 1) / 2);
    for (std::size_t i = 0; i < n_qubits; ++i) {
        for (Pauli a : letters) pool.push_back(PoolOperator::from_pauli(PauliString::single(i, a)));
        for (std::size_t j = i + 1; j < n_qubits; ++j)
            for (Pauli a : letters)
                for (Pauli b : letters) pool.push_back(PoolOperator::from_pauli(PauliString::pair(i, a, j, b)));
    }
    return pool;
}

/**
 * The full entangler first, then every two-qubit Pauli string with one
 * factor on a data qubit and one on an ancilla qubit, in PauliString order.
 * Leading with the entangler makes it win exact ties.
 */
inline std::vector<PoolOperator> build_qaoa_pool(std::size_t n_data) {
    if (n_data < 1) throw ConfigError("build_qaoa_pool: need at least 1 data qubit");
    constexpr Pauli letters[] = {Pauli::X, Pauli::Y, Pauli::Z};
    std::vector<PoolOperator> pool;
    pool.reserve(9 * n_data * n_data + 1);
    pool.push_back(PoolOperator::sum_entangler(n_data));
    if (!pool.front().entangler->terms_commute()) throw ConfigError("build_qaoa_pool: entangler terms do not commute");
    for (std::size_t d = 0; d < n_data; ++d)
        for (std::size_t a = n_data; a < 2 * n_data; ++a)
            for (Pauli p : letters)
                for (Pauli q : letters) pool.push_back(PoolOperator::from_pauli(PauliString::pair(d, p, a, q)));
    return pool;
}

} // namespace gibbs
