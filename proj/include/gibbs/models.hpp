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
 * Spin-chain Hamiltonians, the data-ancilla entangler, and thermal targets.
 *
 * Units: k_B = 1, so beta is the inverse temperature 1/T.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "operator.hpp"
#include "state.hpp"

namespace gibbs {

/// -sum_i Z_i Z_{i+1} on a periodic chain of n_data qubits.
inline HermitianOperator ising_hamiltonian(std::size_t n_data) {
    if (n_data < 2) throw ConfigError("ising_hamiltonian: need at least 2 sites");
    std::vector<PauliTerm> terms;
    for (std::size_t i = 0; i < n_data; ++i) {
        terms.push_back({-1.0, PauliString::pair(i, Pauli::Z, (i + 1) % n_data, Pauli::Z)});
    }
    return {n_data, std::move(terms)};
}

/// -sum_i (X_i X_{i+1} + Y_i Y_{i+1}) on a periodic chain.
inline HermitianOperator xy_hamiltonian(std::size_t n_data) {
    if (n_data < 2) throw ConfigError("xy_hamiltonian: need at least 2 sites");
    std::vector<PauliTerm> terms;
    for (std::size_t i = 0; i < n_data; ++i) {
        const std::size_t j = (i + 1) % n_data;
        terms.push_back({-1.0, PauliString::pair(i, Pauli::X, j, Pauli::X)});
        terms.push_back({-1.0, PauliString::pair(i, Pauli::Y, j, Pauli::Y)});
    }
    return {n_data, std::move(terms)};
}

/// sum_k (X X + Y Y + Z Z) on each (data k, ancilla k) pair of a 2*n_data register.
/// Its ground state is the product of singlets, maximally entangled across the cut.
inline HermitianOperator entangling_hamiltonian(std::size_t n_data) {
    if (n_data < 1) throw ConfigError("entangling_hamiltonian: register too small");
    std::vector<PauliTerm> terms;
    for (std::size_t k = 0; k < n_data; ++k) {
        for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
            terms.push_back({1.0, PauliString::pair(k, p, n_data + k, p)});
        }
    }
    return {2 * n_data, std::move(terms)};
}

/// H (x) 1 + 1 (x) H on the joint register, data copy on qubits [0, n) and ancilla copy on [n, 2n).
inline HermitianOperator doubled_hamiltonian(const HermitianOperator &h) {
    const std::size_t n = h.n_qubits();
    return h.embedded(2 * n, 0) + h.embedded(2 * n, n);
}

enum class TargetMode { exact, truncated };

/**
 * The operator the objective is measured against: e^{-beta H}/Z, or the
 * order-m Taylor surrogate divided by its own trace. The surrogate can
 * have negative eigenvalues; that is reported, not rejected.
 */
struct GibbsTarget {
    double beta = 0.0;
    TargetMode mode = TargetMode::exact;
    unsigned order = 0; // truncation order, meaningful in truncated mode
    CMatrix matrix;
    double partition_norm = 1.0;
    double log_partition = 0.0;
    RVector eigenvalues;  // descending
    CMatrix eigenvectors; // columns match eigenvalues

    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(matrix.rows()); }
    [[nodiscard]] bool is_exact() const { return mode == TargetMode::exact; }
    [[nodiscard]] bool has_negative_eigenvalues() const {
        return eigenvalues.size() > 0 && eigenvalues[eigenvalues.size() - 1] < 0.0;
    }
    /// Only valid in exact mode.
    [[nodiscard]] DensityMatrix state() const {
        if (!is_exact()) throw ConfigError("GibbsTarget::state: truncated surrogate is not a state");
        return DensityMatrix(matrix);
    }
};

namespace detail {

inline GibbsTarget assemble_target(const HermitianOperator &h, double beta, TargetMode mode, unsigned order,
                                   const RVector &weights, double norm) {
    GibbsTarget t;
    t.beta = beta;
    t.mode = mode;
    t.order = order;
    t.partition_norm = norm;
    const CMatrix &v = h.eigenvectors();
    const RVector scaled = weights / norm;
    t.matrix = v * scaled.asDiagonal() * v.adjoint();
    t.matrix = 0.5 * (t.matrix + t.matrix.adjoint()).eval();

    std::vector<Eigen::Index> idx(static_cast<std::size_t>(scaled.size()));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return scaled[a] > scaled[b]; });
    t.eigenvalues.resize(scaled.size());
    t.eigenvectors.resize(v.rows(), v.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        t.eigenvalues[static_cast<Eigen::Index>(i)] = scaled[idx[i]];
        t.eigenvectors.col(static_cast<Eigen::Index>(i)) = v.col(idx[i]);
    }
    return t;
}

} // namespace detail

/// e^{-beta H}/Z.
inline GibbsTarget gibbs_state(const HermitianOperator &h, double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw ConfigError("gibbs_state: beta must be finite and >= 0");
    const RVector &e = h.eigenvalues();
    const double e_min = e.minCoeff();
    // shift by the ground energy so large beta cannot overflow
    RVector w(e.size());
    for (Eigen::Index i = 0; i < e.size(); ++i) w[i] = std::exp(-beta * (e[i] - e_min));
    const double shifted_sum = w.sum();
    auto t = detail::assemble_target(h, beta, TargetMode::exact, 0, w, shifted_sum);
    t.log_partition = std::log(shifted_sum) - beta * e_min;
    t.partition_norm = std::exp(t.log_partition);
    return t;
}

/// [sum_{n<=m} (-beta H)^n / n!] / trace, evaluated in the eigenbasis of H.
inline GibbsTarget truncated_target(const HermitianOperator &h, double beta, unsigned m) {
    if (!std::isfinite(beta)) throw ConfigError("truncated_target: beta must be finite");
    const RVector &e = h.eigenvalues();
    RVector w(e.size());
    for (Eigen::Index i = 0; i < e.size(); ++i) {
        const double x = -beta * e[i];
        double term = 1.0;
        double sum = 1.0;
        for (unsigned n = 1; n <= m; ++n) {
            term *= x / n;
            sum += term;
        }
        w[i] = sum;
    }
    const double tr = w.sum();
    if (!(tr > 0.0)) {
        throw NumericalError("truncated_target: truncated series has non-positive trace at order " +
                             std::to_string(m) + "; raise the order");
    }
    auto t = detail::assemble_target(h, beta, TargetMode::truncated, m, w, tr);
    t.log_partition = std::log(tr);
    return t;
}

/// Highest fidelity with the exact target reachable by any data state of rank <= 2^n_ancilla:
/// the sum of the 2^n_ancilla largest eigenvalues.
inline double max_fidelity_bound(const GibbsTarget &target, std::size_t n_ancilla) {
    if (!target.is_exact()) throw ConfigError("max_fidelity_bound: needs an exact target");
    const auto d = target.eigenvalues.size();
    const auto rank = n_ancilla >= 62 ? d : std::min<Eigen::Index>(d, Eigen::Index{1} << n_ancilla);
    return std::min(1.0, target.eigenvalues.head(rank).sum());
}

/// Tr(rho H) - S(rho)/beta. Diagnostic only; the optimizers never evaluate it.
inline double free_energy(const DensityMatrix &rho, const HermitianOperator &h, double beta) {
    if (!(beta > 0.0)) throw ConfigError("free_energy: beta must be > 0");
    if (rho.dim() != h.dim()) throw ConfigError("free_energy: dimension mismatch");
    return trace_product(rho.matrix(), h.to_dense()) - von_neumann_entropy(rho) / beta;
}

} // namespace gibbs
