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
 * Parameterized circuits: a fixed reference state followed by gates
 * e^{i s th_k G_k}, applied in list order.
 */
#pragma once

#include <memory>
#include <numbers>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "objective.hpp"
#include "operator.hpp"
#include "state.hpp"

namespace gibbs {

/// e^{i scale theta G}, G either a single Pauli string or a Hermitian operator.
struct Gate {
    std::variant<PauliString, std::shared_ptr<const HermitianOperator>> generator;
    std::size_t param = 0;
    double scale = 1.0;

    [[nodiscard]] bool is_pauli() const { return std::holds_alternative<PauliString>(generator); }
    [[nodiscard]] const PauliString &pauli() const { return std::get<PauliString>(generator); }
    [[nodiscard]] const HermitianOperator &op() const {
        return *std::get<std::shared_ptr<const HermitianOperator>>(generator);
    }

    void apply(double theta, cplx *a, std::size_t dim) const {
        if (is_pauli()) {
            detail::rotate_raw(pauli(), scale * theta, a, dim);
        } else {
            op().apply_exponential_raw(scale * theta, a);
        }
    }
};

class Circuit {
  public:
    Circuit(StateVector reference, std::vector<Gate> gates, std::size_t n_params)
        : reference_(std::move(reference)), gates_(std::move(gates)), n_params_(n_params) {
        for (const auto &g : gates_) {
            if (g.param >= n_params_) throw ConfigError("Circuit: gate parameter index out of range");
            if (g.is_pauli()) {
                check_support(g.pauli(), reference_.n_qubits());
            } else if (g.op().n_qubits() != reference_.n_qubits()) {
                throw ConfigError("Circuit: operator register mismatch");
            }
        }
    }

    [[nodiscard]] std::size_t n_params() const { return n_params_; }
    [[nodiscard]] const StateVector &reference() const { return reference_; }
    [[nodiscard]] const std::vector<Gate> &gates() const { return gates_; }

    [[nodiscard]] StateVector prepare(std::span<const double> params) const {
        check_params(params);
        StateVector s = reference_;
        for (const auto &g : gates_) g.apply(params[g.param], s.mutable_amplitudes().data(), s.dim());
        return s;
    }

    [[nodiscard]] double value(std::span<const double> params, const ObjectiveContext &ctx) const {
        return objective(prepare(params), ctx);
    }

    /**
     * Objective and full gradient in one forward and one backward sweep.
     * Each component equals the parameter-shift difference for its gate
     * (see GradientProbe), evaluated against the back-propagated residual.
     */
    double value_and_gradient(std::span<const double> params, std::span<double> grad,
                              const ObjectiveContext &ctx) const {
        check_params(params);
        if (grad.size() != n_params_) throw ConfigError("Circuit: gradient buffer size mismatch");
        StateVector s = prepare(params);
        ctx.check_shape(s);

        const std::size_t d = s.dim();
        CVector psi = s.amplitudes();
        const auto m = s.as_matrix();
        const CMatrix rho = m * m.adjoint();
        const CMatrix residual = rho - ctx.target_matrix();
        const double c = trace_product(0.5 * rho - ctx.target_matrix(), rho);
        CVector lambda(psi.size());
        Eigen::Map<CMatrix>(lambda.data(), m.rows(), m.cols()).noalias() = residual * m;

        std::fill(grad.begin(), grad.end(), 0.0);
        CVector scratch(psi.size());
        for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
            const Gate &g = *it;
            cplx elem;
            if (g.is_pauli()) {
                elem = detail::pauli_matrix_element(g.pauli(), lambda.data(), psi.data(), d);
            } else {
                g.op().apply_raw(psi.data(), scratch.data());
                elem = lambda.dot(scratch);
            }
            grad[g.param] += -2.0 * g.scale * elem.imag();
            g.apply(-params[g.param], psi.data(), d);
            g.apply(-params[g.param], lambda.data(), d);
        }
        return c;
    }

    /**
     * Gradient by literal shifted Ctilde evaluations. Pauli gates use r = 1.
     * Operator gates are split into their commuting Pauli terms and each term
     * is shifted separately, inserted right after the gate.
     */
    [[nodiscard]] std::vector<double> shift_rule_gradient(std::span<const double> params,
                                                          const ObjectiveContext &ctx) const {
        check_params(params);
        const StateVector centre = prepare(params);
        std::vector<double> grad(n_params_, 0.0);
        const double s = std::numbers::pi / 4.0;
        for (std::size_t k = 0; k < gates_.size(); ++k) {
            const Gate &g = gates_[k];
            if (g.is_pauli()) {
                const double plus = auxiliary_objective(prepare_with_insert(params, k, g.pauli(), s), centre, ctx);
                const double minus = auxiliary_objective(prepare_with_insert(params, k, g.pauli(), -s), centre, ctx);
                grad[g.param] += g.scale * (plus - minus);
                continue;
            }
            if (!g.op().terms_commute()) {
                throw ConfigError("shift_rule_gradient: operator generator has non-commuting terms");
            }
            for (const auto &t : g.op().terms()) {
                const double plus = auxiliary_objective(prepare_with_insert(params, k, t.pauli, s), centre, ctx);
                const double minus = auxiliary_objective(prepare_with_insert(params, k, t.pauli, -s), centre, ctx);
                grad[g.param] += g.scale * t.coefficient * (plus - minus);
            }
        }
        return grad;
    }

    /// Shift-rule derivative for a parameter whose generator has exactly two eigenvalues.
    /// Operator generators are refused; use shift_rule_gradient, which decomposes them.
    [[nodiscard]] double shift_gradient(std::size_t index, std::span<const double> params,
                                        const ObjectiveContext &ctx) const {
        double r = 0.0;
        for (const auto &g : gates_) {
            if (g.param != index) continue;
            if (!g.is_pauli() || r != 0.0) {
                throw ConfigError("shift_gradient: generator of parameter " + std::to_string(index) +
                                  " does not have exactly two eigenvalues");
            }
            r = std::abs(g.scale);
        }
        if (r == 0.0) throw ConfigError("shift_gradient: parameter has no gate");
        // e^{i th (sP)}: sP has eigenvalues -|s|, +|s|, so r = |s|
        return gibbs::shift_gradient([this](std::span<const double> p) { return prepare(p); }, index, params, ctx,
                                     r);
    }

  private:
    void check_params(std::span<const double> params) const {
        if (params.size() != n_params_) throw ConfigError("Circuit: parameter count mismatch");
    }

    StateVector prepare_with_insert(std::span<const double> params, std::size_t after, const PauliString &p,
                                    double angle) const {
        StateVector s = reference_;
        for (std::size_t k = 0; k < gates_.size(); ++k) {
            gates_[k].apply(params[gates_[k].param], s.mutable_amplitudes().data(), s.dim());
            if (k == after) detail::rotate_raw(p, angle, s.mutable_amplitudes().data(), s.dim());
        }
        return s;
    }

    StateVector reference_;
    std::vector<Gate> gates_;
    std::size_t n_params_;
};

} // namespace gibbs
