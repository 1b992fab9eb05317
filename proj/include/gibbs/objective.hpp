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
 * Entropy-free Gibbs objective and its parameter-shift gradients.
 *
 *   C(rho)          = -Tr(T rho) + 1/2 Tr(rho^2)
 *   Ctilde(th, phi) = -Tr(T rho(th)) + Tr(rho(th) rho(phi))
 *   dC/dth          = r [Ctilde(th + pi/4r, th) - Ctilde(th - pi/4r, th)]
 *
 * T is the exact Gibbs state or its truncated surrogate, whichever the
 * context carries. The shift rule is exact for generators with two
 * eigenvalues; Pauli strings have r = 1.
 */
#pragma once

#include <cmath>
#include <memory>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "models.hpp"
#include "operator.hpp"
#include "state.hpp"

namespace gibbs {

class ObjectiveContext {
  public:
    ObjectiveContext(std::shared_ptr<const GibbsTarget> target, std::size_t n_data, std::size_t n_ancilla)
        : target_(std::move(target)), n_data_(n_data), n_ancilla_(n_ancilla) {
        if (!target_) throw ConfigError("ObjectiveContext: missing target");
        if (target_->dim() != (std::size_t{1} << n_data_)) {
            throw ConfigError("ObjectiveContext: target dimension does not match 2^n_data");
        }
    }

    [[nodiscard]] const GibbsTarget &target() const { return *target_; }
    [[nodiscard]] const CMatrix &target_matrix() const { return target_->matrix; }
    [[nodiscard]] std::size_t n_data() const { return n_data_; }
    [[nodiscard]] std::size_t n_ancilla() const { return n_ancilla_; }

    void check_shape(const StateVector &s) const {
        if (s.n_data() != n_data_ || s.n_ancilla() != n_ancilla_) {
            throw ConfigError("objective: state register shape does not match context");
        }
    }

  private:
    std::shared_ptr<const GibbsTarget> target_;
    std::size_t n_data_;
    std::size_t n_ancilla_;
};

inline double objective(const DensityMatrix &rho, const ObjectiveContext &ctx) {
    if (rho.dim() != ctx.target().dim()) throw ConfigError("objective: dimension mismatch");
    return -trace_product(ctx.target_matrix(), rho.matrix()) + 0.5 * purity(rho);
}

inline double objective(const StateVector &state, const ObjectiveContext &ctx) {
    ctx.check_shape(state);
    return objective(partial_trace_ancilla(state), ctx);
}

inline double auxiliary_objective(const StateVector &state_theta, const StateVector &state_phi,
                                  const ObjectiveContext &ctx) {
    ctx.check_shape(state_theta);
    ctx.check_shape(state_phi);
    const auto rho_theta = partial_trace_ancilla(state_theta);
    const auto rho_phi = partial_trace_ancilla(state_phi);
    return -trace_product(ctx.target_matrix(), rho_theta.matrix()) +
           trace_product(rho_theta.matrix(), rho_phi.matrix());
}

/**
 * Parameter-shift derivative of C along params[index].
 *
 * `prepare` maps a parameter vector to a state. The caller guarantees that
 * params[index] multiplies a generator with eigenvalues e0, e1 and passes
 * r = (e1 - e0)/2; this function cannot inspect the generator itself.
 */
template <typename Prepare>
double shift_gradient(Prepare &&prepare, std::size_t index, std::span<const double> params,
                      const ObjectiveContext &ctx, double r = 1.0) {
    if (index >= params.size()) throw ConfigError("shift_gradient: index out of range");
    if (!(r > 0.0)) throw ConfigError("shift_gradient: r must be positive");
    std::vector<double> shifted(params.begin(), params.end());
    const StateVector centre = prepare(std::span<const double>(shifted));
    const double s = std::numbers::pi / (4.0 * r);
    shifted[index] = params[index] + s;
    const double plus = auxiliary_objective(prepare(std::span<const double>(shifted)), centre, ctx);
    shifted[index] = params[index] - s;
    const double minus = auxiliary_objective(prepare(std::span<const double>(shifted)), centre, ctx);
    return r * (plus - minus);
}

/// d/dth C(Tr_A e^{i th P}|psi><psi|e^{-i th P}) at th = 0, by the shift rule.
inline double candidate_gradient(const StateVector &state, const PauliString &p, const ObjectiveContext &ctx) {
    ctx.check_shape(state);
    const double s = std::numbers::pi / 4.0;
    return auxiliary_objective(pauli_rotation(state, p, s), state, ctx) -
           auxiliary_objective(pauli_rotation(state, p, -s), state, ctx);
}

/// Gradient of C along e^{i a H} at a = 0 for H a sum of mutually commuting Pauli strings:
/// the coefficient-weighted sum of the per-string shift gradients.
inline double sum_generator_gradient(const StateVector &state, const HermitianOperator &h,
                                     const ObjectiveContext &ctx) {
    if (h.n_qubits() != state.n_qubits()) throw ConfigError("sum_generator_gradient: dimension mismatch");
    if (!h.terms_commute()) throw ConfigError("sum_generator_gradient: terms do not mutually commute");
    double g = 0.0;
    for (const auto &t : h.terms()) g += t.coefficient * candidate_gradient(state, t.pauli, ctx);
    return g;
}

/**
 * Reuses one state for many appended-generator gradients.
 *
 * C depends on the state only through rho, and dC = Tr((rho - T) d rho), so
 * the shift difference for an appended generator G collapses to
 *   i <psi|[(rho - T) (x) 1, G]|psi> = -2 Im <lambda|G|psi>,
 * with lambda = ((rho - T) (x) 1)|psi>. This is the same number the two
 * shifted Ctilde evaluations produce, at O(dim) per candidate.
 */
class GradientProbe {
  public:
    GradientProbe(const StateVector &state, const ObjectiveContext &ctx) : psi_(state.amplitudes()) {
        ctx.check_shape(state);
        const auto m = state.as_matrix();
        const CMatrix rho = m * m.adjoint();
        const CMatrix residual = rho - ctx.target_matrix();
        objective_ = trace_product(0.5 * rho - ctx.target_matrix(), rho);
        lambda_.resize(psi_.size());
        Eigen::Map<CMatrix>(lambda_.data(), m.rows(), m.cols()).noalias() = residual * m;
    }

    [[nodiscard]] double objective() const { return objective_; }

    [[nodiscard]] double gradient(const PauliString &p) const {
        return -2.0 * detail::pauli_matrix_element(p, lambda_.data(), psi_.data(), dim()).imag();
    }

    [[nodiscard]] double gradient(const HermitianOperator &h) const {
        double g = 0.0;
        for (const auto &t : h.terms()) g += t.coefficient * gradient(t.pauli);
        return g;
    }

  private:
    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(psi_.size()); }

    CVector psi_;
    CVector lambda_;
    double objective_ = 0.0;
};

} // namespace gibbs
