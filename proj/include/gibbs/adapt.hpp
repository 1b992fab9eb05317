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
 * Adaptive ansatz growth: gradient-selected Pauli generators on a
 * partially entangled reference (vqe flavor), gradient-selected mixers in
 * a cost/mixer layered ansatz (qaoa flavor), and the fixed-entangler
 * layered baseline.
 */
#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ansatz.hpp"
#include "bfgs.hpp"
#include "errors.hpp"
#include "objective.hpp"
#include "pool.hpp"

namespace gibbs {

inline constexpr std::size_t kVqeIterationCap = 200;
inline constexpr std::size_t kLayerCap = 6;
inline constexpr double kTieTolerance = 1e-12;
inline constexpr double kStallImprovement = 1e-12;
inline constexpr std::size_t kStallPatience = 3;
/// Layered runs stop early only when no candidate moves the objective at all.
inline constexpr double kZeroPoolGradient = 1e-10;

struct AdaptConfig {
    double epsilon = 1e-3;                      // vqe: stop when ||pool gradients||_2 < epsilon
    std::size_t max_iterations = kVqeIterationCap;
    std::size_t layer_budget = 4;               // layered flavors
    BfgsOptions optimizer{};
    std::vector<PoolOperator> pool;             // empty: the flavor's default pool
};

enum class Termination { threshold, max_iters, stalled };

inline const char *to_string(Termination t) {
    switch (t) {
    case Termination::threshold: return "threshold";
    case Termination::max_iters: return "max_iters";
    case Termination::stalled: return "stalled";
    }
    return "?";
}

struct IterationRecord {
    std::size_t iteration = 0; // 1-based: ansatz size after this step
    std::string generator;
    double selection_gradient = 0.0;
    double pool_gradient_norm = 0.0;
    double objective = 0.0;
    double fidelity = 0.0;
    std::size_t cnot_count = 0;
    double optimizer_gradient_norm = 0.0;
    std::size_t optimizer_iterations = 0;
    BfgsStatus optimizer_status = BfgsStatus::converged;
    double wall_ms = 0.0;
};

struct AdaptTrace {
    std::uint64_t seed = 0;
    double gamma0 = 0.0;
    double initial_objective = 0.0;
    double initial_fidelity = 0.0;
    std::size_t initial_cnot_count = 0;
    double final_pool_gradient_norm = 0.0;
    std::vector<IterationRecord> iterations;
    Termination termination = Termination::max_iters;

    [[nodiscard]] double final_objective() const {
        return iterations.empty() ? initial_objective : iterations.back().objective;
    }
    [[nodiscard]] double final_fidelity() const {
        return iterations.empty() ? initial_fidelity : iterations.back().fidelity;
    }
    [[nodiscard]] std::size_t final_cnot_count() const {
        return iterations.empty() ? initial_cnot_count : iterations.back().cnot_count;
    }
};

struct AdaptRun {
    Ansatz ansatz;
    AdaptTrace trace;
};

struct FixedAnsatzResult {
    std::vector<double> params;
    double objective = 0.0;
    double gradient_inf_norm = 0.0;
    std::size_t iterations = 0;
    BfgsStatus status = BfgsStatus::converged;
};

/// BFGS over all ansatz parameters from `init`, gradients from the circuit sweep.
inline FixedAnsatzResult optimize_fixed_ansatz(const Ansatz &ansatz, const ObjectiveContext &ctx,
                                               std::vector<double> init, const BfgsOptions &opts = {}) {
    if (init.size() != ansatz.n_params()) throw ConfigError("optimize_fixed_ansatz: init length mismatch");
    const Circuit circuit = ansatz.circuit();
    auto f = [&](std::span<const double> x, std::span<double> g) { return circuit.value_and_gradient(x, g, ctx); };
    const BfgsResult r = minimize_bfgs(f, std::move(init), opts);
    return {r.x, r.value, r.gradient_inf_norm, r.iterations, r.status};
}

namespace detail {

using Clock = std::chrono::steady_clock;

inline double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Selection {
    std::size_t index = 0;
    double gradient = 0.0;
    double norm = 0.0;
};

/// Gradient of every pool element appended to `state`; argmax |g| with ties to the earlier element.
inline Selection select_from_pool(const StateVector &state, const std::vector<PoolOperator> &pool,
                                  const ObjectiveContext &ctx) {
    const GradientProbe probe(state, ctx);
    Selection sel;
    double sq = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        const double g = pool[i].is_pauli() ? probe.gradient(pool[i].pauli) : probe.gradient(*pool[i].entangler);
        sq += g * g;
        if (first || std::abs(g) > std::abs(sel.gradient) + kTieTolerance) {
            sel.index = i;
            sel.gradient = g;
            first = false;
        }
    }
    sel.norm = std::sqrt(sq);
    return sel;
}

inline void record_step(AdaptTrace &trace, const GibbsProblem &problem, Ansatz &ansatz,
                        const FixedAnsatzResult &opt, const PoolOperator &chosen, const Selection &sel,
                        Clock::time_point t0) {
    ansatz.set_params(opt.params);
    IterationRecord rec;
    rec.iteration = ansatz.layers.size();
    rec.generator = chosen.label();
    rec.selection_gradient = sel.gradient;
    rec.pool_gradient_norm = sel.norm;
    rec.objective = opt.objective;
    rec.fidelity = problem.fidelity_of(ansatz.state());
    rec.cnot_count = cnot_count(ansatz);
    rec.optimizer_gradient_norm = opt.gradient_inf_norm;
    rec.optimizer_iterations = opt.iterations;
    rec.optimizer_status = opt.status;
    rec.wall_ms = ms_since(t0);
    trace.iterations.push_back(std::move(rec));
}

inline void start_trace(AdaptTrace &trace, const GibbsProblem &problem, const Ansatz &ansatz,
                        const ObjectiveContext &ctx) {
    const StateVector s = ansatz.state();
    trace.initial_objective = objective(s, ctx);
    trace.initial_fidelity = problem.fidelity_of(s);
    trace.initial_cnot_count = cnot_count(ansatz);
}

} // namespace detail

/**
 * Grows a vqe-flavor ansatz from the randomized reference selected by `seed`.
 * Each iteration scans the pool at the current optimum, appends the
 * largest-|gradient| generator with parameter 0, and re-optimizes every
 * parameter. Stops when the pool-gradient norm drops below epsilon, at the
 * iteration cap, or after repeated iterations without objective progress.
 */
inline AdaptRun adapt_vqe_run(const AdaptConfig &config, const GibbsProblem &problem, std::uint64_t seed) {
    if (!(config.epsilon > 0.0)) throw ConfigError("adapt_vqe_run: epsilon must be > 0");
    if (config.max_iterations > kVqeIterationCap) throw ConfigError("adapt_vqe_run: iteration cap is 200");
    const auto pool = config.pool.empty() ? build_vqe_pool(problem.n_data + problem.n_ancilla) : config.pool;
    const ObjectiveContext ctx = problem.context();

    AdaptRun run;
    run.ansatz = make_vqe_ansatz(problem, reference_angles(problem.n_data + problem.n_ancilla, seed));
    run.trace.seed = seed;
    detail::start_trace(run.trace, problem, run.ansatz, ctx);

    double previous = run.trace.initial_objective;
    std::size_t stalled = 0;
    for (std::size_t it = 0;; ++it) {
        const auto t0 = detail::Clock::now();
        const auto sel = detail::select_from_pool(run.ansatz.state(), pool, ctx);
        run.trace.final_pool_gradient_norm = sel.norm;
        if (sel.norm < config.epsilon) {
            run.trace.termination = Termination::threshold;
            break;
        }
        if (it >= config.max_iterations) {
            run.trace.termination = Termination::max_iters;
            break;
        }
        run.ansatz.layers.push_back({pool[sel.index], 0.0, 0.0});
        const auto opt = optimize_fixed_ansatz(run.ansatz, ctx, run.ansatz.params(), config.optimizer);
        detail::record_step(run.trace, problem, run.ansatz, opt, pool[sel.index], sel, t0);

        stalled = previous - opt.objective < kStallImprovement ? stalled + 1 : 0;
        previous = opt.objective;
        if (stalled >= kStallPatience) {
            run.trace.termination = Termination::stalled;
            break;
        }
    }
    return run;
}

namespace detail {

inline AdaptRun grow_layered(const AdaptConfig &config, const GibbsProblem &problem, Flavor flavor,
                             const std::vector<PoolOperator> &pool, double gamma0, std::uint64_t seed,
                             std::size_t layers, bool stop_on_zero_gradient) {
    if (gamma0 < 0.0 || gamma0 > 0.5 * std::numbers::pi) throw ConfigError("gamma0 must lie in [0, pi/2]");
    if (layers > kLayerCap) throw ConfigError("layer budget exceeds the cap of 6");
    const ObjectiveContext ctx = problem.context();

    AdaptRun run;
    run.ansatz = make_layered_ansatz(problem, flavor);
    run.trace.seed = seed;
    run.trace.gamma0 = gamma0;
    detail::start_trace(run.trace, problem, run.ansatz, ctx);
    run.trace.termination = Termination::max_iters;

    for (std::size_t layer = 0; layer < layers; ++layer) {
        const auto t0 = Clock::now();
        StateVector s = run.ansatz.state();
        // the candidate layer is evaluated at gamma = gamma0, alpha = 0
        problem.doubled->apply_exponential_raw(0.5 * gamma0, s.mutable_amplitudes().data());
        const auto sel = select_from_pool(s, pool, ctx);
        run.trace.final_pool_gradient_norm = sel.norm;
        if (stop_on_zero_gradient && sel.norm < kZeroPoolGradient) {
            run.trace.termination = Termination::threshold;
            break;
        }
        run.ansatz.layers.push_back({pool[sel.index], 0.0, gamma0});
        const auto opt = optimize_fixed_ansatz(run.ansatz, ctx, run.ansatz.params(), config.optimizer);
        record_step(run.trace, problem, run.ansatz, opt, pool[sel.index], sel, t0);
    }
    return run;
}

} // namespace detail

/// Layered growth with mixers chosen from the pool (default: entangler + data-ancilla Pauli pairs).
inline AdaptRun adapt_qaoa_run(const AdaptConfig &config, const GibbsProblem &problem, double gamma0,
                               std::uint64_t seed) {
    const auto pool = config.pool.empty() ? build_qaoa_pool(problem.n_data) : config.pool;
    return detail::grow_layered(config, problem, Flavor::qaoa, pool, gamma0, seed, config.layer_budget, true);
}

/// Layered ansatz with the entangler as every mixer, grown and re-optimized one layer at a time.
inline AdaptRun baseline_qaoa_run(const AdaptConfig &config, const GibbsProblem &problem, std::size_t layers,
                                  double gamma0, std::uint64_t seed) {
    const std::vector<PoolOperator> pool{PoolOperator::sum_entangler(problem.n_data)};
    return detail::grow_layered(config, problem, Flavor::baseline, pool, gamma0, seed, layers, false);
}

struct Postselected {
    AdaptRun best;
    std::size_t best_index = 0;
    std::vector<std::optional<AdaptRun>> restarts; // nullopt for restarts that failed
    std::vector<std::string> failures;
};

/**
 * Runs `run(i)` for i in [0, n_restarts) and keeps the lowest final
 * objective; ties go to fewer CNOTs, then the earlier restart.
 */
inline Postselected restart_postselect(const std::function<AdaptRun(std::size_t)> &run, std::size_t n_restarts) {
    if (n_restarts < 1) throw ConfigError("restart_postselect: need at least one restart");
    Postselected out;
    out.restarts.resize(n_restarts);
    out.failures.resize(n_restarts);
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < n_restarts; ++i) {
        try {
            out.restarts[i] = run(i);
        } catch (const NumericalError &e) {
            out.failures[i] = e.what();
            continue;
        }
        if (!best) {
            best = i;
            continue;
        }
        const auto &cand = out.restarts[i]->trace;
        const auto &cur = out.restarts[*best]->trace;
        const double diff = cand.final_objective() - cur.final_objective();
        if (diff < -kTieTolerance ||
            (std::abs(diff) <= kTieTolerance && cand.final_cnot_count() < cur.final_cnot_count())) {
            best = i;
        }
    }
    if (!best) throw NumericalError("restart_postselect: every restart failed");
    out.best_index = *best;
    out.best = *out.restarts[*best];
    return out;
}

} // namespace gibbs
