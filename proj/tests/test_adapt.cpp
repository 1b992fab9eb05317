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

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "gibbs/adapt.hpp"
#include "oracles.hpp"

using namespace gibbs;

namespace {

HermitianOperator minus_z() { return {1, {{-1.0, PauliString::parse("Z0")}}}; }

AdaptRun dummy_run(double objective, std::size_t cnots) {
    AdaptRun r;
    IterationRecord rec;
    rec.objective = objective;
    rec.cnot_count = cnots;
    r.trace.iterations.push_back(rec);
    return r;
}

/// Dense oracle for the vqe reference: Y rotations, then CNOT(ancilla i -> data j) for every pair.
CVector dense_vqe_reference(std::size_t nd, std::size_t na, const std::vector<double> &angles) {
    const std::size_t n = nd + na;
    CMatrix u = CMatrix::Identity(1, 1);
    for (std::size_t q = n; q-- > 0;) {
        u = oracle::kron(u, oracle::expm_hermitian(oracle::single(Pauli::Y), -angles[q]));
    }
    CVector psi = u.col(0);
    const std::size_t dim = std::size_t{1} << n;
    for (std::size_t a = 0; a < na; ++a) {
        for (std::size_t d = 0; d < nd; ++d) {
            CMatrix cx = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
            for (std::size_t b = 0; b < dim; ++b) {
                const std::size_t out = (b >> (nd + a)) & 1 ? b ^ (std::size_t{1} << d) : b;
                cx(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(b)) = 1.0;
            }
            psi = cx * psi;
        }
    }
    return psi;
}

} // namespace

TEST(Pools, VqePoolSizeOrderAndContent) {
    EXPECT_EQ(build_vqe_pool(2).size(), 15u);
    const auto pool = build_vqe_pool(8);
    EXPECT_EQ(pool.size(), 276u);
    std::set<std::string> seen;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        ASSERT_TRUE(pool[i].is_pauli());
        EXPECT_GE(pool[i].pauli.weight(), 1u);
        EXPECT_LE(pool[i].pauli.weight(), 2u);
        EXPECT_EQ(pool[i].cnot_cost, pool[i].pauli.weight() == 2 ? 2u : 0u);
        EXPECT_TRUE(seen.insert(pool[i].label()).second);
        if (i > 0) EXPECT_LT(pool[i - 1].pauli, pool[i].pauli);
    }
    EXPECT_THROW(build_vqe_pool(1), ConfigError);
}

TEST(Pools, QaoaPoolSizeAndContent) {
    EXPECT_EQ(build_qaoa_pool(1).size(), 10u);
    const auto pool = build_qaoa_pool(6);
    EXPECT_EQ(pool.size(), 325u);
    EXPECT_FALSE(pool[0].is_pauli());
    EXPECT_TRUE(pool[0].entangler->terms_commute());
    EXPECT_EQ(pool[0].cnot_cost, 18u);
    for (std::size_t i = 1; i < pool.size(); ++i) {
        ASSERT_TRUE(pool[i].is_pauli());
        const auto &s = pool[i].pauli.support();
        ASSERT_EQ(s.size(), 2u);
        EXPECT_LT(s[0], 6u);
        EXPECT_GE(s[1], 6u);
    }
}

TEST(VqeReference, ZeroAnglesGiveAllZeroState) {
    const std::vector<double> zeros(4, 0.0);
    const auto s = vqe_reference_state(2, 2, zeros);
    EXPECT_NEAR(std::abs(s.amplitudes()[0]), 1.0, 1e-15);
    EXPECT_NEAR(purity(partial_trace_ancilla(s)), 1.0, 1e-14);
}

TEST(VqeReference, SingleQubitRotation) {
    const double a = 0.61;
    const auto s = vqe_reference_state(1, 1, std::vector<double>{a, 0.0});
    EXPECT_NEAR(s.amplitudes()[0].real(), std::cos(a), 1e-15);
    EXPECT_NEAR(s.amplitudes()[1].real(), std::sin(a), 1e-15);
    EXPECT_NEAR(std::abs(s.amplitudes()[2]) + std::abs(s.amplitudes()[3]), 0.0, 1e-15);
}

TEST(VqeReference, MatchesDenseCircuitAndIsPartiallyEntangled) {
    for (auto [nd, na] : {std::pair<std::size_t, std::size_t>{2, 2}, {3, 1}, {2, 3}}) {
        std::uint64_t seed = 7;
        auto angles = reference_angles(nd + na, seed);
        const auto s = vqe_reference_state(nd, na, seed);
        EXPECT_LT((s.amplitudes() - dense_vqe_reference(nd, na, angles)).norm(), 1e-13);
        EXPECT_EQ(s.amplitudes(), vqe_reference_state(nd, na, seed).amplitudes());
    }
    // generic seeds at 2 + 2: purity strictly between the extremes
    std::size_t accepted = 0;
    for (std::uint64_t seed = 0; accepted < 20; ++seed) {
        const double p = purity(partial_trace_ancilla(vqe_reference_state(2, 2, seed)));
        if (p > 1 - 1e-6 || p < 0.25 + 1e-6) continue; // degenerate draw
        EXPECT_GT(p, 0.25);
        EXPECT_LT(p, 1.0);
        ++accepted;
    }
}

TEST(QaoaReference, SingletProductProperties) {
    for (std::size_t n : {1u, 2u, 3u}) {
        const auto s = qaoa_reference_state(n);
        EXPECT_NEAR(expectation(s, entangling_hamiltonian(n)), -3.0 * static_cast<double>(n), 1e-10);
        const auto rho = partial_trace_ancilla(s);
        const auto d = static_cast<Eigen::Index>(std::size_t{1} << n);
        EXPECT_LT((rho.matrix() - CMatrix::Identity(d, d) / static_cast<double>(d)).norm(), 1e-14);
        EXPECT_NEAR(fidelity(rho, gibbs_state(n >= 2 ? ising_hamiltonian(n) : minus_z(), 0.0).state()), 1.0, 1e-12);
    }
}

TEST(CnotCount, ConventionExamples) {
    const auto p = make_problem(ising_hamiltonian(4), 4, 1.0);
    Ansatz a = make_vqe_ansatz(p, std::vector<double>(8, 0.0));
    EXPECT_EQ(cnot_count(a), 16u);
    const auto pool = build_vqe_pool(8);
    std::size_t two = 0, one = 0;
    for (const auto &op : pool) {
        if (op.pauli.weight() == 2 && two < 10) {
            a.layers.push_back({op, 0.0, 0.0});
            ++two;
        } else if (op.pauli.weight() == 1 && one < 3) {
            a.layers.push_back({op, 0.0, 0.0});
            ++one;
        }
    }
    EXPECT_EQ(cnot_count(a), 36u);

    const auto p6 = make_problem(ising_hamiltonian(6), 6, 1.0);
    Ansatz b = make_layered_ansatz(p6, Flavor::baseline);
    EXPECT_EQ(cnot_count(b), 6u);
    for (int k = 0; k < 3; ++k) b.layers.push_back({PoolOperator::sum_entangler(6), 0.0, 0.0});
    EXPECT_EQ(cnot_count(b), 96u);
}

TEST(Bfgs, MinimizesRosenbrock) {
    auto f = [](std::span<const double> x, std::span<double> g) {
        const double a = 1 - x[0], b = x[1] - x[0] * x[0];
        g[0] = -2 * a - 400 * x[0] * b;
        g[1] = 200 * b;
        return a * a + 100 * b * b;
    };
    const auto r = minimize_bfgs(f, {-1.2, 1.0});
    EXPECT_EQ(r.status, BfgsStatus::converged);
    EXPECT_NEAR(r.x[0], 1.0, 1e-7);
    EXPECT_NEAR(r.x[1], 1.0, 1e-7);
    EXPECT_LE(r.gradient_inf_norm, 1e-8);
}

TEST(Bfgs, NonFiniteValueThrows) {
    auto f = [](std::span<const double> x, std::span<double> g) {
        g[0] = 1.0;
        return x[0] < -0.5 ? std::nan("") : x[0];
    };
    EXPECT_THROW(minimize_bfgs(f, {0.0}), NumericalError);
}

TEST(OptimizeFixedAnsatz, ZeroLayersKeepReferenceObjective) {
    const auto p = make_problem(ising_hamiltonian(2), 2, 1.0);
    const Ansatz a = make_vqe_ansatz(p, reference_angles(4, 3));
    const auto r = optimize_fixed_ansatz(a, p.context(), {});
    EXPECT_NEAR(r.objective, objective(a.state(), p.context()), 1e-15);
    EXPECT_THROW(optimize_fixed_ansatz(a, p.context(), {0.0}), ConfigError);
}

TEST(OptimizeFixedAnsatz, SingleLayerMatchesGridScan) {
    for (double beta : {0.0, 1.0}) {
        const auto p = make_problem(minus_z(), 1, beta);
        Ansatz a;
        a.flavor = Flavor::vqe;
        a.n_data = 1;
        a.n_ancilla = 1;
        a.reference.kind = Reference::Kind::singlet;
        a.layers.push_back({PoolOperator::from_pauli(PauliString::parse("Z0 X1")), 0.0, 0.0});
        const auto ctx = p.context();
        const auto r = optimize_fixed_ansatz(a, ctx, {0.3});
        const Circuit c = a.circuit();
        double best = 1e300;
        for (int k = 0; k < 31416; ++k) {
            const std::vector<double> th{1e-4 * k};
            best = std::min(best, c.value(th, ctx));
        }
        EXPECT_NEAR(r.objective, best, 1e-8);
        EXPECT_LE(r.objective, c.value(std::vector<double>{0.3}, ctx) + 1e-12);
        const auto again = optimize_fixed_ansatz(a, ctx, r.params);
        EXPECT_NEAR(again.objective, r.objective, 1e-10);
    }
}

TEST(AdaptVqe, IsingTwoPlusTwoPostselectedReachesHighFidelity) {
    const auto p = make_problem(ising_hamiltonian(2), 2, 1.0);
    const AdaptConfig cfg;
    const auto ps = restart_postselect([&](std::size_t s) { return adapt_vqe_run(cfg, p, s); }, 5);
    EXPECT_GE(ps.best.trace.final_fidelity(), 0.99);
    for (const auto &r : ps.restarts) {
        ASSERT_TRUE(r.has_value());
        EXPECT_EQ(r->trace.termination, Termination::threshold);
        EXPECT_LT(r->trace.final_pool_gradient_norm, cfg.epsilon);
    }
}

TEST(AdaptVqe, TraceInvariants) {
    const auto p = make_problem(xy_hamiltonian(2), 2, 1.0 / 1.5);
    const auto ctx = p.context();
    const auto pool = build_vqe_pool(4);
    const auto run = adapt_vqe_run(AdaptConfig{}, p, 5);
    ASSERT_FALSE(run.trace.iterations.empty());

    Ansatz replay = make_vqe_ansatz(p, run.ansatz.reference.angles);
    double prev = run.trace.initial_objective;
    for (std::size_t k = 0; k < run.trace.iterations.size(); ++k) {
        const auto &rec = run.trace.iterations[k];
        EXPECT_LE(rec.objective, prev + 1e-9);
        prev = rec.objective;
        EXPECT_EQ(rec.iteration, k + 1);
        EXPECT_EQ(rec.generator, run.ansatz.layers[k].generator.label());
        EXPECT_EQ(rec.cnot_count, cnot_count(replay) + run.ansatz.layers[k].generator.cnot_cost);
        EXPECT_LE(rec.fidelity, 1.0 + 1e-12);
        replay.layers.push_back({run.ansatz.layers[k].generator, 0.0, 0.0});
    }

    // post-hoc selection check and zero-initialization consistency on the first step
    const StateVector s0 = make_vqe_ansatz(p, run.ansatz.reference.angles).state();
    double best = 0.0;
    for (const auto &op : pool) best = std::max(best, std::abs(candidate_gradient(s0, op.pauli, ctx)));
    EXPECT_NEAR(std::abs(run.trace.iterations[0].selection_gradient), best, 1e-10);
    Ansatz one = make_vqe_ansatz(p, run.ansatz.reference.angles);
    one.layers.push_back({run.ansatz.layers[0].generator, 0.0, 0.0});
    EXPECT_EQ(one.state().amplitudes(), s0.amplitudes());
}

TEST(AdaptVqe, DeterministicForFixedSeed) {
    const auto p = make_problem(ising_hamiltonian(2), 1, 1.0);
    const auto a = adapt_vqe_run(AdaptConfig{}, p, 42);
    const auto b = adapt_vqe_run(AdaptConfig{}, p, 42);
    ASSERT_EQ(a.trace.iterations.size(), b.trace.iterations.size());
    EXPECT_EQ(a.ansatz.params(), b.ansatz.params());
    for (std::size_t k = 0; k < a.trace.iterations.size(); ++k) {
        EXPECT_EQ(a.trace.iterations[k].generator, b.trace.iterations[k].generator);
        EXPECT_EQ(a.trace.iterations[k].objective, b.trace.iterations[k].objective);
    }
}

TEST(AdaptVqe, MatchedStartStopsImmediately) {
    auto p = make_problem(minus_z(), 1, 1.0);
    const auto angles = reference_angles(2, 9);
    const auto ref = vqe_reference_state(1, 1, angles);
    auto t = std::make_shared<GibbsTarget>();
    t->matrix = partial_trace_ancilla(ref).matrix();
    p.target = t;
    const auto run = adapt_vqe_run(AdaptConfig{}, p, 9);
    EXPECT_TRUE(run.trace.iterations.empty());
    EXPECT_EQ(run.trace.termination, Termination::threshold);
}

TEST(AdaptVqe, PoolCompletenessOnOnePlusOne) {
    AdaptConfig cfg;
    cfg.epsilon = 1e-6;
    for (double binv : {0.5, 1.0, 2.0}) {
        const auto p = make_problem(minus_z(), 1, 1.0 / binv);
        const auto run = adapt_vqe_run(cfg, p, 1);
        EXPECT_GE(run.trace.final_fidelity(), 1 - 1e-6) << "beta_inv " << binv;
        EXPECT_LE(run.trace.iterations.size(), 30u);
    }
}

TEST(AdaptVqe, RejectsBadConfig) {
    const auto p = make_problem(ising_hamiltonian(2), 2, 1.0);
    AdaptConfig cfg;
    cfg.epsilon = 0.0;
    EXPECT_THROW(adapt_vqe_run(cfg, p, 0), ConfigError);
    cfg.epsilon = 1e-3;
    cfg.max_iterations = 201;
    EXPECT_THROW(adapt_vqe_run(cfg, p, 0), ConfigError);
}

TEST(AdaptQaoa, InfiniteTemperatureNeedsNoLayers) {
    const auto p = make_problem(ising_hamiltonian(3), 3, 0.0);
    const auto run = adapt_qaoa_run(AdaptConfig{}, p, 0.7, 0);
    EXPECT_TRUE(run.ansatz.layers.empty());
    EXPECT_NEAR(run.trace.final_fidelity(), 1.0, 1e-12);
    EXPECT_EQ(run.trace.termination, Termination::threshold);
}

TEST(AdaptQaoa, RejectsBadGammaAndBudget) {
    const auto p = make_problem(ising_hamiltonian(2), 2, 1.0);
    EXPECT_THROW(adapt_qaoa_run(AdaptConfig{}, p, -0.1, 0), ConfigError);
    EXPECT_THROW(adapt_qaoa_run(AdaptConfig{}, p, 1.6, 0), ConfigError);
    AdaptConfig cfg;
    cfg.layer_budget = 7;
    EXPECT_THROW(adapt_qaoa_run(cfg, p, 0.5, 0), ConfigError);
    EXPECT_THROW(make_layered_ansatz(make_problem(ising_hamiltonian(2), 1, 1.0), Flavor::qaoa), ConfigError);
}

TEST(AdaptQaoa, ReducesToBaselineWhenEntanglerAlwaysWins) {
    const auto p = make_problem(ising_hamiltonian(4), 4, 1.0);
    AdaptConfig cfg;
    cfg.layer_budget = 2;
    const double g0 = draw_gamma0(3);
    const auto q = adapt_qaoa_run(cfg, p, g0, 3);
    const auto b = baseline_qaoa_run(cfg, p, 2, g0, 3);
    bool all_entangler = true;
    for (const auto &l : q.ansatz.layers) all_entangler = all_entangler && !l.generator.is_pauli();
    ASSERT_TRUE(all_entangler) << "selection picked a Pauli mixer";
    ASSERT_EQ(q.ansatz.layers.size(), b.ansatz.layers.size());
    EXPECT_EQ(q.ansatz.params(), b.ansatz.params());
}

TEST(AdaptQaoa, ObjectiveNonincreasingAcrossLayers) {
    const auto p = make_problem(xy_hamiltonian(3), 3, 1.0);
    const auto run = adapt_qaoa_run(AdaptConfig{}, p, draw_gamma0(11), 11);
    double prev = run.trace.initial_objective;
    for (const auto &rec : run.trace.iterations) {
        EXPECT_LE(rec.objective, prev + 1e-9);
        prev = rec.objective;
    }
}

TEST(Baseline, ZeroLayersIsMaximallyMixed) {
    const auto p = make_problem(ising_hamiltonian(3), 3, 0.0);
    const auto run = baseline_qaoa_run(AdaptConfig{}, p, 0, 0.4, 0);
    EXPECT_NEAR(run.trace.final_fidelity(), 1.0, 1e-12);
}

TEST(Baseline, FidelityNondecreasingInLayers) {
    const auto p = make_problem(ising_hamiltonian(4), 4, 2.0);
    const double g0 = draw_gamma0(5);
    const auto run = baseline_qaoa_run(AdaptConfig{}, p, 3, g0, 5);
    ASSERT_EQ(run.trace.iterations.size(), 3u);
    const auto one = baseline_qaoa_run(AdaptConfig{}, p, 1, g0, 5);
    const auto two = baseline_qaoa_run(AdaptConfig{}, p, 2, g0, 5);
    EXPECT_GE(two.trace.final_fidelity(), one.trace.final_fidelity() - 1e-9);
    for (const auto &l : run.ansatz.layers) EXPECT_FALSE(l.generator.is_pauli());
}

TEST(RestartPostselect, PicksLowestObjective) {
    const std::vector<double> obj{-0.3, -0.5, -0.4};
    const auto ps = restart_postselect([&](std::size_t i) { return dummy_run(obj[i], 10); }, 3);
    EXPECT_EQ(ps.best_index, 1u);
    EXPECT_DOUBLE_EQ(ps.best.trace.final_objective(), -0.5);
    EXPECT_EQ(ps.restarts.size(), 3u);
}

TEST(RestartPostselect, TiesBreakOnCnotsThenOrder) {
    const std::vector<std::size_t> cn{20, 12, 12};
    const auto ps = restart_postselect([&](std::size_t i) { return dummy_run(-0.5, cn[i]); }, 3);
    EXPECT_EQ(ps.best_index, 1u);
    const auto single = restart_postselect([](std::size_t) { return dummy_run(-0.1, 1); }, 1);
    EXPECT_EQ(single.best_index, 0u);
}

TEST(RestartPostselect, FailuresAreRecordedAndTotalFailureThrows) {
    const auto ps = restart_postselect(
        [](std::size_t i) {
            if (i == 0) throw NumericalError("boom");
            return dummy_run(-0.2, 1);
        },
        2);
    EXPECT_EQ(ps.best_index, 1u);
    EXPECT_FALSE(ps.restarts[0].has_value());
    EXPECT_EQ(ps.failures[0], "boom");
    EXPECT_THROW(restart_postselect([](std::size_t) -> AdaptRun { throw NumericalError("x"); }, 3), NumericalError);
    EXPECT_THROW(restart_postselect([](std::size_t) { return dummy_run(0, 0); }, 0), ConfigError);
}
