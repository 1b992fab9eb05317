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
 * Gradient check on random small ansaetze (N_D = N_A = 2): the literal
 * shift-rule gradient against central finite differences, and the
 * optimizer's sweep gradient against the shift rule.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "../adapt.hpp"
#include "../errors.hpp"
#include "config.hpp"

namespace gibbs::harness {

inline constexpr double kGradcheckTolerance = 1e-6;
inline constexpr double kFiniteDifferenceStep = 1e-5;

struct GradcheckTrial {
    std::size_t trial = 0;
    std::string flavor;
    std::string model;
    double beta_inv = 0.0;
    std::size_t n_params = 0;
    std::size_t worst_index = 0;   // parameter with the largest |shift - fd|
    double shift = 0.0;
    double finite_difference = 0.0;
    double deviation = 0.0;
    double sweep_deviation = 0.0;  // max |sweep - shift| over parameters
};

struct GradcheckReport {
    std::uint64_t seed = 0;
    std::vector<GradcheckTrial> trials;
    double max_deviation = 0.0;
    double max_sweep_deviation = 0.0;
    std::size_t worst_trial = 0;

    [[nodiscard]] bool pass() const {
        return max_deviation < kGradcheckTolerance && max_sweep_deviation < kGradcheckTolerance;
    }
};

/**
 * Even trials use the vqe flavor (1-6 random generators from the full
 * pool), odd trials the qaoa flavor (1-3 random layers). Parameters are
 * uniform in [-pi, pi), or all zero when `zero_params` is set.
 */
inline GradcheckReport gradcheck(std::uint64_t seed, std::size_t trials, bool zero_params = false) {
    if (trials < 1) throw ConfigError("gradcheck: trials must be >= 1");
    constexpr std::size_t nd = 2;
    std::mt19937_64 rng(seed);
    auto pick = [&](std::size_t n) { return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)); };
    const auto vqe_pool = build_vqe_pool(2 * nd);
    const auto qaoa_pool = build_qaoa_pool(nd);

    GradcheckReport rep;
    rep.seed = seed;
    for (std::size_t t = 0; t < trials; ++t) {
        const Model model = pick(2) == 0 ? Model::ising : Model::xy;
        const double beta_inv = 0.2 + 2.8 * uniform01(rng);
        const GibbsProblem problem = make_problem(model_hamiltonian(model, nd), nd, 1.0 / beta_inv);
        const bool layered = t % 2 == 1;

        Ansatz a;
        if (layered) {
            a = make_layered_ansatz(problem, Flavor::qaoa);
            const std::size_t n = 1 + pick(3);
            for (std::size_t k = 0; k < n; ++k) a.layers.push_back({qaoa_pool[pick(qaoa_pool.size())], 0.0, 0.0});
        } else {
            a = make_vqe_ansatz(problem, reference_angles(2 * nd, rng()));
            const std::size_t n = 1 + pick(6);
            for (std::size_t k = 0; k < n; ++k) a.layers.push_back({vqe_pool[pick(vqe_pool.size())], 0.0, 0.0});
        }
        std::vector<double> params(a.n_params(), 0.0);
        if (!zero_params) {
            for (auto &p : params) p = std::numbers::pi * (2.0 * uniform01(rng) - 1.0);
        }

        const Circuit c = a.circuit();
        const ObjectiveContext ctx = problem.context();
        const auto shift = c.shift_rule_gradient(params, ctx);
        std::vector<double> sweep(params.size());
        c.value_and_gradient(params, sweep, ctx);

        GradcheckTrial tr;
        tr.trial = t;
        tr.flavor = layered ? "qaoa" : "vqe";
        tr.model = to_string(model);
        tr.beta_inv = beta_inv;
        tr.n_params = params.size();
        for (std::size_t k = 0; k < params.size(); ++k) {
            auto x = params;
            x[k] = params[k] + kFiniteDifferenceStep;
            const double up = c.value(x, ctx);
            x[k] = params[k] - kFiniteDifferenceStep;
            const double down = c.value(x, ctx);
            const double fd = (up - down) / (2.0 * kFiniteDifferenceStep);
            const double dev = std::abs(shift[k] - fd);
            if (k == 0 || dev > tr.deviation) {
                tr.worst_index = k;
                tr.shift = shift[k];
                tr.finite_difference = fd;
                tr.deviation = dev;
            }
            tr.sweep_deviation = std::max(tr.sweep_deviation, std::abs(sweep[k] - shift[k]));
        }
        if (!std::isfinite(tr.deviation) || !std::isfinite(tr.sweep_deviation)) {
            throw NumericalError("gradcheck: non-finite gradient in trial " + std::to_string(t));
        }
        if (t == 0 || tr.deviation > rep.max_deviation) {
            rep.max_deviation = tr.deviation;
            rep.worst_trial = t;
        }
        rep.max_sweep_deviation = std::max(rep.max_sweep_deviation, tr.sweep_deviation);
        rep.trials.push_back(std::move(tr));
    }
    return rep;
}

/// Whitespace-delimited report: a summary comment block, then one line per trial.
inline std::string format_report(const GradcheckReport &rep) {
    const auto f = detail::format_double;
    std::string s;
    s += "# gradcheck seed " + std::to_string(rep.seed) + " trials " + std::to_string(rep.trials.size()) + "\n";
    s += "# max_deviation " + f(rep.max_deviation) + " worst_trial " + std::to_string(rep.worst_trial) + "\n";
    s += "# max_sweep_deviation " + f(rep.max_sweep_deviation) + "\n";
    s += std::string("# result ") + (rep.pass() ? "PASS" : "FAIL") + "\n";
    s += "# trial flavor model beta_inv n_params worst_index shift finite_difference deviation sweep_deviation\n";
    for (const auto &t : rep.trials) {
        s += std::to_string(t.trial) + ' ' + t.flavor + ' ' + t.model + ' ' + f(t.beta_inv) + ' ' +
             std::to_string(t.n_params) + ' ' + std::to_string(t.worst_index) + ' ' + f(t.shift) + ' ' +
             f(t.finite_difference) + ' ' + f(t.deviation) + ' ' + f(t.sweep_deviation) + '\n';
    }
    return s;
}

} // namespace gibbs::harness
