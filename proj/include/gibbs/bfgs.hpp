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
 * Dense BFGS with a strong-Wolfe line search.
 *
 * The line search also accepts approximate-Wolfe steps (Hager & Zhang)
 * once function differences reach rounding level, so convergence can be
 * driven to tight gradient tolerances by the gradient alone.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"

namespace gibbs {

struct BfgsOptions {
    double gradient_tolerance = 1e-8; // on the infinity norm
    std::size_t max_iterations = 1000;
};

enum class BfgsStatus { converged, max_iterations, line_search_stalled };

inline const char *to_string(BfgsStatus s) {
    switch (s) {
    case BfgsStatus::converged: return "converged";
    case BfgsStatus::max_iterations: return "max_iterations";
    case BfgsStatus::line_search_stalled: return "line_search_stalled";
    }
    return "?";
}

struct BfgsResult {
    std::vector<double> x;
    double value = 0.0;
    double gradient_inf_norm = 0.0;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    BfgsStatus status = BfgsStatus::converged;
};

namespace detail {

struct LinePoint {
    double alpha = 0.0;
    double value = 0.0;
    double slope = 0.0;
    Eigen::VectorXd x;
    Eigen::VectorXd g;
};

/// Minimizer of the cubic through (a, fa, da), (b, fb, db), clipped to the safeguarded interior.
inline double cubic_step(const LinePoint &a, const LinePoint &b) {
    const double lo = std::min(a.alpha, b.alpha);
    const double hi = std::max(a.alpha, b.alpha);
    const double margin = 0.1 * (hi - lo);
    const double d1 = a.slope + b.slope - 3.0 * (a.value - b.value) / (a.alpha - b.alpha);
    const double disc = d1 * d1 - a.slope * b.slope;
    double t = 0.5 * (lo + hi);
    if (disc >= 0.0) {
        const double d2 = std::copysign(std::sqrt(disc), b.alpha - a.alpha);
        const double denom = b.slope - a.slope + 2.0 * d2;
        if (denom != 0.0) {
            const double cand = b.alpha - (b.alpha - a.alpha) * (b.slope + d2 - d1) / denom;
            if (std::isfinite(cand)) t = cand;
        }
    }
    return std::clamp(t, lo + margin, hi - margin);
}

} // namespace detail

/**
 * Minimizes f starting from x0. `f(x, g)` returns the value and writes the
 * gradient into g. Non-finite values abort with NumericalError.
 */
template <typename F>
BfgsResult minimize_bfgs(F &&f, std::vector<double> x0, const BfgsOptions &opts = {}) {
    using Eigen::VectorXd;
    const auto n = static_cast<Eigen::Index>(x0.size());
    BfgsResult res;

    auto eval = [&](const VectorXd &x, VectorXd &g) {
        g.resize(n);
        const double v = f(std::span<const double>(x.data(), static_cast<std::size_t>(n)),
                           std::span<double>(g.data(), static_cast<std::size_t>(n)));
        ++res.evaluations;
        if (!std::isfinite(v) || !g.allFinite()) throw NumericalError("minimize_bfgs: non-finite objective or gradient");
        return v;
    };

    VectorXd x = Eigen::Map<VectorXd>(x0.data(), n);
    VectorXd g;
    double fx = eval(x, g);
    auto finish = [&](BfgsStatus st) {
        res.x.assign(x.data(), x.data() + n);
        res.value = fx;
        res.gradient_inf_norm = n ? g.cwiseAbs().maxCoeff() : 0.0;
        res.status = st;
        return res;
    };
    if (n == 0) return finish(BfgsStatus::converged);

    constexpr double c1 = 1e-4;
    constexpr double c2 = 0.9;
    constexpr double approx_upper = 0.8; // (2 delta - 1), delta = 0.1
    Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
    bool h_is_identity = true;

    for (res.iterations = 0; res.iterations < opts.max_iterations; ++res.iterations) {
        if (g.cwiseAbs().maxCoeff() <= opts.gradient_tolerance) return finish(BfgsStatus::converged);

        VectorXd p = -h * g;
        double d0 = g.dot(p);
        if (!(d0 < 0.0)) {
            h.setIdentity();
            h_is_identity = true;
            p = -g;
            d0 = g.dot(p);
        }
        const double noise = 1e-14 * std::abs(fx) + 1e-300;

        detail::LinePoint start{0.0, fx, d0, x, g};
        auto probe = [&](double alpha) {
            detail::LinePoint pt;
            pt.alpha = alpha;
            pt.x = x + alpha * p;
            pt.value = eval(pt.x, pt.g);
            pt.slope = pt.g.dot(p);
            return pt;
        };
        auto wolfe = [&](const detail::LinePoint &pt) {
            const bool strong = pt.value <= fx + c1 * pt.alpha * d0 && std::abs(pt.slope) <= -c2 * d0;
            const bool approx = pt.value <= fx + noise && pt.slope >= c2 * d0 && pt.slope <= -approx_upper * d0;
            return strong || approx;
        };

        std::optional<detail::LinePoint> accepted;
        {
            // initial step: unit for quasi-Newton directions, scaled for steepest descent
            double alpha = h_is_identity ? std::min(1.0, 1.0 / std::max(1e-300, g.cwiseAbs().maxCoeff())) : 1.0;
            detail::LinePoint prev = start;
            auto zoom = [&](detail::LinePoint lo, detail::LinePoint hi) -> std::optional<detail::LinePoint> {
                for (int k = 0; k < 40; ++k) {
                    if (std::abs(hi.alpha - lo.alpha) < 1e-16 * std::max(1.0, std::abs(lo.alpha))) break;
                    auto pt = probe(detail::cubic_step(lo, hi));
                    if (wolfe(pt)) return pt;
                    if (pt.value > fx + c1 * pt.alpha * d0 || pt.value >= lo.value) {
                        hi = pt;
                    } else {
                        if (pt.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
                        lo = pt;
                    }
                }
                if (lo.alpha > 0.0 && lo.value < fx) return lo; // sufficient decrease without curvature
                return std::nullopt;
            };
            for (int k = 0; k < 50; ++k) {
                auto pt = probe(alpha);
                if (wolfe(pt)) {
                    accepted = pt;
                    break;
                }
                if (pt.value > fx + c1 * alpha * d0 || (k > 0 && pt.value >= prev.value)) {
                    accepted = zoom(prev, pt);
                    break;
                }
                if (pt.slope >= 0.0) {
                    accepted = zoom(pt, prev);
                    break;
                }
                prev = pt;
                alpha *= 2.0;
            }
        }

        if (!accepted) {
            if (h_is_identity) return finish(BfgsStatus::line_search_stalled);
            h.setIdentity();
            h_is_identity = true;
            continue;
        }

        const VectorXd s = accepted->x - x;
        const VectorXd y = accepted->g - g;
        x = accepted->x;
        g = accepted->g;
        fx = accepted->value;

        const double ys = y.dot(s);
        if (ys > 1e-300 && ys > 1e-12 * std::sqrt(y.squaredNorm() * s.squaredNorm())) {
            if (h_is_identity) h *= ys / y.squaredNorm();
            const double rho = 1.0 / ys;
            const VectorXd hy = h * y;
            const double yhy = y.dot(hy);
            h.noalias() -= rho * (s * hy.transpose() + hy * s.transpose());
            h.noalias() += (rho * rho * yhy + rho) * (s * s.transpose());
            h_is_identity = false;
        }
    }
    if (g.cwiseAbs().maxCoeff() <= opts.gradient_tolerance) return finish(BfgsStatus::converged);
    return finish(BfgsStatus::max_iterations);
}

} // namespace gibbs
