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

// Independent dense reference implementations used only by the tests.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "gibbs/operator.hpp"
#include "gibbs/pauli.hpp"
#include "gibbs/state.hpp"

namespace oracle {

using gibbs::CMatrix;
using gibbs::CVector;
using gibbs::cplx;

inline CMatrix single(gibbs::Pauli p) {
    CMatrix m(2, 2);
    const cplx i(0.0, 1.0);
    switch (p) {
    case gibbs::Pauli::X: m << 0, 1, 1, 0; break;
    case gibbs::Pauli::Y: m << 0, -i, i, 0; break;
    case gibbs::Pauli::Z: m << 1, 0, 0, -1; break;
    }
    return m;
}

inline CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
            out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
        }
    }
    return out;
}

/// Little-endian: qubit 0 is the rightmost Kronecker factor.
inline CMatrix pauli_dense(const gibbs::PauliString &p, std::size_t n) {
    CMatrix out = CMatrix::Identity(1, 1);
    for (std::size_t q = n; q-- > 0;) {
        CMatrix f = CMatrix::Identity(2, 2);
        for (std::size_t k = 0; k < p.support().size(); ++k) {
            if (p.support()[k] == q) f = single(p.letters()[k]);
        }
        out = kron(out, f);
    }
    return out;
}

inline CMatrix operator_dense(const gibbs::HermitianOperator &h) {
    const auto d = static_cast<Eigen::Index>(std::size_t{1} << h.n_qubits());
    CMatrix m = CMatrix::Zero(d, d);
    for (const auto &t : h.terms()) m += t.coefficient * pauli_dense(t.pauli, h.n_qubits());
    return m;
}

/// e^{itH} for Hermitian H through a full dense eigendecomposition.
inline CMatrix expm_hermitian(const CMatrix &h, double t) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    const CVector ph = (cplx(0.0, t) * es.eigenvalues().cast<cplx>()).array().exp();
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

/// f(H) for Hermitian H and real f, through a dense eigendecomposition.
template <typename F>
CMatrix matrix_function(const CMatrix &h, F f) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    Eigen::VectorXd w = es.eigenvalues();
    for (auto &x : w) x = f(x);
    return es.eigenvectors() * w.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

/// Tr_A |psi><psi| by explicit index summation: data index = low bits.
inline CMatrix partial_trace(const CVector &psi, std::size_t n_data, std::size_t n_anc) {
    const std::size_t dd = std::size_t{1} << n_data;
    const std::size_t da = std::size_t{1} << n_anc;
    const CMatrix full = psi * psi.adjoint();
    CMatrix rho = CMatrix::Zero(static_cast<Eigen::Index>(dd), static_cast<Eigen::Index>(dd));
    for (std::size_t i = 0; i < dd; ++i) {
        for (std::size_t j = 0; j < dd; ++j) {
            for (std::size_t a = 0; a < da; ++a) {
                rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
                    full(static_cast<Eigen::Index>(a * dd + i), static_cast<Eigen::Index>(a * dd + j));
            }
        }
    }
    return rho;
}

inline CVector random_vector(std::size_t dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    CVector v(static_cast<Eigen::Index>(dim));
    for (auto &x : v) x = cplx(n(rng), n(rng));
    return v / v.norm();
}

inline gibbs::StateVector random_state(std::size_t nd, std::size_t na, std::mt19937_64 &rng) {
    return {nd, na, random_vector(std::size_t{1} << (nd + na), rng)};
}

/// Random density matrix of the given rank: G G^dagger / Tr with Gaussian G.
inline CMatrix random_density(std::size_t dim, std::size_t rank, std::mt19937_64 &rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    CMatrix g(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(rank));
    for (Eigen::Index r = 0; r < g.rows(); ++r) {
        for (Eigen::Index c = 0; c < g.cols(); ++c) g(r, c) = cplx(n(rng), n(rng));
    }
    CMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return 0.5 * (rho + rho.adjoint());
}

/// Uhlmann fidelity through dense square roots in long double. Eigenvalues
/// at or below 1e-14 count as zero, matching the rank cutoff of the library.
inline double fidelity(const CMatrix &rho, const CMatrix &sigma) {
    using LMatrix = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;
    const auto root = [](const LMatrix &m) {
        Eigen::SelfAdjointEigenSolver<LMatrix> es(m);
        Eigen::Matrix<long double, Eigen::Dynamic, 1> w = es.eigenvalues();
        for (auto &x : w) x = x > 1e-14L ? std::sqrt(x) : 0.0L;
        return LMatrix(es.eigenvectors() * w.template cast<std::complex<long double>>().asDiagonal() *
                       es.eigenvectors().adjoint());
    };
    const LMatrix s = root(sigma.cast<std::complex<long double>>());
    const LMatrix inner = s * rho.cast<std::complex<long double>>() * s;
    const long double t = root(0.5L * (inner + inner.adjoint())).trace().real();
    return static_cast<double>(t * t);
}

inline double frobenius_sq(const CMatrix &a) { return a.cwiseAbs2().sum(); }

} // namespace oracle
