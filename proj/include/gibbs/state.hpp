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
 * Pure states on the joint data+ancilla register, reduced density matrices,
 * and the scalar diagnostics (purity, fidelity, entropy) computed from them.
 *
 * Register layout: qubits 0..n_data-1 are the data register, qubits
 * n_data..n_data+n_ancilla-1 are the ancilla register. Data qubit k pairs
 * with ancilla qubit n_data+k. Amplitudes are indexed little-endian, so the
 * amplitude vector reshaped column-major into a (2^n_data x 2^n_ancilla)
 * matrix has data index on rows and ancilla index on columns.
 */
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>
#include <utility>

#include <Eigen/Dense>

#include "errors.hpp"
#include "pauli.hpp"

namespace gibbs {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kNegativeEigenvalueTolerance = 1e-9;
inline constexpr double kEntropyCutoff = 1e-14;

class StateVector {
  public:
    StateVector() = default;

    /// |0...0> on the given register.
    StateVector(std::size_t n_data, std::size_t n_ancilla)
        : n_data_(n_data), n_ancilla_(n_ancilla), amps_(CVector::Zero(dim_of(n_data + n_ancilla))) {
        amps_[0] = 1.0;
    }

    StateVector(std::size_t n_data, std::size_t n_ancilla, CVector amplitudes)
        : n_data_(n_data), n_ancilla_(n_ancilla), amps_(std::move(amplitudes)) {
        if (static_cast<std::uint64_t>(amps_.size()) != dim_of(n_data + n_ancilla)) {
            throw ConfigError("StateVector: amplitude count does not match register size");
        }
        if (std::abs(amps_.norm() - 1.0) > kNormTolerance) {
            throw NumericalError("StateVector: amplitudes are not normalized");
        }
    }

    [[nodiscard]] std::size_t n_data() const { return n_data_; }
    [[nodiscard]] std::size_t n_ancilla() const { return n_ancilla_; }
    [[nodiscard]] std::size_t n_qubits() const { return n_data_ + n_ancilla_; }
    [[nodiscard]] std::size_t data_dim() const { return std::size_t{1} << n_data_; }
    [[nodiscard]] std::size_t ancilla_dim() const { return std::size_t{1} << n_ancilla_; }
    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }

    [[nodiscard]] const CVector &amplitudes() const { return amps_; }
    /// Mutable access for in-place kernels. Callers keep the vector normalized.
    [[nodiscard]] CVector &mutable_amplitudes() { return amps_; }

    /// Amplitudes viewed as the (data x ancilla) coefficient matrix.
    [[nodiscard]] Eigen::Map<const CMatrix> as_matrix() const {
        return {amps_.data(), static_cast<Eigen::Index>(data_dim()), static_cast<Eigen::Index>(ancilla_dim())};
    }

    [[nodiscard]] bool same_shape(const StateVector &o) const {
        return n_data_ == o.n_data_ && n_ancilla_ == o.n_ancilla_;
    }

    static std::uint64_t dim_of(std::size_t n_qubits) {
        if (n_qubits >= 40) throw ConfigError("StateVector: register too large");
        return std::uint64_t{1} << n_qubits;
    }

  private:
    std::size_t n_data_ = 0;
    std::size_t n_ancilla_ = 0;
    CVector amps_;
};

class DensityMatrix {
  public:
    DensityMatrix() = default;

    explicit DensityMatrix(CMatrix entries) : m_(std::move(entries)) {
        const auto d = m_.rows();
        if (d == 0 || d != m_.cols() || (d & (d - 1)) != 0) {
            throw ConfigError("DensityMatrix: dimension must be a positive power of two");
        }
        if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance) {
            throw NumericalError("DensityMatrix: not Hermitian");
        }
        if (std::abs(m_.trace() - cplx(1.0)) > kTraceTolerance) {
            throw NumericalError("DensityMatrix: trace is not 1");
        }
        // Remove rounding-level anti-Hermitian parts so downstream eigensolvers see exact symmetry.
        m_ = 0.5 * (m_ + m_.adjoint()).eval();
    }

    /// |psi><psi| for a normalized vector.
    static DensityMatrix pure(const CVector &psi) { return DensityMatrix(psi * psi.adjoint()); }

    static DensityMatrix maximally_mixed(std::size_t n_qubits) {
        const auto d = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
        return DensityMatrix(CMatrix::Identity(d, d) / static_cast<double>(d));
    }

    [[nodiscard]] const CMatrix &matrix() const { return m_; }
    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }

  private:
    CMatrix m_;
};

/// Re Tr(A B) for Hermitian A, B without forming the product.
inline double trace_product(const CMatrix &a, const CMatrix &b) {
    return (a.array() * b.transpose().array()).sum().real();
}

/// Eigenvalues (ascending) of a Hermitian matrix with [-1e-9, 0) clamped to zero.
/// Anything more negative means an upstream bug and is reported.
inline RVector clamped_spectrum(const CMatrix &m, const char *who) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
    RVector w = es.eigenvalues();
    for (auto &v : w) {
        if (v < -kNegativeEigenvalueTolerance) {
            throw NumericalError(std::string(who) + ": eigenvalue below -1e-9");
        }
        if (v < 0.0) v = 0.0;
    }
    return w;
}

inline void check_support(const PauliString &p, std::size_t n_qubits) {
    if (p.max_qubit() >= n_qubits) {
        throw ConfigError("Pauli string acts on qubit " + std::to_string(p.max_qubit()) +
                          " outside a " + std::to_string(n_qubits) + "-qubit register");
    }
}

namespace detail {

/// out = P in (out must not alias in).
inline void apply_pauli_raw(const PauliString &p, const cplx *in, cplx *out, std::size_t dim) {
    const auto x = p.x_mask();
    const auto z = p.z_mask();
    const cplx ph = p.y_phase();
    for (std::uint64_t b = 0; b < dim; ++b) {
        const bool odd = (std::popcount(b & z) & 1) != 0;
        out[b ^ x] = odd ? -ph * in[b] : ph * in[b];
    }
}

/// In-place e^{i theta P}.
inline void rotate_raw(const PauliString &p, double theta, cplx *a, std::size_t dim) {
    const double c = std::cos(theta);
    const cplx is = cplx(0.0, std::sin(theta));
    const auto x = p.x_mask();
    const auto z = p.z_mask();
    const cplx ph = p.y_phase();
    if (x == 0) {
        // diagonal: phase e^{i theta (+-1)}
        const cplx plus = c + is * ph;
        const cplx minus = c - is * ph;
        for (std::uint64_t b = 0; b < dim; ++b) {
            a[b] *= (std::popcount(b & z) & 1) ? minus : plus;
        }
        return;
    }
    const std::uint64_t pivot = std::uint64_t{1} << (63 - std::countl_zero(x));
    for (std::uint64_t b = 0; b < dim; ++b) {
        if (b & pivot) continue;
        const std::uint64_t f = b ^ x;
        const cplx pb = (std::popcount(b & z) & 1) ? -ph : ph; // P|b> = pb |f>
        const cplx pf = (std::popcount(f & z) & 1) ? -ph : ph; // P|f> = pf |b>
        const cplx ab = a[b];
        const cplx af = a[f];
        a[b] = c * ab + is * pf * af;
        a[f] = c * af + is * pb * ab;
    }
}

/// <u| P |v>.
inline cplx pauli_matrix_element(const PauliString &p, const cplx *u, const cplx *v, std::size_t dim) {
    const auto x = p.x_mask();
    const auto z = p.z_mask();
    cplx acc = 0.0;
    for (std::uint64_t b = 0; b < dim; ++b) {
        const cplx t = std::conj(u[b ^ x]) * v[b];
        acc += (std::popcount(b & z) & 1) ? -t : t;
    }
    return acc * p.y_phase();
}

} // namespace detail

/// P|psi>.
inline StateVector apply_pauli(const StateVector &state, const PauliString &p) {
    check_support(p, state.n_qubits());
    StateVector out = state;
    detail::apply_pauli_raw(p, state.amplitudes().data(), out.mutable_amplitudes().data(), state.dim());
    return out;
}

/// e^{i theta P}|psi> = cos(theta)|psi> + i sin(theta) P|psi>.
inline StateVector pauli_rotation(const StateVector &state, const PauliString &p, double theta) {
    check_support(p, state.n_qubits());
    StateVector out = state;
    detail::rotate_raw(p, theta, out.mutable_amplitudes().data(), out.dim());
    return out;
}

/// Tr_A |psi><psi|.
inline DensityMatrix partial_trace_ancilla(const StateVector &state) {
    const auto psi = state.as_matrix();
    return DensityMatrix(psi * psi.adjoint());
}

inline double purity(const DensityMatrix &rho) { return rho.matrix().cwiseAbs2().sum(); }

namespace detail {

/// Columns sqrt(w_k) v_k for the eigenpairs of m with w_k above the rank cutoff.
inline CMatrix psd_factor(const CMatrix &m, const char *who) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
    const RVector &w = es.eigenvalues();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < w.size(); ++k) {
        if (w[k] < -kNegativeEigenvalueTolerance) throw NumericalError(std::string(who) + ": eigenvalue below -1e-9");
        if (w[k] > kEntropyCutoff) keep.push_back(k);
    }
    CMatrix f(m.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) {
        f.col(static_cast<Eigen::Index>(j)) = std::sqrt(w[keep[j]]) * es.eigenvectors().col(keep[j]);
    }
    return f;
}

} // namespace detail

/// Uhlmann fidelity (Tr sqrt(sqrt(sigma) rho sqrt(sigma)))^2, evaluated as the
/// squared trace norm of A^dagger B with rho = A A^dagger and sigma = B B^dagger.
/// Eigenvalues at or below 1e-14 count as zero.
inline double fidelity(const DensityMatrix &rho, const DensityMatrix &sigma) {
    if (rho.dim() != sigma.dim()) throw ConfigError("fidelity: dimension mismatch");
    const CMatrix a = detail::psd_factor(rho.matrix(), "fidelity");
    const CMatrix b = detail::psd_factor(sigma.matrix(), "fidelity");
    if (a.cols() == 0 || b.cols() == 0) return 0.0;
    const CMatrix overlap = a.adjoint() * b;
    const double trace_norm = Eigen::JacobiSVD<CMatrix>(overlap).singularValues().sum();
    return trace_norm * trace_norm;
}

/// S(rho) = -Tr rho ln rho, in nats.
inline double von_neumann_entropy(const DensityMatrix &rho) {
    const RVector w = clamped_spectrum(rho.matrix(), "von_neumann_entropy");
    double s = 0.0;
    for (double v : w) {
        if (v > kEntropyCutoff) s -= v * std::log(v);
    }
    return s;
}

} // namespace gibbs
