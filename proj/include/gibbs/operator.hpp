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
 * Real linear combinations of Pauli strings, with exact exponentials.
 *
 * e^{itH} is applied without Trotter error. The strategy is chosen once per
 * operator and cached:
 *  - all terms diagonal: per-basis-state phases;
 *  - otherwise the terms are grouped into connected components by qubit
 *    support. Components act on disjoint qubits and commute, so each one is
 *    diagonalized densely on its own qubits and applied as a local gate.
 *    An operator whose terms connect every qubit degenerates to the full
 *    dense eigendecomposition.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "pauli.hpp"
#include "state.hpp"

namespace gibbs {

struct PauliTerm {
    double coefficient = 0.0;
    PauliString pauli;
};

namespace detail {

struct LocalBlock {
    std::vector<std::size_t> qubits;
    std::vector<std::uint64_t> offsets; // local index -> global bit pattern
    std::vector<std::uint64_t> bases;   // global indices with all block bits cleared
    CMatrix vectors;
    RVector values;
};

struct ExpCache {
    std::once_flag once;
    bool diagonal = false;
    RVector diagonal_values;
    std::vector<LocalBlock> blocks;
};

struct SpectralCache {
    std::once_flag once;
    RVector values; // ascending
    CMatrix vectors;
};

} // namespace detail

class HermitianOperator {
  public:
    HermitianOperator() = default;

    HermitianOperator(std::size_t n_qubits, std::vector<PauliTerm> terms)
        : n_qubits_(n_qubits), terms_(std::move(terms)) {
        if (n_qubits_ == 0 || n_qubits_ > 30) throw ConfigError("HermitianOperator: bad register size");
        for (const auto &t : terms_) {
            if (!std::isfinite(t.coefficient)) throw ConfigError("HermitianOperator: non-finite coefficient");
            check_support(t.pauli, n_qubits_);
        }
    }

    [[nodiscard]] std::size_t n_qubits() const { return n_qubits_; }
    [[nodiscard]] std::size_t dim() const { return std::size_t{1} << n_qubits_; }
    [[nodiscard]] const std::vector<PauliTerm> &terms() const { return terms_; }

    [[nodiscard]] bool is_diagonal() const {
        return std::all_of(terms_.begin(), terms_.end(), [](const PauliTerm &t) { return t.pauli.is_diagonal(); });
    }

    [[nodiscard]] bool terms_commute() const {
        for (std::size_t i = 0; i < terms_.size(); ++i)
            for (std::size_t j = i + 1; j < terms_.size(); ++j)
                if (!terms_[i].pauli.commutes_with(terms_[j].pauli)) return false;
        return true;
    }

    /// Same operator with repeated Pauli strings merged and zero coefficients dropped.
    [[nodiscard]] HermitianOperator aggregated() const {
        std::map<PauliString, double> merged;
        for (const auto &t : terms_) merged[t.pauli] += t.coefficient;
        std::vector<PauliTerm> out;
        for (auto &[p, c] : merged)
            if (c != 0.0) out.push_back({c, p});
        return {n_qubits_, std::move(out)};
    }

    /// This operator placed on a larger register starting at qubit `offset`.
    [[nodiscard]] HermitianOperator embedded(std::size_t n_total, std::size_t offset) const {
        std::vector<PauliTerm> out;
        out.reserve(terms_.size());
        for (const auto &t : terms_) out.push_back({t.coefficient, t.pauli.shifted(offset)});
        return {n_total, std::move(out)};
    }

    [[nodiscard]] HermitianOperator scaled(double s) const {
        auto out = terms_;
        for (auto &t : out) t.coefficient *= s;
        return {n_qubits_, std::move(out)};
    }

    friend HermitianOperator operator+(const HermitianOperator &a, const HermitianOperator &b) {
        if (a.n_qubits_ != b.n_qubits_) throw ConfigError("HermitianOperator: register mismatch in sum");
        auto terms = a.terms_;
        terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
        return {a.n_qubits_, std::move(terms)};
    }

    /// out = H in.
    void apply_raw(const cplx *in, cplx *out) const {
        const std::size_t d = dim();
        std::fill(out, out + d, cplx(0.0));
        for (const auto &t : terms_) {
            const auto x = t.pauli.x_mask();
            const auto z = t.pauli.z_mask();
            const cplx ph = t.coefficient * t.pauli.y_phase();
            for (std::uint64_t b = 0; b < d; ++b) {
                const cplx v = ph * in[b];
                out[b ^ x] += (std::popcount(b & z) & 1) ? -v : v;
            }
        }
    }

    [[nodiscard]] CVector apply(const CVector &v) const {
        if (static_cast<std::size_t>(v.size()) != dim()) throw ConfigError("HermitianOperator: dimension mismatch");
        CVector out(v.size());
        apply_raw(v.data(), out.data());
        return out;
    }

    [[nodiscard]] CMatrix to_dense() const {
        const auto d = static_cast<Eigen::Index>(dim());
        CMatrix m = CMatrix::Zero(d, d);
        for (const auto &t : terms_) {
            for (std::uint64_t b = 0; b < dim(); ++b) {
                m(static_cast<Eigen::Index>(b ^ t.pauli.x_mask()), static_cast<Eigen::Index>(b)) +=
                    t.coefficient * t.pauli.phase_on(b);
            }
        }
        return m;
    }

    /// Cached dense eigendecomposition, eigenvalues ascending.
    [[nodiscard]] const RVector &eigenvalues() const { return spectral().values; }
    [[nodiscard]] const CMatrix &eigenvectors() const { return spectral().vectors; }

    /// Largest |eigenvalue|.
    [[nodiscard]] double spectral_norm() const {
        const auto &w = eigenvalues();
        return std::max(std::abs(w[0]), std::abs(w[w.size() - 1]));
    }

    /// In-place e^{itH} on a vector of this operator's dimension.
    void apply_exponential_raw(double t, cplx *a) const {
        const auto &c = exp_cache();
        if (c.diagonal) {
            for (std::size_t b = 0; b < dim(); ++b) a[b] *= std::polar(1.0, t * c.diagonal_values[b]);
            return;
        }
        for (const auto &blk : c.blocks) {
            const auto ld = static_cast<Eigen::Index>(blk.offsets.size());
            const auto ng = static_cast<Eigen::Index>(blk.bases.size());
            CMatrix g(ld, ng);
            for (Eigen::Index j = 0; j < ng; ++j)
                for (Eigen::Index l = 0; l < ld; ++l) g(l, j) = a[blk.bases[j] | blk.offsets[l]];
            CMatrix h = blk.vectors.adjoint() * g;
            for (Eigen::Index l = 0; l < ld; ++l) h.row(l) *= std::polar(1.0, t * blk.values[l]);
            g.noalias() = blk.vectors * h;
            for (Eigen::Index j = 0; j < ng; ++j)
                for (Eigen::Index l = 0; l < ld; ++l) a[blk.bases[j] | blk.offsets[l]] = g(l, j);
        }
    }

  private:
    const detail::SpectralCache &spectral() const {
        std::call_once(spectral_->once, [this] {
            Eigen::SelfAdjointEigenSolver<CMatrix> es(to_dense());
            spectral_->values = es.eigenvalues();
            spectral_->vectors = es.eigenvectors();
        });
        return *spectral_;
    }

    const detail::ExpCache &exp_cache() const {
        std::call_once(exp_->once, [this] { build_exp_cache(*exp_); });
        return *exp_;
    }

    void build_exp_cache(detail::ExpCache &c) const {
        const std::size_t d = dim();
        if (is_diagonal()) {
            c.diagonal = true;
            c.diagonal_values = RVector::Zero(static_cast<Eigen::Index>(d));
            for (const auto &t : terms_)
                for (std::uint64_t b = 0; b < d; ++b)
                    c.diagonal_values[static_cast<Eigen::Index>(b)] += t.coefficient * t.pauli.phase_on(b).real();
            return;
        }
        // union-find over qubits connected by a shared term
        std::vector<std::size_t> parent(n_qubits_);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](std::size_t q) {
            while (parent[q] != q) q = parent[q] = parent[parent[q]];
            return q;
        };
        std::vector<bool> touched(n_qubits_, false);
        for (const auto &t : terms_) {
            const auto &s = t.pauli.support();
            for (auto q : s) touched[q] = true;
            for (std::size_t i = 1; i < s.size(); ++i) parent[find(s[i])] = find(s[0]);
        }
        std::map<std::size_t, std::vector<std::size_t>> groups;
        for (std::size_t q = 0; q < n_qubits_; ++q)
            if (touched[q]) groups[find(q)].push_back(q);

        for (auto &[root, qubits] : groups) {
            detail::LocalBlock blk;
            blk.qubits = qubits;
            const std::size_t k = qubits.size();
            std::vector<std::size_t> local_of(n_qubits_, 0);
            for (std::size_t i = 0; i < k; ++i) local_of[qubits[i]] = i;

            std::vector<PauliTerm> local_terms;
            std::uint64_t block_mask = 0;
            for (auto q : qubits) block_mask |= std::uint64_t{1} << q;
            for (const auto &t : terms_) {
                if (find(t.pauli.support()[0]) != root) continue;
                std::vector<std::size_t> s;
                for (auto q : t.pauli.support()) s.push_back(local_of[q]);
                local_terms.push_back({t.coefficient, PauliString(std::move(s), t.pauli.letters())});
            }
            Eigen::SelfAdjointEigenSolver<CMatrix> es(HermitianOperator(k, std::move(local_terms)).to_dense());
            blk.values = es.eigenvalues();
            blk.vectors = es.eigenvectors();

            blk.offsets.resize(std::size_t{1} << k);
            for (std::uint64_t l = 0; l < blk.offsets.size(); ++l) {
                std::uint64_t g = 0;
                for (std::size_t i = 0; i < k; ++i)
                    if (l >> i & 1) g |= std::uint64_t{1} << qubits[i];
                blk.offsets[l] = g;
            }
            blk.bases.reserve(d >> k);
            for (std::uint64_t b = 0; b < d; ++b)
                if ((b & block_mask) == 0) blk.bases.push_back(b);
            c.blocks.push_back(std::move(blk));
        }
    }

    std::size_t n_qubits_ = 0;
    std::vector<PauliTerm> terms_;
    std::shared_ptr<detail::SpectralCache> spectral_ = std::make_shared<detail::SpectralCache>();
    std::shared_ptr<detail::ExpCache> exp_ = std::make_shared<detail::ExpCache>();
};

/// e^{itH}|psi> for H acting on the whole register.
inline StateVector apply_hermitian_exponential(const StateVector &state, const HermitianOperator &h, double t) {
    if (h.n_qubits() != state.n_qubits()) throw ConfigError("apply_hermitian_exponential: dimension mismatch");
    StateVector out = state;
    h.apply_exponential_raw(t, out.mutable_amplitudes().data());
    return out;
}

/// <psi|H|psi>.
inline double expectation(const StateVector &state, const HermitianOperator &h) {
    return state.amplitudes().dot(h.apply(state.amplitudes())).real();
}

} // namespace gibbs
