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
 * Multi-qubit Pauli words and their action on basis states.
 *
 * Basis states use little-endian indexing: qubit q is bit q of the index.
 */
#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace gibbs {

enum class Pauli : std::uint8_t { X = 0, Y = 1, Z = 2 };

inline char to_char(Pauli p) { return "XYZ"[static_cast<int>(p)]; }

inline Pauli pauli_from_char(char c) {
    switch (c) {
    case 'X': case 'x': return Pauli::X;
    case 'Y': case 'y': return Pauli::Y;
    case 'Z': case 'z': return Pauli::Z;
    default: throw ConfigError(std::string("not a Pauli letter: ") + c);
    }
}

/**
 * A tensor product of X/Y/Z factors on an increasing list of qubits.
 * Identity factors are implicit; the empty word is rejected.
 */
class PauliString {
  public:
    PauliString() = default;

    PauliString(std::vector<std::size_t> support, std::vector<Pauli> letters)
        : support_(std::move(support)), letters_(std::move(letters)) {
        if (support_.empty()) {
            throw ConfigError("PauliString: weight must be at least 1");
        }
        if (support_.size() != letters_.size()) {
            throw ConfigError("PauliString: support/letters length mismatch");
        }
        for (std::size_t i = 1; i < support_.size(); ++i) {
            if (support_[i] <= support_[i - 1]) {
                throw ConfigError("PauliString: support must be strictly increasing");
            }
        }
        if (support_.back() >= 64) {
            throw ConfigError("PauliString: qubit index out of range");
        }
        for (std::size_t i = 0; i < support_.size(); ++i) {
            const std::uint64_t bit = std::uint64_t{1} << support_[i];
            switch (letters_[i]) {
            case Pauli::X: x_mask_ |= bit; break;
            case Pauli::Y: x_mask_ |= bit; z_mask_ |= bit; ++n_y_; break;
            case Pauli::Z: z_mask_ |= bit; break;
            }
        }
    }

    /// Single-qubit word.
    static PauliString single(std::size_t q, Pauli p) { return PauliString({q}, {p}); }

    /// Two-qubit word; qubits may be given in either order.
    static PauliString pair(std::size_t q0, Pauli p0, std::size_t q1, Pauli p1) {
        if (q0 > q1) {
            std::swap(q0, q1);
            std::swap(p0, p1);
        }
        return PauliString({q0, q1}, {p0, p1});
    }

    /// Parses "X0 Y3" style text (letter followed by qubit index, space separated).
    static PauliString parse(const std::string &text) {
        std::vector<std::pair<std::size_t, Pauli>> factors;
        std::size_t i = 0;
        while (i < text.size()) {
            if (text[i] == ' ') {
                ++i;
                continue;
            }
            const Pauli p = pauli_from_char(text[i++]);
            std::size_t j = i;
            while (j < text.size() && text[j] >= '0' && text[j] <= '9') ++j;
            if (j == i) throw ConfigError("PauliString::parse: missing qubit index in '" + text + "'");
            factors.emplace_back(std::stoul(text.substr(i, j - i)), p);
            i = j;
        }
        std::sort(factors.begin(), factors.end());
        std::vector<std::size_t> support;
        std::vector<Pauli> letters;
        for (auto [q, p] : factors) {
            support.push_back(q);
            letters.push_back(p);
        }
        return PauliString(std::move(support), std::move(letters));
    }

    [[nodiscard]] const std::vector<std::size_t> &support() const { return support_; }
    [[nodiscard]] const std::vector<Pauli> &letters() const { return letters_; }
    [[nodiscard]] std::size_t weight() const { return support_.size(); }
    [[nodiscard]] std::size_t max_qubit() const { return support_.back(); }

    [[nodiscard]] std::uint64_t x_mask() const { return x_mask_; }
    [[nodiscard]] std::uint64_t z_mask() const { return z_mask_; }
    [[nodiscard]] bool is_diagonal() const { return x_mask_ == 0; }

    /// i^{#Y}; the word acts as i^{#Y} X^x Z^z.
    [[nodiscard]] std::complex<double> y_phase() const {
        static constexpr std::complex<double> powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        return powers[n_y_ % 4];
    }

    /// Coefficient c with P|b> = c |b ^ x_mask>.
    [[nodiscard]] std::complex<double> phase_on(std::uint64_t basis) const {
        const bool odd = (std::popcount(basis & z_mask_) & 1) != 0;
        return odd ? -y_phase() : y_phase();
    }

    [[nodiscard]] bool commutes_with(const PauliString &other) const {
        const int anti = std::popcount(x_mask_ & other.z_mask_) + std::popcount(z_mask_ & other.x_mask_);
        return (anti & 1) == 0;
    }

    /// Support shifted by `offset` qubits (used to lift data operators onto the ancilla register).
    [[nodiscard]] PauliString shifted(std::size_t offset) const {
        std::vector<std::size_t> s = support_;
        for (auto &q : s) q += offset;
        return PauliString(std::move(s), letters_);
    }

    [[nodiscard]] std::string str() const {
        std::string out;
        for (std::size_t i = 0; i < support_.size(); ++i) {
            if (i) out += ' ';
            out += to_char(letters_[i]);
            out += std::to_string(support_[i]);
        }
        return out;
    }

    friend bool operator==(const PauliString &a, const PauliString &b) {
        return a.support_ == b.support_ && a.letters_ == b.letters_;
    }
    friend std::strong_ordering operator<=>(const PauliString &a, const PauliString &b) {
        if (auto c = a.support_ <=> b.support_; c != 0) return c;
        return a.letters_ <=> b.letters_;
    }

  private:
    std::vector<std::size_t> support_;
    std::vector<Pauli> letters_;
    std::uint64_t x_mask_ = 0;
    std::uint64_t z_mask_ = 0;
    int n_y_ = 0;
};

} // namespace gibbs
