// Copyright 2026 The mpsstab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mpsstab/clifford.hpp"
#include "mpsstab/errors.hpp"
#include "mpsstab/mps.hpp"
#include "mpsstab/pauli.hpp"
#include "mpsstab/tableau.hpp"

// Brute-force statevector reference. Everything here enumerates; nothing is
// meant to scale.
namespace mpsstab::oracle {

inline constexpr size_t kEnumerationLimit = 8;
inline constexpr size_t kGroupLimit = 12;

// Amplitudes over 2^N basis states, qubit 0 is the most significant bit.
struct DenseState {
    Eigen::VectorXcd amplitudes;

    size_t num_qubits() const { return static_cast<size_t>(std::countr_zero(static_cast<uint64_t>(amplitudes.size()))); }
};

inline DenseState zero_state(size_t n, size_t limit = kDenseQubitLimit) {
    if (n > limit) {
        throw CapacityError("dense state: too many qubits");
    }
    DenseState s{Eigen::VectorXcd::Zero(Eigen::Index{1} << n)};
    s.amplitudes(0) = 1.0;
    return s;
}

inline DenseState from_mps(const MpsState& state, size_t limit = kDenseQubitLimit) {
    return DenseState{to_dense(state, limit)};
}

inline void apply_gate(DenseState& s, const Gate& g) {
    const size_t n = s.num_qubits();
    validate(g, n);
    const Eigen::MatrixXcd u = gate_unitary(g);
    auto& amp = s.amplitudes;
    const auto dim = static_cast<uint64_t>(amp.size());
    if (!g.is_two_qubit()) {
        const uint64_t bit = uint64_t{1} << (n - 1 - g.a);
        for (uint64_t i = 0; i < dim; ++i) {
            if (i & bit) continue;
            const cplx a0 = amp(i);
            const cplx a1 = amp(i | bit);
            amp(i) = u(0, 0) * a0 + u(0, 1) * a1;
            amp(i | bit) = u(1, 0) * a0 + u(1, 1) * a1;
        }
        return;
    }
    const uint32_t l = g.left();
    const uint64_t hi = uint64_t{1} << (n - 1 - l);
    const uint64_t lo = uint64_t{1} << (n - 2 - l);
    for (uint64_t i = 0; i < dim; ++i) {
        if (i & (hi | lo)) continue;
        const uint64_t idx[4] = {i, i | lo, i | hi, i | hi | lo};
        cplx in[4];
        for (int k = 0; k < 4; ++k) in[k] = amp(idx[k]);
        for (int r = 0; r < 4; ++r) {
            cplx acc = 0;
            for (int c = 0; c < 4; ++c) acc += u(r, c) * in[c];
            amp(idx[r]) = acc;
        }
    }
}

inline void apply_circuit(DenseState& s, const Circuit& c) {
    if (c.num_qubits != s.num_qubits()) {
        throw InvalidInput("dense apply_circuit: width mismatch");
    }
    for (const auto& g : c.gates) {
        apply_gate(s, g);
    }
}

namespace detail {

struct Masks {
    uint64_t x = 0;
    uint64_t z = 0;
};

inline Masks masks_of(const PauliString& p) {
    Masks m;
    const size_t n = p.size();
    for (size_t j = 0; j < n; ++j) {
        const uint64_t bit = uint64_t{1} << (n - 1 - j);
        const uint8_t a = p.codes[j];
        if (a == 1 || a == 2) m.x |= bit;
        if (a == 2 || a == 3) m.z |= bit;
    }
    return m;
}

inline cplx i_power(int k) {
    static const cplx table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[k & 3];
}

}  // namespace detail

// <psi|p|psi> by direct summation over basis states.
inline double expectation(const DenseState& s, const PauliString& p) {
    if (p.size() != s.num_qubits()) {
        throw InvalidInput("oracle expectation: width mismatch");
    }
    const auto m = detail::masks_of(p);
    const cplx phase = detail::i_power(std::popcount(m.x & m.z));
    cplx acc = 0;
    const auto dim = static_cast<uint64_t>(s.amplitudes.size());
    for (uint64_t b = 0; b < dim; ++b) {
        const double sgn = (std::popcount(b & m.z) & 1) ? -1.0 : 1.0;
        acc += std::conj(s.amplitudes(b ^ m.x)) * s.amplitudes(b) * sgn;
    }
    acc *= phase;
    return p.sign == Sign::Minus ? -acc.real() : acc.real();
}

// Base-4 index of a string, qubit 0 most significant.
inline uint64_t pauli_index(const PauliString& p) {
    uint64_t idx = 0;
    for (uint8_t a : p.codes) idx = idx * 4 + a;
    return idx;
}

inline PauliString pauli_from_index(size_t n, uint64_t idx) {
    PauliString p(n);
    for (size_t j = n; j-- > 0;) {
        p.codes[j] = static_cast<uint8_t>(idx & 3u);
        idx >>= 2;
    }
    return p;
}

// <psi|sigma|psi> for all 4^N strings, indexed by pauli_index. For each X
// pattern the Z dependence is a Walsh-Hadamard transform of
// conj(psi[b ^ x]) psi[b].
inline std::vector<double> all_pauli_expectations(const DenseState& s, size_t limit = kGroupLimit) {
    const size_t n = s.num_qubits();
    if (n > limit) {
        throw CapacityError("all_pauli_expectations: " + std::to_string(n) + " qubits exceed the limit");
    }
    const uint64_t dim = uint64_t{1} << n;
    std::vector<double> out(dim * dim);
    std::vector<cplx> f(dim);
    for (uint64_t x = 0; x < dim; ++x) {
        for (uint64_t b = 0; b < dim; ++b) {
            f[b] = std::conj(s.amplitudes(b ^ x)) * s.amplitudes(b);
        }
        for (uint64_t h = 1; h < dim; h <<= 1) {
            for (uint64_t i = 0; i < dim; i += 2 * h) {
                for (uint64_t j = i; j < i + h; ++j) {
                    const cplx u = f[j];
                    const cplx v = f[j + h];
                    f[j] = u + v;
                    f[j + h] = u - v;
                }
            }
        }
        for (uint64_t z = 0; z < dim; ++z) {
            // Interleave the masks into base-4 codes: code = x + 2 z gives
            // 0 I, 1 X, 3 Y, 2 Z; remap to 0 I, 1 X, 2 Y, 3 Z.
            uint64_t idx = 0;
            for (size_t j = 0; j < n; ++j) {
                const uint64_t bit = uint64_t{1} << (n - 1 - j);
                const bool xb = x & bit;
                const bool zb = z & bit;
                const uint64_t code = xb ? (zb ? 2 : 1) : (zb ? 3 : 0);
                idx = idx * 4 + code;
            }
            const cplx v = detail::i_power(std::popcount(x & z)) * f[z];
            out[idx] = v.real();
        }
    }
    return out;
}

// Pi(sigma) = <sigma>^2 / 2^N for every string, indexed by pauli_index.
inline std::vector<double> exact_pauli_distribution(const DenseState& s, size_t limit = kEnumerationLimit) {
    const size_t n = s.num_qubits();
    if (n > limit) {
        throw CapacityError("exact_pauli_distribution: " + std::to_string(n) + " qubits exceed the limit of " +
                            std::to_string(limit));
    }
    std::vector<double> e = all_pauli_expectations(s, limit);
    const double scale = std::ldexp(1.0, -static_cast<int>(n));
    for (double& v : e) v = v * v * scale;
    return e;
}

// Every string with |<sigma>| >= 1 - tol, signed by its expectation and
// reduced to independent generators.
inline Tableau exact_stabilizer_group(const DenseState& s, double tol = 1e-6, size_t limit = kGroupLimit) {
    const size_t n = s.num_qubits();
    const std::vector<double> e = all_pauli_expectations(s, limit);
    Tableau t(n);
    size_t members = 0;
    for (uint64_t idx = 0; idx < e.size(); ++idx) {
        if (std::abs(e[idx]) >= 1.0 - tol) {
            PauliString p = pauli_from_index(n, idx);
            p.sign = e[idx] > 0 ? Sign::Plus : Sign::Minus;
            t.add_row(p);
            ++members;
        }
    }
    t = gaussian_eliminate(std::move(t));
    if (members != (uint64_t{1} << *t.rank())) {
        throw NumericalError("exact_stabilizer_group: " + std::to_string(members) +
                             " members is not 2^rank; tolerance too loose");
    }
    return t;
}

// Marginal over all completions of the first prefix.size() codes:
// pi(prefix) = Tr[X^2] / 2^i with X = Tr_prefix[(prefix (x) 1) rho].
inline double exact_partial_probability(const DenseState& s, std::span<const uint8_t> prefix,
                                        size_t limit = kGroupLimit) {
    const size_t n = s.num_qubits();
    if (n > limit) {
        throw CapacityError("exact_partial_probability: too many qubits");
    }
    const size_t i = prefix.size();
    if (i > n) {
        throw InvalidInput("exact_partial_probability: prefix longer than the state");
    }
    if (i == 0) {
        return 1.0;
    }
    const Eigen::Index rows = Eigen::Index{1} << i;
    const Eigen::Index cols = Eigen::Index{1} << (n - i);
    // Row-major reshape: psi[a * cols + b].
    const Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> psi(
        s.amplitudes.data(), rows, cols);
    const Eigen::MatrixXcd p = pauli_string_matrix(PauliString(std::vector<uint8_t>(prefix.begin(), prefix.end())));
    const Eigen::MatrixXcd ppsi = p * psi;
    const Eigen::MatrixXcd x = ppsi.transpose() * psi.conjugate();
    return x.squaredNorm() / static_cast<double>(rows);
}

}  // namespace mpsstab::oracle
