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

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mpsstab/errors.hpp"
#include "mpsstab/pauli.hpp"
#include "mpsstab/rng.hpp"

namespace mpsstab {

using cplx = std::complex<double>;

enum class GateKind : uint8_t { H, S, Sdg, CNOT, Clifford2, T, Tdg };

// `a` is the qubit for one-qubit gates, the control for CNOT and the left
// qubit of the pair for Clifford2. `b` is the CNOT target or a + 1.
struct Gate {
    GateKind kind = GateKind::H;
    uint32_t a = 0;
    uint32_t b = 0;
    uint32_t element = 0;  // two-qubit Clifford index in [0, 11520)

    static Gate h(uint32_t q) { return {GateKind::H, q, q, 0}; }
    static Gate s(uint32_t q) { return {GateKind::S, q, q, 0}; }
    static Gate sdg(uint32_t q) { return {GateKind::Sdg, q, q, 0}; }
    static Gate t(uint32_t q) { return {GateKind::T, q, q, 0}; }
    static Gate tdg(uint32_t q) { return {GateKind::Tdg, q, q, 0}; }
    static Gate cnot(uint32_t control, uint32_t target) { return {GateKind::CNOT, control, target, 0}; }
    static Gate clifford2(uint32_t left, uint32_t element) { return {GateKind::Clifford2, left, left + 1, element}; }

    bool is_two_qubit() const { return kind == GateKind::CNOT || kind == GateKind::Clifford2; }
    bool is_clifford() const { return kind != GateKind::T && kind != GateKind::Tdg; }
    // Left qubit of the adjacent pair a two-qubit gate acts on.
    uint32_t left() const { return a < b ? a : b; }

    bool operator==(const Gate&) const = default;
};

// Ordered gate list. `depth` is the number of layers it was generated with.
struct Circuit {
    size_t num_qubits = 0;
    std::vector<Gate> gates;
    size_t depth = 0;

    bool is_clifford() const {
        for (const auto& g : gates) {
            if (!g.is_clifford()) {
                return false;
            }
        }
        return true;
    }

    bool operator==(const Circuit&) const = default;
};

inline constexpr uint32_t kTwoQubitCliffordCount = 11520;

// Heisenberg action of a one- or two-qubit Clifford on local Pauli codes.
// For two qubits the local index is 4 * code(left) + code(right).
struct LocalAction {
    std::array<uint8_t, 16> image{};
    std::array<bool, 16> negate{};
};

namespace detail {

// Signed local Pauli; `row` encodes one or two qubits.
struct LocalPauli {
    BitRow row;
    bool negative = false;
};

inline LocalPauli local_from_codes(std::initializer_list<uint8_t> codes, bool negative) {
    PauliString p{std::vector<uint8_t>(codes)};
    return {encode(p), negative};
}

// Builds the table from the images of X_0, Z_0 (, X_1, Z_1).
inline LocalAction build_action(const std::vector<LocalPauli>& basis_images) {
    const size_t nq = basis_images.size() / 2;
    LocalAction act;
    const size_t count = size_t{1} << (2 * nq);
    for (size_t idx = 0; idx < count; ++idx) {
        std::vector<uint8_t> codes(nq);
        for (size_t q = 0; q < nq; ++q) {
            codes[q] = static_cast<uint8_t>((idx >> (2 * (nq - 1 - q))) & 3u);
        }
        // P = i^{sum x_q z_q} prod_q X_q^{x_q} Z_q^{z_q}, mapped factor by factor.
        BitRow acc(nq);
        unsigned log_i = 0;
        for (size_t q = 0; q < nq; ++q) {
            const bool x = codes[q] == 1 || codes[q] == 2;
            const bool z = codes[q] == 2 || codes[q] == 3;
            if (x && z) {
                log_i += 1;
            }
            if (x) {
                log_i += acc.multiply_right(basis_images[2 * q].row) + (basis_images[2 * q].negative ? 2 : 0);
            }
            if (z) {
                log_i += acc.multiply_right(basis_images[2 * q + 1].row) + (basis_images[2 * q + 1].negative ? 2 : 0);
            }
        }
        log_i &= 3u;
        if (log_i & 1u) {
            throw InvariantViolation("Clifford images do not preserve commutation");
        }
        const PauliString out = decode(acc);
        size_t out_idx = 0;
        for (size_t q = 0; q < nq; ++q) {
            out_idx = out_idx * 4 + out.codes[q];
        }
        act.image[idx] = static_cast<uint8_t>(out_idx);
        act.negate[idx] = log_i == 2;
    }
    return act;
}

inline uint8_t local_bits(const BitRow& r) {
    // (x0, z0, x1, z1) packed high to low.
    return static_cast<uint8_t>((r.x(0) << 3) | (r.z(0) << 2) | (r.x(1) << 1) | r.z(1));
}

inline BitRow bits_to_row(uint8_t v) {
    BitRow r(2);
    r.set_x(0, (v >> 3) & 1u);
    r.set_z(0, (v >> 2) & 1u);
    r.set_x(1, (v >> 1) & 1u);
    r.set_z(1, v & 1u);
    return r;
}

// The 720 elements of Sp(4, GF(2)) as images of (X0, Z0, X1, Z1), in
// lexicographic order of the packed image tuple, plus the reverse lookup.
struct SymplecticTable {
    std::vector<std::array<uint8_t, 4>> elements;
    std::vector<int16_t> index_of;  // packed 16-bit tuple -> element, or -1

    static uint16_t pack(const std::array<uint8_t, 4>& e) {
        return static_cast<uint16_t>((e[0] << 12) | (e[1] << 8) | (e[2] << 4) | e[3]);
    }

    SymplecticTable() : index_of(1u << 16, -1) {
        auto omega = [](uint8_t u, uint8_t v) {
            const BitRow a = bits_to_row(u);
            const BitRow b = bits_to_row(v);
            return symplectic_product(a, b);
        };
        // omega on the basis: only (X0, Z0) and (X1, Z1) anticommute.
        const bool expected[4][4] = {{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}};
        std::array<uint8_t, 4> e{};
        for (e[0] = 1; e[0] < 16; ++e[0]) {
            for (e[1] = 1; e[1] < 16; ++e[1]) {
                if (omega(e[0], e[1]) != expected[0][1]) continue;
                for (e[2] = 1; e[2] < 16; ++e[2]) {
                    if (omega(e[0], e[2]) != expected[0][2] || omega(e[1], e[2]) != expected[1][2]) continue;
                    for (e[3] = 1; e[3] < 16; ++e[3]) {
                        if (omega(e[0], e[3]) != expected[0][3] || omega(e[1], e[3]) != expected[1][3] ||
                            omega(e[2], e[3]) != expected[2][3]) {
                            continue;
                        }
                        index_of[pack(e)] = static_cast<int16_t>(elements.size());
                        elements.push_back(e);
                    }
                }
            }
        }
        if (elements.size() * 16 != kTwoQubitCliffordCount) {
            throw InvariantViolation("symplectic group enumeration produced " + std::to_string(elements.size()));
        }
    }
};

inline const SymplecticTable& symplectic_table() {
    static const SymplecticTable table;
    return table;
}

struct TwoQubitCliffordTables {
    std::vector<LocalAction> actions;
    std::vector<uint32_t> inverse;

    TwoQubitCliffordTables() : actions(kTwoQubitCliffordCount), inverse(kTwoQubitCliffordCount) {
        const auto& sym = symplectic_table();
        for (uint32_t e = 0; e < kTwoQubitCliffordCount; ++e) {
            const auto& imgs = sym.elements[e / 16];
            std::vector<LocalPauli> basis;
            for (int k = 0; k < 4; ++k) {
                basis.push_back({bits_to_row(imgs[k]), static_cast<bool>((e >> k) & 1u)});
            }
            actions[e] = build_action(basis);
        }
        // Inverse: if U maps P -> s B for a basis element B, then U^-1 maps B -> s P.
        static constexpr uint8_t basis_codes[4] = {4, 12, 1, 3};  // XI, ZI, IX, IZ
        for (uint32_t e = 0; e < kTwoQubitCliffordCount; ++e) {
            std::array<uint8_t, 4> inv_imgs{};
            uint32_t sign_bits = 0;
            for (int k = 0; k < 4; ++k) {
                for (uint8_t idx = 0; idx < 16; ++idx) {
                    if (actions[e].image[idx] == basis_codes[k]) {
                        const PauliString p(std::vector<uint8_t>{static_cast<uint8_t>(idx / 4), static_cast<uint8_t>(idx % 4)});
                        inv_imgs[k] = local_bits(encode(p));
                        if (actions[e].negate[idx]) {
                            sign_bits |= 1u << k;
                        }
                        break;
                    }
                }
            }
            const int16_t s = sym.index_of[SymplecticTable::pack(inv_imgs)];
            if (s < 0) {
                throw InvariantViolation("two-qubit Clifford inverse not found");
            }
            inverse[e] = static_cast<uint32_t>(s) * 16 + sign_bits;
        }
    }
};

inline const TwoQubitCliffordTables& two_qubit_clifford_tables() {
    static const TwoQubitCliffordTables tables;
    return tables;
}

inline const LocalAction& single_qubit_action(GateKind kind) {
    static const LocalAction h = build_action({local_from_codes({3}, false), local_from_codes({1}, false)});
    static const LocalAction s = build_action({local_from_codes({2}, false), local_from_codes({3}, false)});
    static const LocalAction sdg = build_action({local_from_codes({2}, true), local_from_codes({3}, false)});
    switch (kind) {
        case GateKind::H: return h;
        case GateKind::S: return s;
        case GateKind::Sdg: return sdg;
        default: throw InvalidInput("not a one-qubit Clifford gate");
    }
}

// CNOT on an adjacent pair; `control_left` picks the orientation.
inline const LocalAction& cnot_action(bool control_left) {
    static const LocalAction left = build_action({local_from_codes({1, 1}, false), local_from_codes({3, 0}, false),
                                                  local_from_codes({0, 1}, false), local_from_codes({3, 3}, false)});
    static const LocalAction right = build_action({local_from_codes({1, 0}, false), local_from_codes({3, 3}, false),
                                                   local_from_codes({1, 1}, false), local_from_codes({0, 3}, false)});
    return control_left ? left : right;
}

}  // namespace detail

// Images of (X0, Z0, X1, Z1) under two-qubit Clifford `element`, signed.
inline std::array<PauliString, 4> two_qubit_clifford_images(uint32_t element) {
    if (element >= kTwoQubitCliffordCount) {
        throw InvalidInput("two-qubit Clifford index out of range");
    }
    const auto& act = detail::two_qubit_clifford_tables().actions[element];
    static constexpr uint8_t basis_codes[4] = {4, 12, 1, 3};
    std::array<PauliString, 4> out;
    for (int k = 0; k < 4; ++k) {
        const uint8_t img = act.image[basis_codes[k]];
        out[k] = PauliString({static_cast<uint8_t>(img / 4), static_cast<uint8_t>(img % 4)},
                             act.negate[basis_codes[k]] ? Sign::Minus : Sign::Plus);
    }
    return out;
}

inline uint32_t two_qubit_clifford_inverse(uint32_t element) {
    if (element >= kTwoQubitCliffordCount) {
        throw InvalidInput("two-qubit Clifford index out of range");
    }
    return detail::two_qubit_clifford_tables().inverse[element];
}

inline void validate(const Gate& g, size_t num_qubits) {
    if (g.a >= num_qubits || g.b >= num_qubits) {
        throw InvalidInput("gate qubit index out of range");
    }
    if (g.is_two_qubit()) {
        if (g.a + 1 != g.b && g.b + 1 != g.a) {
            throw InvalidInput("two-qubit gate on non-adjacent qubits " + std::to_string(g.a) + "," +
                               std::to_string(g.b));
        }
        if (g.kind == GateKind::Clifford2 && (g.b != g.a + 1 || g.element >= kTwoQubitCliffordCount)) {
            throw InvalidInput("invalid two-qubit Clifford gate");
        }
    }
}

inline void validate(const Circuit& c) {
    for (const auto& g : c.gates) {
        validate(g, c.num_qubits);
    }
}

// Applies g p g^dagger to p in place. Unset signs are treated as +.
inline void conjugate_in_place(PauliString& p, const Gate& g) {
    validate(g, p.size());
    Sign sign = p.sign.value_or(Sign::Plus);
    if (g.kind == GateKind::T || g.kind == GateKind::Tdg) {
        throw InvalidInput("conjugate: T gates do not preserve the Pauli group");
    }
    if (!g.is_two_qubit()) {
        const auto& act = detail::single_qubit_action(g.kind);
        const uint8_t in = p.codes[g.a];
        p.codes[g.a] = act.image[in];
        if (act.negate[in]) sign = sign * Sign::Minus;
    } else {
        const uint32_t l = g.left();
        const LocalAction& act = g.kind == GateKind::CNOT ? detail::cnot_action(g.a == l)
                                                          : detail::two_qubit_clifford_tables().actions[g.element];
        const uint8_t in = static_cast<uint8_t>(4 * p.codes[l] + p.codes[l + 1]);
        const uint8_t out = act.image[in];
        p.codes[l] = out / 4;
        p.codes[l + 1] = out % 4;
        if (act.negate[in]) sign = sign * Sign::Minus;
    }
    p.sign = sign;
}

// U p U^dagger for U = the circuit (first gate applied first).
inline PauliString conjugate(PauliString p, const Circuit& c) {
    if (p.size() != c.num_qubits) {
        throw InvalidInput("conjugate: string length does not match circuit width");
    }
    if (!p.sign) {
        p.sign = Sign::Plus;
    }
    for (const auto& g : c.gates) {
        conjugate_in_place(p, g);
    }
    return p;
}

inline Gate inverse(const Gate& g) {
    switch (g.kind) {
        case GateKind::S: return Gate::sdg(g.a);
        case GateKind::Sdg: return Gate::s(g.a);
        case GateKind::T: return Gate::tdg(g.a);
        case GateKind::Tdg: return Gate::t(g.a);
        case GateKind::Clifford2: return Gate::clifford2(g.a, two_qubit_clifford_inverse(g.element));
        default: return g;
    }
}

inline Circuit inverse(const Circuit& c) {
    Circuit out{c.num_qubits, {}, c.depth};
    out.gates.reserve(c.gates.size());
    for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) {
        out.gates.push_back(inverse(*it));
    }
    return out;
}

// c2 after c1.
inline Circuit compose(const Circuit& c1, const Circuit& c2) {
    if (c1.num_qubits != c2.num_qubits) {
        throw InvalidInput("compose: width mismatch");
    }
    Circuit out = c1;
    out.gates.insert(out.gates.end(), c2.gates.begin(), c2.gates.end());
    out.depth = c1.depth + c2.depth;
    return out;
}

// Single-qubit Pauli matrix sigma^alpha.
inline Eigen::Matrix2cd pauli_matrix(uint8_t alpha) {
    const cplx i(0, 1);
    Eigen::Matrix2cd m;
    switch (alpha) {
        case 0: m << 1, 0, 0, 1; break;
        case 1: m << 0, 1, 1, 0; break;
        case 2: m << 0, -i, i, 0; break;
        case 3: m << 1, 0, 0, -1; break;
        default: throw InvalidInput("Pauli code out of range");
    }
    return m;
}

// Dense matrix of a signed Pauli string; qubit 0 is the most significant bit.
inline Eigen::MatrixXcd pauli_string_matrix(const PauliString& p) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
    for (uint8_t a : p.codes) {
        const Eigen::Matrix2cd s = pauli_matrix(a);
        // Kronecker with the new qubit as the least significant bit.
        Eigen::MatrixXcd kron(m.rows() * 2, m.cols() * 2);
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                kron.block(2 * r, 2 * c, 2, 2) = m(r, c) * s;
            }
        }
        m = std::move(kron);
    }
    if (p.sign == Sign::Minus) {
        m = -m;
    }
    return m;
}

namespace detail {

inline Eigen::Matrix4cd clifford2_unitary(uint32_t element) {
    // U|00> spans the joint +1 eigenspace of U Z0 U^dag and U Z1 U^dag, and
    // U|b0 b1> = (U X0 U^dag)^b0 (U X1 U^dag)^b1 U|00>.
    const auto imgs = two_qubit_clifford_images(element);
    const Eigen::Matrix4cd px0 = pauli_string_matrix(imgs[0]);
    const Eigen::Matrix4cd pz0 = pauli_string_matrix(imgs[1]);
    const Eigen::Matrix4cd px1 = pauli_string_matrix(imgs[2]);
    const Eigen::Matrix4cd pz1 = pauli_string_matrix(imgs[3]);
    const Eigen::Matrix4cd id = Eigen::Matrix4cd::Identity();
    const Eigen::Matrix4cd proj = 0.25 * (id + pz0) * (id + pz1);
    Eigen::Index best = 0;
    double best_norm = -1;
    for (Eigen::Index k = 0; k < 4; ++k) {
        const double n = proj.col(k).norm();
        if (n > best_norm + 1e-12) {
            best_norm = n;
            best = k;
        }
    }
    const Eigen::Vector4cd phi = proj.col(best) / best_norm;
    Eigen::Matrix4cd u;
    u.col(0) = phi;
    u.col(1) = px1 * phi;
    u.col(2) = px0 * phi;
    u.col(3) = px0 * px1 * phi;
    return u;
}

}  // namespace detail

// Dense unitary; two-qubit gates use basis index 2 * bit(left) + bit(right).
inline Eigen::MatrixXcd gate_unitary(const Gate& g) {
    const double r = 1.0 / std::sqrt(2.0);
    const cplx i(0, 1);
    Eigen::MatrixXcd m;
    switch (g.kind) {
        case GateKind::H: m.resize(2, 2); m << r, r, r, -r; break;
        case GateKind::S: m.resize(2, 2); m << 1, 0, 0, i; break;
        case GateKind::Sdg: m.resize(2, 2); m << 1, 0, 0, -i; break;
        case GateKind::T: m.resize(2, 2); m << 1, 0, 0, std::polar(1.0, M_PI / 4); break;
        case GateKind::Tdg: m.resize(2, 2); m << 1, 0, 0, std::polar(1.0, -M_PI / 4); break;
        case GateKind::CNOT:
            m = Eigen::MatrixXcd::Zero(4, 4);
            if (g.a < g.b) {
                m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
            } else {
                m(0, 0) = m(2, 2) = m(1, 3) = m(3, 1) = 1;
            }
            break;
        case GateKind::Clifford2: m = detail::clifford2_unitary(g.element); break;
    }
    return m;
}

enum class CircuitGeometry { GeneratorLayers, StaircaseUniform };

// generator_layers: each layer walks the qubits left to right and places H, S
// or a CNOT on (q, q+1) with random orientation, chosen uniformly (a CNOT
// consumes two qubits; the last qubit only draws H or S).
// staircase_uniform: each layer places uniformly random two-qubit Cliffords
// on (0,1), (1,2), ..., (n-2, n-1) in that order.
inline Circuit random_clifford_circuit(size_t n, size_t depth, CircuitGeometry geometry, uint64_t seed) {
    if (n == 0) {
        throw InvalidInput("random_clifford_circuit: n must be positive");
    }
    Rng rng(seed);
    Circuit c{n, {}, depth};
    for (size_t layer = 0; layer < depth; ++layer) {
        if (geometry == CircuitGeometry::GeneratorLayers) {
            size_t q = 0;
            while (q < n) {
                const auto pick = rng.uniform_index(q + 1 < n ? 3 : 2);
                const auto uq = static_cast<uint32_t>(q);
                if (pick == 0) {
                    c.gates.push_back(Gate::h(uq));
                } else if (pick == 1) {
                    c.gates.push_back(Gate::s(uq));
                } else {
                    c.gates.push_back(rng.uniform_index(2) == 0 ? Gate::cnot(uq, uq + 1) : Gate::cnot(uq + 1, uq));
                    ++q;
                }
                ++q;
            }
        } else {
            for (size_t q = 0; q + 1 < n; ++q) {
                c.gates.push_back(Gate::clifford2(static_cast<uint32_t>(q),
                                                  static_cast<uint32_t>(rng.uniform_index(kTwoQubitCliffordCount))));
            }
        }
    }
    return c;
}

}  // namespace mpsstab
