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

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "mpsstab/errors.hpp"

namespace mpsstab {

enum class Sign : int8_t { Plus = 1, Minus = -1 };

inline Sign operator*(Sign a, Sign b) { return a == b ? Sign::Plus : Sign::Minus; }

// A Hermitian N-qubit Pauli string. codes[j] in {0,1,2,3} is sigma^codes[j]
// (I, X, Y, Z) on qubit j. The sign stays unset until it has been verified
// against a state or derived from signed inputs.
struct PauliString {
    std::vector<uint8_t> codes;
    std::optional<Sign> sign;

    PauliString() = default;
    explicit PauliString(size_t num_qubits) : codes(num_qubits, 0) {}
    PauliString(std::vector<uint8_t> c, std::optional<Sign> s = std::nullopt) : codes(std::move(c)), sign(s) {
        for (uint8_t a : codes) {
            if (a > 3) {
                throw InvalidInput("Pauli code out of range: " + std::to_string(a));
            }
        }
    }

    size_t size() const { return codes.size(); }

    bool is_identity() const {
        return std::all_of(codes.begin(), codes.end(), [](uint8_t a) { return a == 0; });
    }

    // Codes only; signs are ignored.
    bool same_operator(const PauliString& other) const { return codes == other.codes; }

    bool operator==(const PauliString&) const = default;
};

// One GF(2) row of width 2N in (x|z) layout, packed 64 qubits per word.
// Encoding: I -> (0,0), X -> (1,0), Y -> (1,1), Z -> (0,1).
class BitRow {
  public:
    BitRow() = default;
    explicit BitRow(size_t num_qubits)
        : num_qubits_(num_qubits), xs_(num_words(num_qubits), 0), zs_(num_words(num_qubits), 0) {}

    static size_t num_words(size_t num_qubits) { return (num_qubits + 63) / 64; }

    size_t num_qubits() const { return num_qubits_; }
    size_t width() const { return 2 * num_qubits_; }

    bool x(size_t q) const { return (xs_[q >> 6] >> (q & 63)) & 1u; }
    bool z(size_t q) const { return (zs_[q >> 6] >> (q & 63)) & 1u; }
    void set_x(size_t q, bool v) { set_bit(xs_, q, v); }
    void set_z(size_t q, bool v) { set_bit(zs_, q, v); }

    // Column c of the (x|z) layout.
    bool bit(size_t c) const { return c < num_qubits_ ? x(c) : z(c - num_qubits_); }

    BitRow& operator^=(const BitRow& o) {
        for (size_t w = 0; w < xs_.size(); ++w) {
            xs_[w] ^= o.xs_[w];
            zs_[w] ^= o.zs_[w];
        }
        return *this;
    }

    bool is_zero() const {
        for (size_t w = 0; w < xs_.size(); ++w) {
            if (xs_[w] | zs_[w]) {
                return false;
            }
        }
        return true;
    }

    // Lowest set column in (x|z) order, or width() if the row is zero.
    size_t first_set_column() const {
        for (size_t w = 0; w < xs_.size(); ++w) {
            if (xs_[w]) {
                return w * 64 + std::countr_zero(xs_[w]);
            }
        }
        for (size_t w = 0; w < zs_.size(); ++w) {
            if (zs_[w]) {
                return num_qubits_ + w * 64 + std::countr_zero(zs_[w]);
            }
        }
        return width();
    }

    // Replaces this row by the product this * rhs of the Hermitian Pauli
    // operators they encode and returns k such that the operator product
    // equals i^k times the Hermitian Pauli of the new row.
    unsigned multiply_right(const BitRow& rhs) {
        unsigned total = 0;
        for (size_t w = 0; w < xs_.size(); ++w) {
            const uint64_t x1 = xs_[w];
            const uint64_t z1 = zs_[w];
            const uint64_t x2 = rhs.xs_[w];
            const uint64_t z2 = rhs.zs_[w];
            const uint64_t nx = x1 ^ x2;
            const uint64_t nz = z1 ^ z2;
            const uint64_t x1z2 = x1 & z2;
            // Each anticommuting qubit contributes +i, or -i where `neg` is set.
            const uint64_t anti = (x2 & z1) ^ x1z2;
            const uint64_t neg = (nx ^ nz ^ x1z2) & anti;
            total += std::popcount(anti) + 2 * std::popcount(neg);
            xs_[w] = nx;
            zs_[w] = nz;
        }
        return total & 3u;
    }

    const std::vector<uint64_t>& x_words() const { return xs_; }
    const std::vector<uint64_t>& z_words() const { return zs_; }

    bool operator==(const BitRow&) const = default;
    // Lexicographic on (x|z) columns.
    bool operator<(const BitRow& o) const {
        for (size_t c = 0; c < width(); ++c) {
            if (bit(c) != o.bit(c)) {
                return o.bit(c);
            }
        }
        return false;
    }

  private:
    static void set_bit(std::vector<uint64_t>& words, size_t q, bool v) {
        const uint64_t mask = uint64_t{1} << (q & 63);
        if (v) {
            words[q >> 6] |= mask;
        } else {
            words[q >> 6] &= ~mask;
        }
    }

    size_t num_qubits_ = 0;
    std::vector<uint64_t> xs_;
    std::vector<uint64_t> zs_;
};

inline BitRow encode(const PauliString& p) {
    BitRow row(p.size());
    for (size_t q = 0; q < p.size(); ++q) {
        const uint8_t a = p.codes[q];
        row.set_x(q, a == 1 || a == 2);
        row.set_z(q, a == 2 || a == 3);
    }
    return row;
}

inline PauliString decode(const BitRow& row, std::optional<Sign> sign = std::nullopt) {
    static constexpr uint8_t table[2][2] = {{0, 3}, {1, 2}};
    PauliString p(row.num_qubits());
    for (size_t q = 0; q < row.num_qubits(); ++q) {
        p.codes[q] = table[row.x(q)][row.z(q)];
    }
    p.sign = sign;
    return p;
}

// 0 iff the two encoded Pauli strings commute.
inline bool symplectic_product(const BitRow& a, const BitRow& b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw InvalidInput("symplectic_product: width mismatch");
    }
    uint64_t acc = 0;
    const auto& ax = a.x_words();
    const auto& az = a.z_words();
    const auto& bx = b.x_words();
    const auto& bz = b.z_words();
    for (size_t w = 0; w < ax.size(); ++w) {
        acc ^= (ax[w] & bz[w]) ^ (az[w] & bx[w]);
    }
    return std::popcount(acc) & 1;
}

inline bool commutes(const PauliString& a, const PauliString& b) { return !symplectic_product(encode(a), encode(b)); }

// Signed product a*b of two commuting signed strings. Unset signs count as +.
inline PauliString multiply(const PauliString& a, const PauliString& b) {
    BitRow row = encode(a);
    const unsigned log_i = row.multiply_right(encode(b));
    if (log_i & 1u) {
        throw InvalidInput("multiply: anticommuting operands give a non-Hermitian product");
    }
    Sign s = a.sign.value_or(Sign::Plus) * b.sign.value_or(Sign::Plus);
    if (log_i == 2) {
        s = s * Sign::Minus;
    }
    return decode(row, s);
}

// Text form: optional '+' or '-', then one of I, X, Y, Z per qubit.
inline std::string to_string(const PauliString& p) {
    static constexpr char letters[] = {'I', 'X', 'Y', 'Z'};
    std::string out;
    out.reserve(p.size() + 1);
    if (p.sign) {
        out.push_back(*p.sign == Sign::Plus ? '+' : '-');
    }
    for (uint8_t a : p.codes) {
        out.push_back(letters[a]);
    }
    return out;
}

// Accepts ASCII '-' and U+2212 as the minus sign.
inline PauliString parse_pauli(std::string_view text) {
    PauliString p;
    if (text.starts_with("\xE2\x88\x92")) {
        p.sign = Sign::Minus;
        text.remove_prefix(3);
    } else if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
        p.sign = text.front() == '+' ? Sign::Plus : Sign::Minus;
        text.remove_prefix(1);
    }
    p.codes.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case 'I': case '_': p.codes.push_back(0); break;
            case 'X': p.codes.push_back(1); break;
            case 'Y': p.codes.push_back(2); break;
            case 'Z': p.codes.push_back(3); break;
            default: throw InvalidInput(std::string("invalid Pauli character '") + c + "'");
        }
    }
    return p;
}

inline std::ostream& operator<<(std::ostream& os, const PauliString& p) { return os << to_string(p); }

}  // namespace mpsstab
