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

#include <cstddef>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mpsstab/errors.hpp"
#include "mpsstab/pauli.hpp"

namespace mpsstab {

// K signed Pauli rows over N qubits. After gaussian_eliminate the rows are in
// reduced row echelon form (pivots at increasing (x|z) columns, each pivot
// column cleared in every other row), which is a canonical form for the
// row space. Signs are only meaningful when the rows pairwise commute.
class Tableau {
  public:
    Tableau() = default;
    explicit Tableau(size_t num_qubits) : num_qubits_(num_qubits) {}

    static Tableau from_strings(size_t num_qubits, std::span<const PauliString> strings) {
        Tableau t(num_qubits);
        for (const auto& p : strings) {
            t.add_row(p);
        }
        return t;
    }

    size_t num_qubits() const { return num_qubits_; }
    size_t num_rows() const { return rows_.size(); }
    const BitRow& row(size_t i) const { return rows_[i]; }
    Sign sign(size_t i) const { return signs_[i]; }
    void set_sign(size_t i, Sign s) { signs_[i] = s; }

    // Cached by gaussian_eliminate; cleared by any row mutation.
    std::optional<size_t> rank() const { return rank_; }
    bool is_reduced() const { return rank_.has_value(); }

    // Unset signs are stored as +.
    void add_row(const PauliString& p) { add_row(encode(p), p.sign.value_or(Sign::Plus)); }
    void add_row(BitRow r, Sign s) {
        if (r.num_qubits() != num_qubits_) {
            throw InvalidInput("tableau row width mismatch");
        }
        rows_.push_back(std::move(r));
        signs_.push_back(s);
        pivots_.clear();
        rank_.reset();
    }

    PauliString generator(size_t i) const { return decode(rows_[i], signs_[i]); }
    std::vector<PauliString> generators() const {
        std::vector<PauliString> out;
        out.reserve(rows_.size());
        for (size_t i = 0; i < rows_.size(); ++i) {
            out.push_back(generator(i));
        }
        return out;
    }

    // Pivot column of each row; only valid on a reduced tableau.
    const std::vector<size_t>& pivots() const { return pivots_; }

    bool operator==(const Tableau& o) const {
        return num_qubits_ == o.num_qubits_ && rows_ == o.rows_ && signs_ == o.signs_;
    }

  private:
    friend Tableau gaussian_eliminate(Tableau t);

    size_t num_qubits_ = 0;
    std::vector<BitRow> rows_;
    std::vector<Sign> signs_;
    std::vector<size_t> pivots_;
    std::optional<size_t> rank_;
};

namespace detail {

// target <- target * source, with the sign from the Pauli product phase.
inline void row_multiply(BitRow& target, Sign& target_sign, const BitRow& source, Sign source_sign) {
    const unsigned log_i = target.multiply_right(source);
    target_sign = target_sign * source_sign;
    if (log_i == 2 || log_i == 3) {
        target_sign = target_sign * Sign::Minus;
    }
}

}  // namespace detail

// Reduced row echelon form over GF(2). Pivots are chosen at the lowest column
// first, and among candidate rows the lowest index. Zero rows are dropped.
inline Tableau gaussian_eliminate(Tableau t) {
    const size_t width = 2 * t.num_qubits_;
    auto& rows = t.rows_;
    auto& signs = t.signs_;
    size_t r = 0;
    std::vector<size_t> pivots;
    for (size_t c = 0; c < width && r < rows.size(); ++c) {
        size_t j = r;
        while (j < rows.size() && !rows[j].bit(c)) {
            ++j;
        }
        if (j == rows.size()) {
            continue;
        }
        std::swap(rows[r], rows[j]);
        std::swap(signs[r], signs[j]);
        for (size_t i = 0; i < rows.size(); ++i) {
            if (i != r && rows[i].bit(c)) {
                detail::row_multiply(rows[i], signs[i], rows[r], signs[r]);
            }
        }
        pivots.push_back(c);
        ++r;
    }
    rows.resize(r);
    signs.resize(r);
    t.pivots_ = std::move(pivots);
    t.rank_ = r;
    return t;
}

// Reduces `p` against a reduced tableau. Returns the residual row and the sign
// of the group element (product of generators) that was divided out, i.e. the
// residual is zero iff p is in the row space, and then p = sign * product.
struct Residual {
    BitRow row;
    Sign group_sign = Sign::Plus;
};

inline Residual reduce_against(const Tableau& t, const PauliString& p) {
    if (!t.is_reduced()) {
        throw InvalidInput("reduce_against: tableau is not reduced");
    }
    if (p.size() != t.num_qubits()) {
        throw InvalidInput("reduce_against: width mismatch");
    }
    // Accumulate the product of the used generators separately so its sign is
    // independent of the order the residual is peeled.
    Residual res{encode(p), Sign::Plus};
    BitRow product(t.num_qubits());
    Sign product_sign = Sign::Plus;
    for (size_t i = 0; i < t.num_rows(); ++i) {
        if (res.row.bit(t.pivots()[i])) {
            res.row ^= t.row(i);
            detail::row_multiply(product, product_sign, t.row(i), t.sign(i));
        }
    }
    res.group_sign = product_sign;
    return res;
}

inline bool group_membership(const Tableau& t, const PauliString& p) {
    if (!t.is_reduced()) {
        return reduce_against(gaussian_eliminate(t), p).row.is_zero();
    }
    return reduce_against(t, p).row.is_zero();
}

// Sign that the signed group assigns to p, or nullopt when p is not a member.
inline std::optional<Sign> group_sign(const Tableau& t, const PauliString& p) {
    Residual res = reduce_against(t.is_reduced() ? t : gaussian_eliminate(t), p);
    if (!res.row.is_zero()) {
        return std::nullopt;
    }
    return res.group_sign;
}

struct InsertResult {
    Tableau tableau;
    size_t rank_delta = 0;
};

// Adds rows to a stabilizer tableau and reduces. Rows must commute with every
// stored generator; a row already in the span must agree with the sign the
// group assigns to it when its own sign is set.
inline InsertResult insert_and_reduce(Tableau t, std::span<const PauliString> new_rows) {
    if (!t.is_reduced()) {
        t = gaussian_eliminate(std::move(t));
    }
    const size_t before = *t.rank();
    for (const auto& p : new_rows) {
        if (p.size() != t.num_qubits()) {
            throw InvalidInput("insert_and_reduce: width mismatch");
        }
        const BitRow enc = encode(p);
        for (size_t i = 0; i < t.num_rows(); ++i) {
            if (symplectic_product(enc, t.row(i))) {
                throw InconsistencyError("inserted row " + to_string(p) + " anticommutes with generator " +
                                         to_string(t.generator(i)));
            }
        }
        Residual res = reduce_against(t, p);
        if (res.row.is_zero()) {
            if (p.sign && *p.sign != res.group_sign) {
                throw InconsistencyError("inserted row " + to_string(p) + " contradicts the sign implied by the group");
            }
            continue;
        }
        t.add_row(p);
        t = gaussian_eliminate(std::move(t));
    }
    const size_t delta = *t.rank() - before;
    return {std::move(t), delta};
}

// One generator per line in the Pauli text form.
inline std::string to_text(const Tableau& t) {
    std::string out;
    for (size_t i = 0; i < t.num_rows(); ++i) {
        out += to_string(t.generator(i));
        out.push_back('\n');
    }
    return out;
}

// Blank lines and lines starting with '#' are skipped. An empty input needs
// `num_qubits` to size the tableau.
inline Tableau parse_tableau(std::string_view text, std::optional<size_t> num_qubits = std::nullopt) {
    std::vector<PauliString> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        rows.push_back(parse_pauli(line));
        if (rows.back().size() != rows.front().size()) {
            throw InvalidInput("tableau text: rows of different length");
        }
    }
    const size_t n = rows.empty() ? num_qubits.value_or(0) : rows.front().size();
    if (num_qubits && *num_qubits != n) {
        throw InvalidInput("tableau text: expected " + std::to_string(*num_qubits) + " qubits");
    }
    return Tableau::from_strings(n, rows);
}

}  // namespace mpsstab
