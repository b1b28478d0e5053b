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

#include <algorithm>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "support.hpp"

namespace mpsstab {
namespace {

using testing::random_pauli;

// Generators of U|0...0> for a random Clifford U, with signs.
std::vector<PauliString> random_stabilizer_generators(size_t n, uint64_t seed) {
    const Circuit c = random_clifford_circuit(n, n, CircuitGeometry::StaircaseUniform, seed);
    std::vector<PauliString> gens;
    for (size_t q = 0; q < n; ++q) {
        PauliString z(n);
        z.codes[q] = 3;
        z.sign = Sign::Plus;
        gens.push_back(conjugate(z, c));
    }
    return gens;
}

// Product of a random subset of the generators, with a signed result.
PauliString random_member(const std::vector<PauliString>& gens, Rng& rng) {
    PauliString acc(gens.front().size());
    acc.sign = Sign::Plus;
    for (const auto& g : gens) {
        if (rng.uniform_index(2)) {
            acc = multiply(acc, g);
        }
    }
    return acc;
}

// Rank over GF(2) by plain integer elimination on 0/1 vectors.
size_t reference_rank(const std::vector<PauliString>& rows) {
    std::vector<std::vector<int>> m;
    for (const auto& p : rows) {
        std::vector<int> r;
        for (uint8_t a : p.codes) {
            r.push_back(a == 1 || a == 2);
        }
        for (uint8_t a : p.codes) {
            r.push_back(a == 2 || a == 3);
        }
        m.push_back(r);
    }
    size_t rank = 0;
    const size_t width = m.empty() ? 0 : m.front().size();
    for (size_t c = 0; c < width && rank < m.size(); ++c) {
        size_t piv = rank;
        while (piv < m.size() && m[piv][c] % 2 == 0) {
            ++piv;
        }
        if (piv == m.size()) {
            continue;
        }
        std::swap(m[piv], m[rank]);
        for (size_t i = 0; i < m.size(); ++i) {
            if (i != rank && m[i][c] % 2) {
                for (size_t k = 0; k < width; ++k) {
                    m[i][k] = (m[i][k] + m[rank][k]) % 2;
                }
            }
        }
        ++rank;
    }
    return rank;
}

TEST(Tableau, DependentRows) {
    const std::vector<PauliString> rows = {parse_pauli("ZI"), parse_pauli("IZ"), parse_pauli("ZZ")};
    EXPECT_EQ(*gaussian_eliminate(Tableau::from_strings(2, rows)).rank(), 2u);
    const std::vector<PauliString> dup(7, parse_pauli("XYZ"));
    EXPECT_EQ(*gaussian_eliminate(Tableau::from_strings(3, dup)).rank(), 1u);
    EXPECT_EQ(*gaussian_eliminate(Tableau(4)).rank(), 0u);
}

TEST(Tableau, ReducedRowEchelonForm) {
    Rng rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const size_t n = 2 + rng.uniform_index(7);
        Tableau t(n);
        for (int i = 0; i < 12; ++i) {
            t.add_row(random_pauli(n, rng));
        }
        const Tableau r = gaussian_eliminate(t);
        ASSERT_EQ(r.pivots().size(), r.num_rows());
        for (size_t i = 0; i < r.num_rows(); ++i) {
            if (i > 0) {
                EXPECT_LT(r.pivots()[i - 1], r.pivots()[i]);
            }
            EXPECT_EQ(r.row(i).first_set_column(), r.pivots()[i]);
            for (size_t j = 0; j < r.num_rows(); ++j) {
                EXPECT_EQ(r.row(j).bit(r.pivots()[i]), i == j);
            }
        }
    }
}

TEST(Tableau, RankMatchesReferenceElimination) {
    Rng rng(2);
    const auto gens = random_stabilizer_generators(8, 17);
    std::vector<PauliString> members;
    for (int i = 0; i < 50; ++i) {
        members.push_back(random_member(gens, rng));
    }
    const Tableau t = gaussian_eliminate(Tableau::from_strings(8, members));
    EXPECT_EQ(*t.rank(), reference_rank(members));

    for (int trial = 0; trial < 30; ++trial) {
        std::vector<PauliString> rows;
        const size_t n = 1 + rng.uniform_index(9);
        for (size_t i = 0, k = rng.uniform_index(12); i < k; ++i) {
            rows.push_back(random_pauli(n, rng));
        }
        EXPECT_EQ(*gaussian_eliminate(Tableau::from_strings(n, rows)).rank(), reference_rank(rows));
    }
}

TEST(Tableau, CanonicalFormIncludingSigns) {
    // Different generating sets of the same signed group reduce identically.
    Rng rng(4);
    for (uint64_t seed = 0; seed < 10; ++seed) {
        const auto gens = random_stabilizer_generators(6, seed);
        std::vector<PauliString> other;
        while (true) {
            other.clear();
            for (int i = 0; i < 10; ++i) {
                other.push_back(random_member(gens, rng));
            }
            if (reference_rank(other) == 6) {
                break;
            }
        }
        std::shuffle(other.begin(), other.end(), std::mt19937_64(seed));
        EXPECT_EQ(gaussian_eliminate(Tableau::from_strings(6, gens)),
                  gaussian_eliminate(Tableau::from_strings(6, other)));
    }
}

TEST(Tableau, EliminationIsIdempotent) {
    const auto gens = random_stabilizer_generators(7, 3);
    const Tableau once = gaussian_eliminate(Tableau::from_strings(7, gens));
    const Tableau twice = gaussian_eliminate(once);
    EXPECT_EQ(once, twice);
    for (const auto& g : gens) {
        EXPECT_TRUE(group_membership(once, g));
    }
    for (const auto& g : once.generators()) {
        EXPECT_EQ(group_sign(once, g), g.sign);
    }
}

TEST(Tableau, GroupSignMatchesMatrixProduct) {
    Rng rng(6);
    const auto gens = random_stabilizer_generators(4, 8);
    const Tableau t = gaussian_eliminate(Tableau::from_strings(4, gens));
    for (int trial = 0; trial < 40; ++trial) {
        const PauliString m = random_member(gens, rng);
        const auto s = group_sign(t, PauliString(m.codes));
        ASSERT_TRUE(s.has_value());
        EXPECT_EQ(*s, *m.sign);
    }
    // Signs follow the stabilized state: g|psi> = |psi> for every member.
    const Circuit c = random_clifford_circuit(4, 4, CircuitGeometry::StaircaseUniform, 8);
    oracle::DenseState psi = oracle::zero_state(4);
    oracle::apply_circuit(psi, c);
    for (int trial = 0; trial < 20; ++trial) {
        const PauliString m = random_member(gens, rng);
        EXPECT_LT((pauli_string_matrix(m) * psi.amplitudes - psi.amplitudes).norm(), 1e-10) << m;
    }
}

TEST(Tableau, MembershipAgainstEnumeration) {
    const auto gens = random_stabilizer_generators(8, 21);
    const Tableau t = gaussian_eliminate(Tableau::from_strings(8, gens));
    std::set<std::vector<uint8_t>> group;
    for (uint32_t mask = 0; mask < 256; ++mask) {
        PauliString acc(8);
        for (size_t j = 0; j < 8; ++j) {
            if (mask >> j & 1u) {
                acc = multiply(acc, gens[j]);
            }
        }
        group.insert(acc.codes);
    }
    ASSERT_EQ(group.size(), 256u);
    Rng rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        const PauliString p = random_pauli(8, rng);
        EXPECT_EQ(group_membership(t, p), group.count(p.codes) == 1);
    }
    EXPECT_TRUE(group_membership(t, PauliString(8)));
    EXPECT_TRUE(group_membership(t, gens[3]));
}

TEST(Tableau, InsertAndReduce) {
    Tableau t = gaussian_eliminate(Tableau::from_strings(3, std::vector<PauliString>{parse_pauli("+ZII")}));
    const std::vector<PauliString> spanned = {parse_pauli("+ZII")};
    auto r = insert_and_reduce(t, spanned);
    EXPECT_EQ(r.rank_delta, 0u);
    const std::vector<PauliString> fresh = {parse_pauli("+IZI")};
    r = insert_and_reduce(r.tableau, fresh);
    EXPECT_EQ(r.rank_delta, 1u);
    const std::vector<PauliString> product = {parse_pauli("+ZZI"), parse_pauli("ZZI")};
    EXPECT_EQ(insert_and_reduce(r.tableau, product).rank_delta, 0u);

    const std::vector<PauliString> anti = {parse_pauli("XII")};
    EXPECT_THROW(insert_and_reduce(r.tableau, anti), InconsistencyError);
    const std::vector<PauliString> wrong_sign = {parse_pauli("-ZZI")};
    EXPECT_THROW(insert_and_reduce(r.tableau, wrong_sign), InconsistencyError);
}

TEST(Tableau, TextRoundTrip) {
    const auto gens = random_stabilizer_generators(5, 2);
    const Tableau t = gaussian_eliminate(Tableau::from_strings(5, gens));
    const std::string text = to_text(t);
    EXPECT_EQ(parse_tableau(text), t);
    EXPECT_EQ(to_text(parse_tableau(text)), text);
    const Tableau parsed = parse_tableau("# comment\n+XX\n\n\xE2\x88\x92ZZ\r\n");
    EXPECT_EQ(parsed.num_rows(), 2u);
    EXPECT_EQ(parsed.sign(1), Sign::Minus);
    EXPECT_EQ(parse_tableau("", 4).num_qubits(), 4u);
    EXPECT_THROW(parse_tableau("XX\nXXX\n"), InvalidInput);
    EXPECT_THROW(parse_tableau("XX\n", 3), InvalidInput);
}

}  // namespace
}  // namespace mpsstab
