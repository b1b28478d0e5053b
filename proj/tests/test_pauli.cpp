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

#include <gtest/gtest.h>

#include "support.hpp"

namespace mpsstab {
namespace {

using testing::random_pauli;

TEST(Pauli, EncodingTable) {
    const PauliString p = parse_pauli("IXYZ");
    const BitRow r = encode(p);
    EXPECT_FALSE(r.x(0));
    EXPECT_FALSE(r.z(0));
    EXPECT_TRUE(r.x(1));
    EXPECT_FALSE(r.z(1));
    EXPECT_TRUE(r.x(2));
    EXPECT_TRUE(r.z(2));
    EXPECT_FALSE(r.x(3));
    EXPECT_TRUE(r.z(3));
}

TEST(Pauli, EncodeDecodeRoundTrip) {
    Rng rng(3);
    for (size_t n : {1, 5, 63, 64, 65, 130}) {
        const PauliString p = random_pauli(n, rng, true);
        EXPECT_EQ(decode(encode(p), p.sign), p);
    }
}

TEST(Pauli, SymplecticProductOfSingleQubits) {
    const char* letters[] = {"I", "X", "Y", "Z"};
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            const bool anti = a != 0 && b != 0 && a != b;
            EXPECT_EQ(symplectic_product(encode(parse_pauli(letters[a])), encode(parse_pauli(letters[b]))), anti)
                << letters[a] << letters[b];
        }
    }
}

TEST(Pauli, CommutationMatchesMatrices) {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const size_t n = 1 + rng.uniform_index(4);
        const PauliString a = random_pauli(n, rng);
        const PauliString b = random_pauli(n, rng);
        const Eigen::MatrixXcd ma = pauli_string_matrix(a);
        const Eigen::MatrixXcd mb = pauli_string_matrix(b);
        const bool matrices_commute = (ma * mb - mb * ma).norm() < 1e-12;
        EXPECT_EQ(commutes(a, b), matrices_commute);
    }
}

TEST(Pauli, SingleQubitProducts) {
    EXPECT_EQ(multiply(parse_pauli("X"), parse_pauli("X")), parse_pauli("+I"));
    EXPECT_EQ(multiply(parse_pauli("XX"), parse_pauli("ZZ")), parse_pauli("-YY"));
    EXPECT_EQ(multiply(parse_pauli("XY"), parse_pauli("YX")), parse_pauli("+ZZ"));
    EXPECT_EQ(multiply(parse_pauli("-ZI"), parse_pauli("-IZ")), parse_pauli("+ZZ"));
    EXPECT_THROW(multiply(parse_pauli("X"), parse_pauli("Z")), InvalidInput);
}

TEST(Pauli, SignedProductMatchesMatrices) {
    Rng rng(5);
    int checked = 0;
    while (checked < 300) {
        const size_t n = 1 + rng.uniform_index(4);
        const PauliString a = random_pauli(n, rng, true);
        const PauliString b = random_pauli(n, rng, true);
        if (!commutes(a, b)) {
            continue;
        }
        const PauliString c = multiply(a, b);
        const Eigen::MatrixXcd expect = pauli_string_matrix(a) * pauli_string_matrix(b);
        EXPECT_LT((pauli_string_matrix(c) - expect).norm(), 1e-12) << a << " * " << b << " = " << c;
        ++checked;
    }
}

TEST(Pauli, MultiplyRightPhaseAcrossWords) {
    // Phases must accumulate correctly when the row spans several words.
    Rng rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const size_t n = 60 + rng.uniform_index(80);
        const PauliString a = random_pauli(n, rng);
        const PauliString b = random_pauli(n, rng);
        BitRow r = encode(a);
        const unsigned log_i = r.multiply_right(encode(b));
        unsigned expect = 0;
        for (size_t q = 0; q < n; ++q) {
            const PauliString qa(std::vector<uint8_t>{a.codes[q]});
            const PauliString qb(std::vector<uint8_t>{b.codes[q]});
            BitRow one = encode(qa);
            expect += one.multiply_right(encode(qb));
        }
        EXPECT_EQ(log_i, expect % 4);
    }
}

TEST(Pauli, TextRoundTrip) {
    EXPECT_EQ(to_string(parse_pauli("+XYZI")), "+XYZI");
    EXPECT_EQ(to_string(parse_pauli("-XYZI")), "-XYZI");
    EXPECT_EQ(to_string(parse_pauli("XYZI")), "XYZI");
    EXPECT_EQ(parse_pauli("\xE2\x88\x92ZZ"), parse_pauli("-ZZ"));
    EXPECT_EQ(parse_pauli("X_Z"), parse_pauli("XIZ"));
    EXPECT_THROW(parse_pauli("XQ"), InvalidInput);
    EXPECT_THROW(PauliString(std::vector<uint8_t>{4}), InvalidInput);
}

TEST(Pauli, FirstSetColumnAndOrder) {
    EXPECT_EQ(encode(parse_pauli("IIZ")).first_set_column(), 5u);
    EXPECT_EQ(encode(parse_pauli("IXZ")).first_set_column(), 1u);
    EXPECT_EQ(encode(parse_pauli("III")).first_set_column(), 6u);
    EXPECT_TRUE(encode(parse_pauli("IZ")) < encode(parse_pauli("XI")));
}

}  // namespace
}  // namespace mpsstab
