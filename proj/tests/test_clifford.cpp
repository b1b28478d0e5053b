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

#include <set>

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include "support.hpp"

namespace mpsstab {
namespace {

using testing::random_pauli;

const std::vector<Gate> kSingleQubitCliffords = {Gate::h(0), Gate::s(0), Gate::sdg(0)};

PauliString conj1(const char* p, const Gate& g) {
    PauliString q = parse_pauli(p);
    conjugate_in_place(q, g);
    return q;
}

TEST(Clifford, TextbookConjugations) {
    EXPECT_EQ(conj1("X", Gate::h(0)), parse_pauli("+Z"));
    EXPECT_EQ(conj1("Y", Gate::h(0)), parse_pauli("-Y"));
    EXPECT_EQ(conj1("X", Gate::s(0)), parse_pauli("+Y"));
    EXPECT_EQ(conj1("Y", Gate::s(0)), parse_pauli("-X"));
    EXPECT_EQ(conj1("X", Gate::sdg(0)), parse_pauli("-Y"));
    EXPECT_EQ(conj1("XI", Gate::cnot(0, 1)), parse_pauli("+XX"));
    EXPECT_EQ(conj1("IZ", Gate::cnot(0, 1)), parse_pauli("+ZZ"));
    EXPECT_EQ(conj1("IX", Gate::cnot(0, 1)), parse_pauli("+IX"));
    EXPECT_EQ(conj1("IX", Gate::cnot(1, 0)), parse_pauli("+XX"));
    EXPECT_THROW(conj1("X", Gate::t(0)), InvalidInput);
}

TEST(Clifford, SingleGateUnitaries) {
    const cplx i(0, 1);
    Eigen::Matrix2cd t;
    t << 1, 0, 0, std::polar(1.0, M_PI / 4);
    EXPECT_LT((gate_unitary(Gate::t(0)) - t).norm(), 1e-15);
    Eigen::Matrix2cd h;
    h << 1, 1, 1, -1;
    EXPECT_LT((gate_unitary(Gate::h(0)) - h / std::sqrt(2.0)).norm(), 1e-15);
    Eigen::Matrix2cd s;
    s << 1, 0, 0, i;
    EXPECT_LT((gate_unitary(Gate::s(0)) - s).norm(), 1e-15);
    Eigen::Matrix4cd cx = Eigen::Matrix4cd::Zero();
    cx(0, 0) = cx(1, 1) = cx(2, 3) = cx(3, 2) = 1;
    EXPECT_LT((gate_unitary(Gate::cnot(0, 1)) - cx).norm(), 1e-15);
}

void expect_action_matches_matrix(const Gate& g, size_t width) {
    const Eigen::MatrixXcd u = gate_unitary(g);
    ASSERT_LT((u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).norm(), 1e-12);
    const uint64_t count = uint64_t{1} << (2 * width);
    for (uint64_t idx = 0; idx < count; ++idx) {
        const PauliString p = oracle::pauli_from_index(width, idx);
        PauliString q = p;
        conjugate_in_place(q, g);
        const Eigen::MatrixXcd expect = u * pauli_string_matrix(p) * u.adjoint();
        ASSERT_LT((pauli_string_matrix(q) - expect).norm(), 1e-12) << "gate kind " << int(g.kind) << " on " << p;
    }
}

TEST(Clifford, OneQubitActionsMatchMatrices) {
    for (const auto& g : kSingleQubitCliffords) {
        expect_action_matches_matrix(g, 1);
    }
    expect_action_matches_matrix(Gate::cnot(0, 1), 2);
    expect_action_matches_matrix(Gate::cnot(1, 0), 2);
}

TEST(Clifford, EveryTwoQubitElementMatchesItsUnitary) {
    for (uint32_t e = 0; e < kTwoQubitCliffordCount; ++e) {
        expect_action_matches_matrix(Gate::clifford2(0, e), 2);
        if (::testing::Test::HasFatalFailure()) {
            FAIL() << "element " << e;
        }
    }
}

TEST(Clifford, TwoQubitGroupIsComplete) {
    std::set<std::vector<int8_t>> seen;
    for (uint32_t e = 0; e < kTwoQubitCliffordCount; ++e) {
        const auto images = two_qubit_clifford_images(e);
        std::vector<int8_t> key;
        for (const auto& p : images) {
            key.insert(key.end(), p.codes.begin(), p.codes.end());
            key.push_back(static_cast<int8_t>(*p.sign));
        }
        seen.insert(key);
        // Commutation relations of (X0, Z0, X1, Z1) are preserved.
        EXPECT_FALSE(commutes(images[0], images[1]));
        EXPECT_FALSE(commutes(images[2], images[3]));
        EXPECT_TRUE(commutes(images[0], images[2]));
        EXPECT_TRUE(commutes(images[0], images[3]));
        EXPECT_TRUE(commutes(images[1], images[2]));
        EXPECT_TRUE(commutes(images[1], images[3]));
    }
    EXPECT_EQ(seen.size(), kTwoQubitCliffordCount);
}

TEST(Clifford, TwoQubitInverse) {
    for (uint32_t e = 0; e < kTwoQubitCliffordCount; e += 7) {
        const Circuit c{2, {Gate::clifford2(0, e), Gate::clifford2(0, two_qubit_clifford_inverse(e))}, 2};
        for (uint64_t idx = 0; idx < 16; ++idx) {
            PauliString p = oracle::pauli_from_index(2, idx);
            p.sign = Sign::Plus;
            EXPECT_EQ(conjugate(p, c), p);
        }
    }
}

TEST(Clifford, CircuitConjugationMatchesDenseUnitary) {
    Rng rng(12);
    for (uint64_t seed = 0; seed < 8; ++seed) {
        const auto geometry = seed % 2 ? CircuitGeometry::StaircaseUniform : CircuitGeometry::GeneratorLayers;
        const Circuit c = random_clifford_circuit(4, 3, geometry, seed);
        const Eigen::MatrixXcd u = testing::dense_circuit_unitary(c);
        for (int trial = 0; trial < 10; ++trial) {
            const PauliString p = random_pauli(4, rng, true);
            const PauliString q = conjugate(p, c);
            EXPECT_LT((pauli_string_matrix(q) - u * pauli_string_matrix(p) * u.adjoint()).norm(), 1e-10);
        }
    }
}

TEST(Clifford, GroupActionAndInverse) {
    Rng rng(13);
    for (uint64_t seed = 0; seed < 20; ++seed) {
        const size_t n = 2 + seed % 7;
        const Circuit c1 = random_clifford_circuit(n, 2, CircuitGeometry::GeneratorLayers, seed);
        const Circuit c2 = random_clifford_circuit(n, 2, CircuitGeometry::StaircaseUniform, seed + 100);
        PauliString p = random_pauli(n, rng, true);
        EXPECT_EQ(conjugate(p, compose(c1, c2)), conjugate(conjugate(p, c1), c2));
        EXPECT_EQ(conjugate(conjugate(p, c2), inverse(c2)), p);
        const PauliString a = random_pauli(n, rng);
        const PauliString b = random_pauli(n, rng);
        EXPECT_EQ(commutes(a, b), commutes(conjugate(a, c1), conjugate(b, c1)));
    }
}

TEST(Clifford, RandomCircuitShapes) {
    EXPECT_TRUE(random_clifford_circuit(5, 0, CircuitGeometry::GeneratorLayers, 1).gates.empty());
    EXPECT_EQ(random_clifford_circuit(6, 3, CircuitGeometry::GeneratorLayers, 9),
              random_clifford_circuit(6, 3, CircuitGeometry::GeneratorLayers, 9));
    EXPECT_NE(random_clifford_circuit(6, 3, CircuitGeometry::GeneratorLayers, 9),
              random_clifford_circuit(6, 3, CircuitGeometry::GeneratorLayers, 10));
    const Circuit gl = random_clifford_circuit(7, 5, CircuitGeometry::GeneratorLayers, 2);
    for (const auto& g : gl.gates) {
        EXPECT_TRUE(g.kind == GateKind::H || g.kind == GateKind::S || g.kind == GateKind::CNOT);
        EXPECT_NO_THROW(validate(g, 7));
    }
    const Circuit st = random_clifford_circuit(5, 2, CircuitGeometry::StaircaseUniform, 3);
    ASSERT_EQ(st.gates.size(), 8u);
    for (size_t j = 0; j < st.gates.size(); ++j) {
        EXPECT_EQ(st.gates[j].kind, GateKind::Clifford2);
        EXPECT_EQ(st.gates[j].left(), j % 4);
    }
    EXPECT_THROW(validate(Gate::cnot(0, 2), 3), InvalidInput);
    EXPECT_THROW(validate(Gate::h(3), 3), InvalidInput);
}

TEST(Clifford, StaircaseElementsAreUniform) {
    // 10^4 draws, elements pooled into 96 equal classes of 120 indices.
    const Circuit c = random_clifford_circuit(2, 10000, CircuitGeometry::StaircaseUniform, 42);
    std::vector<double> counts(96, 0.0);
    for (const auto& g : c.gates) {
        counts[g.element / 120] += 1;
    }
    const double expected = 10000.0 / 96;
    double stat = 0;
    for (double k : counts) {
        stat += (k - expected) * (k - expected) / expected;
    }
    const boost::math::chi_squared dist(95);
    EXPECT_GT(boost::math::cdf(boost::math::complement(dist, stat)), 0.01) << "chi2 = " << stat;
}

}  // namespace
}  // namespace mpsstab
