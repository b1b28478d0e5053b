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

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "mpsstab/mpsstab.hpp"
#include "mpsstab/oracle.hpp"

namespace mpsstab::testing {

inline PauliString random_pauli(size_t n, Rng& rng, bool with_sign = false) {
    PauliString p(n);
    for (auto& c : p.codes) {
        c = static_cast<uint8_t>(rng.uniform_index(4));
    }
    if (with_sign) {
        p.sign = rng.uniform_index(2) ? Sign::Minus : Sign::Plus;
    }
    return p;
}

// Staircase of uniform two-qubit Cliffords, deep enough to entangle every cut.
inline MpsState random_stabilizer_state(size_t n, uint64_t seed) {
    MpsState s = zero_state(n);
    apply_circuit(s, random_clifford_circuit(n, n, CircuitGeometry::StaircaseUniform, seed));
    return s;
}

// Staircase-scrambled |0>^(n-nt) |T>^nt; stabilizer rank is exactly n - nt.
inline MpsState entangled_doped_state(size_t n, size_t nt, uint64_t seed) {
    std::vector<Eigen::Vector2cd> local(n, Eigen::Vector2cd(1, 0));
    for (size_t q = n - nt; q < n; ++q) {
        local[q] = t_state();
    }
    MpsState s = from_product_state(local);
    apply_circuit(s, random_clifford_circuit(n, n, CircuitGeometry::StaircaseUniform, seed));
    return s;
}

inline Eigen::MatrixXcd dense_circuit_unitary(const Circuit& c) {
    const Eigen::Index dim = Eigen::Index{1} << c.num_qubits;
    Eigen::MatrixXcd u(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        oracle::DenseState s;
        s.amplitudes = Eigen::VectorXcd::Zero(dim);
        s.amplitudes(col) = 1;
        oracle::apply_circuit(s, c);
        u.col(col) = s.amplitudes;
    }
    return u;
}

}  // namespace mpsstab::testing
