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
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mpsstab/clifford.hpp"
#include "mpsstab/errors.hpp"
#include "mpsstab/pauli.hpp"
#include "mpsstab/rng.hpp"

namespace mpsstab {

enum class Gauge { Right, Left, None };

inline constexpr double kGaugeTolerance = 1e-10;
inline constexpr size_t kDenseQubitLimit = 14;

// Singular values below cutoff * (largest singular value) are dropped, then at
// most max_bond are kept.
struct TruncationConfig {
    double cutoff = 1e-12;
    std::optional<size_t> max_bond;

    void validate() const {
        if (!(cutoff >= 0.0 && cutoff < 1.0)) {
            throw InvalidInput("truncation cutoff must lie in [0, 1)");
        }
        if (max_bond && *max_bond < 1) {
            throw InvalidInput("max_bond must be at least 1");
        }
    }
};

// Rank-3 site tensor of shape (left, 2, right), stored as the two matrices
// A^0 and A^1 of shape left x right.
struct SiteTensor {
    std::array<Eigen::MatrixXcd, 2> a;

    Eigen::Index left_dim() const { return a[0].rows(); }
    Eigen::Index right_dim() const { return a[0].cols(); }
};

class MpsState {
  public:
    MpsState() = default;
    MpsState(std::vector<SiteTensor> sites, Gauge gauge) : sites_(std::move(sites)), gauge_(gauge) { check_shapes(); }

    size_t num_sites() const { return sites_.size(); }
    const SiteTensor& site(size_t i) const { return sites_[i]; }
    // Mutable access drops the gauge tag; callers re-declare it.
    SiteTensor& mutable_site(size_t i) {
        gauge_ = Gauge::None;
        return sites_[i];
    }
    const std::vector<SiteTensor>& sites() const { return sites_; }

    Gauge gauge() const { return gauge_; }
    void set_gauge(Gauge g) { gauge_ = g; }

    // chi_0 ... chi_N, with chi_0 = chi_N = 1.
    std::vector<size_t> bond_profile() const {
        std::vector<size_t> bonds;
        bonds.reserve(sites_.size() + 1);
        bonds.push_back(sites_.empty() ? 1 : static_cast<size_t>(sites_.front().left_dim()));
        for (const auto& s : sites_) {
            bonds.push_back(static_cast<size_t>(s.right_dim()));
        }
        return bonds;
    }

    size_t max_bond() const {
        const auto b = bond_profile();
        return *std::max_element(b.begin(), b.end());
    }

    void check_shapes() const {
        for (size_t i = 0; i < sites_.size(); ++i) {
            const auto& s = sites_[i];
            if (s.a[0].rows() != s.a[1].rows() || s.a[0].cols() != s.a[1].cols()) {
                throw InvalidInput("site tensor physical slices differ in shape");
            }
            if (i > 0 && s.left_dim() != sites_[i - 1].right_dim()) {
                throw InvalidInput("bond dimension mismatch at site " + std::to_string(i));
            }
        }
        if (!sites_.empty() && (sites_.front().left_dim() != 1 || sites_.back().right_dim() != 1)) {
            throw InvalidInput("boundary bonds must have dimension 1");
        }
    }

  private:
    std::vector<SiteTensor> sites_;
    Gauge gauge_ = Gauge::None;
};

inline MpsState from_product_state(std::span<const Eigen::Vector2cd> local_vectors) {
    if (local_vectors.empty()) {
        throw InvalidInput("from_product_state: need at least one site");
    }
    std::vector<SiteTensor> sites;
    sites.reserve(local_vectors.size());
    for (const auto& v : local_vectors) {
        if (std::abs(v.norm() - 1.0) > 1e-12) {
            throw InvalidInput("from_product_state: local vector is not normalized");
        }
        SiteTensor t;
        t.a[0] = Eigen::MatrixXcd::Constant(1, 1, v(0));
        t.a[1] = Eigen::MatrixXcd::Constant(1, 1, v(1));
        sites.push_back(std::move(t));
    }
    return MpsState(std::move(sites), Gauge::Right);
}

inline MpsState zero_state(size_t n) {
    std::vector<Eigen::Vector2cd> v(n, Eigen::Vector2cd(1, 0));
    return from_product_state(v);
}

// Largest entry deviation of sum_s A A^dag (right) or sum_s A^dag A (left)
// from the identity, over all sites.
inline double gauge_deviation(const MpsState& state, Gauge g) {
    double worst = 0.0;
    for (const auto& s : state.sites()) {
        Eigen::MatrixXcd acc;
        if (g == Gauge::Right) {
            acc = s.a[0] * s.a[0].adjoint() + s.a[1] * s.a[1].adjoint();
        } else if (g == Gauge::Left) {
            acc = s.a[0].adjoint() * s.a[0] + s.a[1].adjoint() * s.a[1];
        } else {
            return 0.0;
        }
        acc -= Eigen::MatrixXcd::Identity(acc.rows(), acc.cols());
        worst = std::max(worst, acc.cwiseAbs().maxCoeff());
    }
    return worst;
}

// <psi|psi> by transfer matrices; valid in any gauge.
inline double norm_squared(const MpsState& state) {
    Eigen::MatrixXcd env = Eigen::MatrixXcd::Identity(1, 1);
    for (const auto& s : state.sites()) {
        env = s.a[0].adjoint() * env * s.a[0] + s.a[1].adjoint() * env * s.a[1];
    }
    return env(0, 0).real();
}

namespace detail {

inline void check_finite(const MpsState& state) {
    for (const auto& s : state.sites()) {
        if (!s.a[0].allFinite() || !s.a[1].allFinite()) {
            throw InvalidInput("MPS tensor has non-finite entries");
        }
    }
}

}  // namespace detail

// Right-to-left LQ sweep; every site ends up with sum_s A A^dag = 1 and the
// state is scaled to unit norm.
inline MpsState right_normalize(MpsState state) {
    detail::check_finite(state);
    const size_t n = state.num_sites();
    std::vector<SiteTensor> sites = state.sites();
    for (size_t i = n; i-- > 1;) {
        SiteTensor& t = sites[i];
        const Eigen::Index cl = t.left_dim();
        const Eigen::Index cr = t.right_dim();
        Eigen::MatrixXcd m(cl, 2 * cr);
        m << t.a[0], t.a[1];
        // m = L Q from the QR decomposition of m^dag.
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m.adjoint());
        const Eigen::Index k = std::min<Eigen::Index>(cl, 2 * cr);
        const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(2 * cr, k);
        const Eigen::MatrixXcd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
        const Eigen::MatrixXcd qd = q.adjoint();
        t.a[0] = qd.leftCols(cr);
        t.a[1] = qd.rightCols(cr);
        const Eigen::MatrixXcd l = r.adjoint();
        sites[i - 1].a[0] = (sites[i - 1].a[0] * l).eval();
        sites[i - 1].a[1] = (sites[i - 1].a[1] * l).eval();
    }
    if (n > 0) {
        const double nrm = std::sqrt(sites[0].a[0].squaredNorm() + sites[0].a[1].squaredNorm());
        if (!(nrm > 1e-150)) {
            throw DegenerateState("right_normalize: state has zero norm");
        }
        sites[0].a[0] /= nrm;
        sites[0].a[1] /= nrm;
    }
    return MpsState(std::move(sites), Gauge::Right);
}

// Left-to-right QR sweep; every site ends up with sum_s A^dag A = 1.
namespace detail {

// QR sweep that makes sites [0, end) left-orthonormal, pushing the remainder
// into site `end`.
inline void left_orthogonalize_prefix(std::vector<SiteTensor>& sites, size_t end) {
    for (size_t i = 0; i < end; ++i) {
        SiteTensor& t = sites[i];
        const Eigen::Index cl = t.left_dim();
        const Eigen::Index cr = t.right_dim();
        Eigen::MatrixXcd m(2 * cl, cr);
        m << t.a[0], t.a[1];
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
        const Eigen::Index k = std::min<Eigen::Index>(2 * cl, cr);
        const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(2 * cl, k);
        const Eigen::MatrixXcd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
        t.a[0] = q.topRows(cl);
        t.a[1] = q.bottomRows(cl);
        sites[i + 1].a[0] = (r * sites[i + 1].a[0]).eval();
        sites[i + 1].a[1] = (r * sites[i + 1].a[1]).eval();
    }
}

}  // namespace detail

inline MpsState left_normalize(MpsState state) {
    detail::check_finite(state);
    const size_t n = state.num_sites();
    std::vector<SiteTensor> sites = state.sites();
    if (n > 0) {
        detail::left_orthogonalize_prefix(sites, n - 1);
    }
    if (n > 0) {
        auto& last = sites[n - 1];
        const double nrm = std::sqrt(last.a[0].squaredNorm() + last.a[1].squaredNorm());
        if (!(nrm > 1e-150)) {
            throw DegenerateState("left_normalize: state has zero norm");
        }
        last.a[0] /= nrm;
        last.a[1] /= nrm;
    }
    return MpsState(std::move(sites), Gauge::Left);
}

// Site order reversed and every A^s transposed. Maps left gauge to right gauge
// and vice versa; the represented amplitudes are those of the qubit-reversed
// state.
inline MpsState mirror(const MpsState& state) {
    std::vector<SiteTensor> sites;
    sites.reserve(state.num_sites());
    for (size_t i = state.num_sites(); i-- > 0;) {
        SiteTensor t;
        t.a[0] = state.site(i).a[0].transpose();
        t.a[1] = state.site(i).a[1].transpose();
        sites.push_back(std::move(t));
    }
    Gauge g = state.gauge();
    if (g == Gauge::Left) {
        g = Gauge::Right;
    } else if (g == Gauge::Right) {
        g = Gauge::Left;
    }
    return MpsState(std::move(sites), g);
}

namespace detail {

// Same amplitudes with sites (site, site + 1) as the orthogonality center.
// The result has no global gauge.
inline MpsState center_on_pair(const MpsState& state, size_t site) {
    if (state.gauge() == Gauge::Right) {
        std::vector<SiteTensor> sites = state.sites();
        left_orthogonalize_prefix(sites, site);
        return MpsState(std::move(sites), Gauge::None);
    }
    const size_t n = state.num_sites();
    const MpsState m = mirror(state);
    std::vector<SiteTensor> sites = m.sites();
    left_orthogonalize_prefix(sites, n - site - 2);
    return mirror(MpsState(std::move(sites), Gauge::None));
}

}  // namespace detail

namespace detail {

inline void check_unitary(const Eigen::MatrixXcd& g) {
    const Eigen::MatrixXcd d = g.adjoint() * g - Eigen::MatrixXcd::Identity(g.rows(), g.cols());
    if (d.cwiseAbs().maxCoeff() > 1e-10) {
        throw InvalidInput("gate is not unitary within 1e-10");
    }
}

}  // namespace detail

inline void apply_single_qubit_gate(MpsState& state, size_t site, const Eigen::Matrix2cd& gate) {
    if (site >= state.num_sites()) {
        throw InvalidInput("apply_single_qubit_gate: site out of range");
    }
    detail::check_unitary(gate);
    const Gauge g = state.gauge();
    SiteTensor& t = state.mutable_site(site);
    const Eigen::MatrixXcd a0 = gate(0, 0) * t.a[0] + gate(0, 1) * t.a[1];
    const Eigen::MatrixXcd a1 = gate(1, 0) * t.a[0] + gate(1, 1) * t.a[1];
    t.a[0] = a0;
    t.a[1] = a1;
    state.set_gauge(g);
}

namespace detail {

struct ThinSvd {
    Eigen::MatrixXcd u;
    Eigen::VectorXd s;
    Eigen::MatrixXcd v;
};

// Factors pass when they reconstruct m and U has orthonormal columns.
inline bool svd_consistent(const Eigen::MatrixXcd& m, const Eigen::MatrixXcd& u, const Eigen::VectorXd& s,
                           const Eigen::MatrixXcd& v) {
    if (!(s.allFinite() && u.allFinite() && v.allFinite())) {
        return false;
    }
    const double scale = std::max(m.norm(), 1e-300);
    const double recon = (u * s.asDiagonal() * v.adjoint() - m).norm() / scale;
    const double ortho = (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.cols(), u.cols())).norm();
    return recon <= 1e-10 && ortho <= 1e-10;
}

// Divide-and-conquer SVD with a Jacobi fallback: on the highly degenerate
// spectra Clifford circuits produce, the former can return non-finite or
// silently wrong factors, so its output is checked before use.
inline ThinSvd thin_svd(const Eigen::MatrixXcd& m) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd_consistent(m, svd.matrixU(), svd.singularValues(), svd.matrixV())) {
        return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> jac(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (!jac.singularValues().allFinite()) {
        throw NumericalError("SVD failed to converge");
    }
    return {jac.matrixU(), jac.singularValues(), jac.matrixV()};
}

}  // namespace detail

// Applies a 4x4 gate (basis index 2 * s_site + s_{site+1}) to sites
// (site, site + 1) and splits by SVD. Returns the discarded fraction of the
// squared singular-value weight. The kept spectrum is rescaled to preserve the
// norm, and the input gauge is restored. Without a gauge the pair is taken to
// be the orthogonality center.
inline double apply_two_qubit_gate(MpsState& state, size_t site, const Eigen::Matrix4cd& gate,
                                   const TruncationConfig& trunc = {}) {
    if (site + 1 >= state.num_sites()) {
        throw InvalidInput("apply_two_qubit_gate: sites (" + std::to_string(site) + ", " + std::to_string(site + 1) +
                           ") out of range");
    }
    trunc.validate();
    detail::check_unitary(gate);
    const Gauge gauge = state.gauge();
    const SiteTensor left = state.site(site);
    const SiteTensor right = state.site(site + 1);
    const Eigen::Index cl = left.left_dim();
    const Eigen::Index cr = right.right_dim();

    std::array<Eigen::MatrixXcd, 4> pair;
    for (int s1 = 0; s1 < 2; ++s1) {
        for (int s2 = 0; s2 < 2; ++s2) {
            pair[2 * s1 + s2] = left.a[s1] * right.a[s2];
        }
    }
    Eigen::MatrixXcd theta = Eigen::MatrixXcd::Zero(2 * cl, 2 * cr);
    for (int t1 = 0; t1 < 2; ++t1) {
        for (int t2 = 0; t2 < 2; ++t2) {
            auto block = theta.block(t1 * cl, t2 * cr, cl, cr);
            for (int s = 0; s < 4; ++s) {
                const cplx gv = gate(2 * t1 + t2, s);
                if (gv != cplx(0, 0)) {
                    block += gv * pair[s];
                }
            }
        }
    }

    const auto [u_full, sv, v_full] = detail::thin_svd(theta);
    const double total = sv.squaredNorm();
    if (!(total > 0.0)) {
        throw DegenerateState("apply_two_qubit_gate: zero two-site block");
    }
    Eigen::Index keep = 0;
    const double threshold = trunc.cutoff * sv(0);
    while (keep < sv.size() && sv(keep) > threshold) {
        ++keep;
    }
    keep = std::max<Eigen::Index>(keep, 1);
    if (trunc.max_bond) {
        keep = std::min<Eigen::Index>(keep, static_cast<Eigen::Index>(*trunc.max_bond));
    }
    const double kept = sv.head(keep).squaredNorm();
    const double discarded = std::max(0.0, (total - kept) / total);
    // Singular values are Schmidt coefficients only at the orthogonality
    // center, so a lossy cut is redone there.
    const bool centered = gauge == Gauge::None || (gauge == Gauge::Right && site == 0) ||
                          (gauge == Gauge::Left && site + 2 == state.num_sites());
    if (discarded > 1e-14 && !centered) {
        MpsState c = detail::center_on_pair(state, site);
        const double d = apply_two_qubit_gate(c, site, gate, trunc);
        state = gauge == Gauge::Right ? right_normalize(std::move(c)) : left_normalize(std::move(c));
        return d;
    }
    const Eigen::VectorXd s = sv.head(keep) * std::sqrt(total / kept);

    const Eigen::MatrixXcd u = u_full.leftCols(keep);
    const Eigen::MatrixXcd vh = v_full.leftCols(keep).adjoint();
    SiteTensor nl;
    SiteTensor nr;
    for (int t = 0; t < 2; ++t) {
        nl.a[t] = u.middleRows(t * cl, cl);
        nr.a[t] = vh.middleCols(t * cr, cr);
    }
    if (gauge == Gauge::Left) {
        for (int t = 0; t < 2; ++t) {
            nr.a[t] = (s.asDiagonal() * nr.a[t]).eval();
        }
    } else {
        for (int t = 0; t < 2; ++t) {
            nl.a[t] = (nl.a[t] * s.asDiagonal()).eval();
        }
    }
    state.mutable_site(site) = std::move(nl);
    state.mutable_site(site + 1) = std::move(nr);
    state.set_gauge(gauge);
    // Exact for untruncated splits; a lossy cut needs a sweep to restore the gauge.
    if (discarded > 1e-14) {
        if (gauge == Gauge::Right) {
            state = right_normalize(std::move(state));
        } else if (gauge == Gauge::Left) {
            state = left_normalize(std::move(state));
        }
    }
    return discarded;
}

// Returns the discarded weight (zero for one-qubit gates).
inline double apply_gate(MpsState& state, const Gate& g, const TruncationConfig& trunc = {}) {
    validate(g, state.num_sites());
    const Eigen::MatrixXcd u = gate_unitary(g);
    if (g.is_two_qubit()) {
        return apply_two_qubit_gate(state, g.left(), u, trunc);
    }
    apply_single_qubit_gate(state, g.a, u);
    return 0.0;
}

// Applies every gate in order. Throws CapacityError as soon as a bond exceeds
// `bond_cap` (when given). Returns the summed discarded weight.
inline double apply_circuit(MpsState& state, const Circuit& c, const TruncationConfig& trunc = {},
                            std::optional<size_t> bond_cap = std::nullopt) {
    if (c.num_qubits != state.num_sites()) {
        throw InvalidInput("apply_circuit: circuit width does not match the state");
    }
    double discarded = 0.0;
    for (const auto& g : c.gates) {
        discarded += apply_gate(state, g, trunc);
        if (bond_cap && g.is_two_qubit()) {
            const auto chi = static_cast<size_t>(state.site(g.left()).right_dim());
            if (chi > *bond_cap) {
                throw CapacityError("bond dimension " + std::to_string(chi) + " exceeds cap " +
                                    std::to_string(*bond_cap));
            }
        }
    }
    return discarded;
}

// <psi|p|psi>; the sign of p, when set, is applied.
inline double expectation_pauli(const MpsState& state, const PauliString& p) {
    if (p.size() != state.num_sites()) {
        throw InvalidInput("expectation_pauli: string length does not match the state");
    }
    Eigen::MatrixXcd env = Eigen::MatrixXcd::Identity(1, 1);
    for (size_t i = 0; i < state.num_sites(); ++i) {
        const auto& s = state.site(i);
        const Eigen::Matrix2cd sigma = pauli_matrix(p.codes[i]);
        Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(s.right_dim(), s.right_dim());
        for (int r = 0; r < 2; ++r) {
            const Eigen::MatrixXcd left = s.a[r].adjoint() * env;
            for (int c = 0; c < 2; ++c) {
                if (sigma(r, c) != cplx(0, 0)) {
                    next.noalias() += sigma(r, c) * (left * s.a[c]);
                }
            }
        }
        env = std::move(next);
    }
    const cplx e = env(0, 0);
    if (std::abs(e.imag()) > 1e-8) {
        throw NumericalError("expectation_pauli: imaginary part " + std::to_string(e.imag()));
    }
    return p.sign == Sign::Minus ? -e.real() : e.real();
}

// Amplitudes with qubit 0 as the most significant bit of the index.
inline Eigen::VectorXcd to_dense(const MpsState& state, size_t limit = kDenseQubitLimit) {
    if (state.num_sites() > limit) {
        throw CapacityError("to_dense: " + std::to_string(state.num_sites()) + " qubits exceed the limit of " +
                            std::to_string(limit));
    }
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(1, 1);
    for (const auto& s : state.sites()) {
        Eigen::MatrixXcd next(acc.rows() * 2, s.right_dim());
        for (Eigen::Index r = 0; r < acc.rows(); ++r) {
            next.row(2 * r) = acc.row(r) * s.a[0];
            next.row(2 * r + 1) = acc.row(r) * s.a[1];
        }
        acc = std::move(next);
    }
    return acc.col(0);
}

// Random state with bonds min(chi, 2^i, 2^(n-i)), complex Gaussian entries,
// right-normalized.
inline MpsState random_mps(size_t n, size_t chi, uint64_t seed) {
    if (n == 0 || chi == 0) {
        throw InvalidInput("random_mps: n and chi must be positive");
    }
    Rng rng(seed);
    auto gauss = [&rng]() {
        // Box-Muller; u1 in (0, 1].
        const double u1 = 1.0 - rng.uniform_real();
        const double u2 = rng.uniform_real();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    };
    auto bond = [&](size_t i) {
        const size_t edge = std::min(i, n - i);
        return edge >= 63 ? chi : std::min<size_t>(chi, size_t{1} << edge);
    };
    std::vector<SiteTensor> sites(n);
    for (size_t i = 0; i < n; ++i) {
        const auto cl = static_cast<Eigen::Index>(bond(i));
        const auto cr = static_cast<Eigen::Index>(bond(i + 1));
        for (int s = 0; s < 2; ++s) {
            sites[i].a[s].resize(cl, cr);
            for (Eigen::Index r = 0; r < cl; ++r) {
                for (Eigen::Index c = 0; c < cr; ++c) {
                    const double re = gauss();
                    const double im = gauss();
                    sites[i].a[s](r, c) = cplx(re, im);
                }
            }
        }
    }
    return right_normalize(MpsState(std::move(sites), Gauge::None));
}

// Binary layout: "MPS1", N (u32 LE), N+1 bond dimensions (u32 LE), then per
// site the (left, physical, right) entries in row-major order as pairs of
// little-endian IEEE-754 doubles (re, im).
namespace detail {

inline void put_u32(std::ostream& os, uint32_t v) {
    unsigned char b[4];
    for (int k = 0; k < 4; ++k) b[k] = static_cast<unsigned char>(v >> (8 * k));
    os.write(reinterpret_cast<const char*>(b), 4);
}

inline void put_f64(std::ostream& os, double v) {
    const auto bits = std::bit_cast<uint64_t>(v);
    unsigned char b[8];
    for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(bits >> (8 * k));
    os.write(reinterpret_cast<const char*>(b), 8);
}

inline uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4)) throw InvalidInput("MPS file truncated");
    uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= static_cast<uint32_t>(b[k]) << (8 * k);
    return v;
}

inline double get_f64(std::istream& is) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) throw InvalidInput("MPS file truncated");
    uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= static_cast<uint64_t>(b[k]) << (8 * k);
    return std::bit_cast<double>(v);
}

}  // namespace detail

inline void write_mps(std::ostream& os, const MpsState& state) {
    os.write("MPS1", 4);
    detail::put_u32(os, static_cast<uint32_t>(state.num_sites()));
    for (size_t b : state.bond_profile()) {
        detail::put_u32(os, static_cast<uint32_t>(b));
    }
    for (const auto& s : state.sites()) {
        for (Eigen::Index l = 0; l < s.left_dim(); ++l) {
            for (int p = 0; p < 2; ++p) {
                for (Eigen::Index r = 0; r < s.right_dim(); ++r) {
                    detail::put_f64(os, s.a[p](l, r).real());
                    detail::put_f64(os, s.a[p](l, r).imag());
                }
            }
        }
    }
    if (!os) {
        throw Error("write_mps: stream error");
    }
}

// The gauge tag is recovered by checking the right, then the left condition.
inline MpsState read_mps(std::istream& is) {
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "MPS1", 4) != 0) {
        throw InvalidInput("not an MPS1 file");
    }
    const uint32_t n = detail::get_u32(is);
    if (n == 0 || n > (1u << 20)) {
        throw InvalidInput("MPS file: invalid site count");
    }
    std::vector<uint32_t> bonds(n + 1);
    for (auto& b : bonds) {
        b = detail::get_u32(is);
        if (b == 0 || b > (1u << 16)) {
            throw InvalidInput("MPS file: invalid bond dimension");
        }
    }
    if (bonds.front() != 1 || bonds.back() != 1) {
        throw InvalidInput("MPS file: boundary bonds must be 1");
    }
    std::vector<SiteTensor> sites(n);
    for (uint32_t i = 0; i < n; ++i) {
        for (int p = 0; p < 2; ++p) {
            sites[i].a[p].resize(bonds[i], bonds[i + 1]);
        }
        for (uint32_t l = 0; l < bonds[i]; ++l) {
            for (int p = 0; p < 2; ++p) {
                for (uint32_t r = 0; r < bonds[i + 1]; ++r) {
                    const double re = detail::get_f64(is);
                    const double im = detail::get_f64(is);
                    sites[i].a[p](l, r) = cplx(re, im);
                }
            }
        }
    }
    MpsState state(std::move(sites), Gauge::None);
    detail::check_finite(state);
    if (std::abs(norm_squared(state) - 1.0) <= kGaugeTolerance) {
        if (gauge_deviation(state, Gauge::Right) <= kGaugeTolerance) {
            state.set_gauge(Gauge::Right);
        } else if (gauge_deviation(state, Gauge::Left) <= kGaugeTolerance) {
            state.set_gauge(Gauge::Left);
        }
    }
    return state;
}

inline void save_mps(const std::string& path, const MpsState& state) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw InvalidInput("cannot open " + path + " for writing");
    }
    write_mps(os, state);
}

inline MpsState load_mps(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw InvalidInput("cannot open " + path);
    }
    return read_mps(is);
}

}  // namespace mpsstab
