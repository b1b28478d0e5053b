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
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mpsstab/clifford.hpp"
#include "mpsstab/errors.hpp"
#include "mpsstab/mps.hpp"
#include "mpsstab/pauli.hpp"
#include "mpsstab/rng.hpp"

namespace mpsstab {

enum class Direction { Forward, Backward };

struct SamplerConfig {
    size_t max_branches = 1000;  // M
    Direction direction = Direction::Forward;
    double prune_slack = 1e-10;
    double accept_tol = 1e-8;
    uint64_t seed = 0;

    void validate() const {
        if (max_branches < 1) {
            throw InvalidInput("max_branches must be at least 1");
        }
        if (!(prune_slack >= 0 && prune_slack <= 1e-4) || !(accept_tol >= 0 && accept_tol <= 1e-4)) {
            throw InvalidInput("sampler slacks must lie in [0, 1e-4]");
        }
    }
};

// One sampling hypothesis after i sites: the Pauli prefix, log of its partial
// probability, and the environment L (chi_i x chi_i, unit Frobenius norm).
struct Branch {
    std::vector<uint8_t> prefix;
    double log_prob = 0.0;
    Eigen::MatrixXcd environment = Eigen::MatrixXcd::Identity(1, 1);

    double partial_prob() const { return std::exp(log_prob); }
};

namespace detail {

// M_alpha = sum_{s', s} sigma^alpha_{s' s} (A^{s'})^dag L A^s for the four
// Paulis, given B^s = L A^s.
inline std::array<Eigen::MatrixXcd, 4> pauli_transfer(const SiteTensor& t, const Eigen::MatrixXcd& b0,
                                                      const Eigen::MatrixXcd& b1) {
    const Eigen::MatrixXcd c00 = t.a[0].adjoint() * b0;
    const Eigen::MatrixXcd c11 = t.a[1].adjoint() * b1;
    const Eigen::MatrixXcd c01 = t.a[0].adjoint() * b1;
    const Eigen::MatrixXcd c10 = t.a[1].adjoint() * b0;
    const cplx i(0, 1);
    return {c00 + c11, c01 + c10, i * (c10 - c01), c00 - c11};
}

// Only the matrix for one alpha; two products instead of four.
inline Eigen::MatrixXcd pauli_transfer_one(const SiteTensor& t, const Eigen::MatrixXcd& b0, const Eigen::MatrixXcd& b1,
                                           uint8_t alpha) {
    const cplx i(0, 1);
    switch (alpha) {
        case 0: return t.a[0].adjoint() * b0 + t.a[1].adjoint() * b1;
        case 1: return t.a[0].adjoint() * b1 + t.a[1].adjoint() * b0;
        case 2: return i * (t.a[1].adjoint() * b0 - t.a[0].adjoint() * b1);
        case 3: return t.a[0].adjoint() * b0 - t.a[1].adjoint() * b1;
        default: throw InvalidInput("Pauli code out of range");
    }
}

inline void check_conditionals(const std::array<double, 4>& p) {
    const double sum = p[0] + p[1] + p[2] + p[3];
    if (std::abs(sum - 1.0) > 1e-6 || !std::isfinite(sum)) {
        throw NumericalError("conditional probabilities sum to " + std::to_string(sum) +
                             "; is the state right-normalized?");
    }
}

inline std::array<double, 4> conditionals_from_norms(const std::array<Eigen::MatrixXcd, 4>& m) {
    std::array<double, 4> p{};
    for (int a = 0; a < 4; ++a) {
        p[a] = 0.5 * m[a].squaredNorm();
    }
    check_conditionals(p);
    return p;
}

}  // namespace detail

// pi(alpha | prefix) = (1/2) ||M_alpha||_F^2 for alpha = 0..3.
inline std::array<double, 4> conditional_probs(const Branch& branch, const SiteTensor& site) {
    if (branch.environment.rows() != site.left_dim()) {
        throw InvalidInput("conditional_probs: environment does not match the site's left bond");
    }
    const Eigen::MatrixXcd b0 = branch.environment * site.a[0];
    const Eigen::MatrixXcd b1 = branch.environment * site.a[1];
    return detail::conditionals_from_norms(detail::pauli_transfer(site, b0, b1));
}

// Extends the branch by alpha: L -> M_alpha / sqrt(2 pi(alpha|prefix)).
inline Branch update_environment(const Branch& branch, uint8_t alpha, const SiteTensor& site) {
    if (alpha > 3) {
        throw InvalidInput("update_environment: Pauli code out of range");
    }
    if (branch.environment.rows() != site.left_dim()) {
        throw InvalidInput("update_environment: environment does not match the site's left bond");
    }
    const Eigen::MatrixXcd b0 = branch.environment * site.a[0];
    const Eigen::MatrixXcd b1 = branch.environment * site.a[1];
    const Eigen::MatrixXcd m = detail::pauli_transfer_one(site, b0, b1, alpha);
    const double cond = 0.5 * m.squaredNorm();
    if (!(cond > 1e-300)) {
        throw InvalidInput("update_environment: conditional probability of the chosen Pauli vanishes");
    }
    Branch out;
    out.prefix = branch.prefix;
    out.prefix.push_back(alpha);
    out.log_prob = branch.log_prob + std::log(cond);
    out.environment = m / std::sqrt(2.0 * cond);
    return out;
}

// A possible extension of stored branch `parent` by `alpha`.
struct Candidate {
    uint32_t parent = 0;
    uint8_t alpha = 0;
    double log_prob = -std::numeric_limits<double>::infinity();  // log(pi(alpha|mu) Pi^mu)
    bool extends_identity = false;  // parent prefix and alpha all identity
};

// Rule (i): keeps candidates with 2^i chi_i Pi >= 1 - slack, evaluated in log
// form. `site` is 1-based, `chi` the bond to its right.
inline std::vector<Candidate> prune_by_bound(std::vector<Candidate> candidates, size_t site, size_t chi,
                                             double slack = 1e-10) {
    const double log_bound = std::log1p(-slack) - static_cast<double>(site) * std::log(2.0) -
                             std::log(static_cast<double>(chi));
    const bool had_identity =
        std::any_of(candidates.begin(), candidates.end(), [](const Candidate& c) { return c.extends_identity; });
    std::erase_if(candidates, [&](const Candidate& c) { return !(c.log_prob >= log_bound); });
    if (candidates.empty() && had_identity) {
        throw InvariantViolation("prune_by_bound: the identity prefix failed the bound at site " +
                                 std::to_string(site) + "; numerical breakdown");
    }
    return candidates;
}

namespace detail {

// Descending probability, ties by lexicographic (parent prefix, alpha).
struct CandidateOrder {
    std::span<const std::vector<uint8_t>> prefixes;

    bool operator()(const Candidate& x, const Candidate& y) const {
        if (x.log_prob != y.log_prob) {
            return x.log_prob > y.log_prob;
        }
        if (x.parent != y.parent) {
            const auto& px = prefixes[x.parent];
            const auto& py = prefixes[y.parent];
            if (px != py) {
                return std::lexicographical_compare(px.begin(), px.end(), py.begin(), py.end());
            }
        }
        return x.alpha < y.alpha;
    }
};

}  // namespace detail

// Rule (ii): the M most probable candidates. Inputs that already fit are
// returned unchanged.
inline std::vector<Candidate> select_top_m(std::vector<Candidate> candidates, size_t max_branches,
                                           std::span<const std::vector<uint8_t>> parent_prefixes) {
    if (candidates.size() <= max_branches) {
        return candidates;
    }
    const detail::CandidateOrder order{parent_prefixes};
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(max_branches),
                      candidates.end(), order);
    candidates.resize(max_branches);
    return candidates;
}

struct SweepStats {
    std::vector<size_t> branches_per_site;  // K after selection at each site
    size_t max_branches = 0;
    size_t pruned_by_bound = 0;
    size_t cut_by_rank = 0;
};

struct SweepResult {
    std::vector<PauliString> strings;  // unsigned; every one has 2^N Pi >= 1 - accept_tol
    SweepStats stats;
};

namespace detail {

// Forward sweep over a right-normalized state. Environments of the K stored
// branches live in one (K chi) x chi block so the products L A^s for all
// branches are a single matrix product.
inline SweepResult forward_sweep(const MpsState& state, const SamplerConfig& cfg) {
    const size_t n = state.num_sites();
    SweepResult result;
    std::vector<std::vector<uint8_t>> prefixes(1);
    std::vector<double> log_probs(1, 0.0);
    std::vector<bool> identity(1, true);
    Eigen::MatrixXcd envs = Eigen::MatrixXcd::Identity(1, 1);

    for (size_t s = 0; s < n; ++s) {
        const SiteTensor& t = state.site(s);
        const Eigen::Index cl = t.left_dim();
        const Eigen::Index cr = t.right_dim();
        const size_t k = prefixes.size();

        const Eigen::MatrixXcd b0 = envs * t.a[0];
        const Eigen::MatrixXcd b1 = envs * t.a[1];

        std::vector<Candidate> candidates;
        candidates.reserve(4 * k);
        for (size_t mu = 0; mu < k; ++mu) {
            const auto rows = static_cast<Eigen::Index>(mu) * cl;
            const auto m = pauli_transfer(t, b0.middleRows(rows, cl), b1.middleRows(rows, cl));
            const auto cond = conditionals_from_norms(m);
            for (uint8_t a = 0; a < 4; ++a) {
                const double lp = cond[a] > 0 ? log_probs[mu] + std::log(cond[a])
                                              : -std::numeric_limits<double>::infinity();
                candidates.push_back({static_cast<uint32_t>(mu), a, lp, identity[mu] && a == 0});
            }
        }

        const size_t before = candidates.size();
        candidates = prune_by_bound(std::move(candidates), s + 1, static_cast<size_t>(cr), cfg.prune_slack);
        result.stats.pruned_by_bound += before - candidates.size();
        if (candidates.empty()) {
            // Every surviving hypothesis died; no string can be completed.
            result.stats.branches_per_site.resize(n, 0);
            return result;
        }
        const size_t unpruned = candidates.size();
        candidates = select_top_m(std::move(candidates), cfg.max_branches, prefixes);
        result.stats.cut_by_rank += unpruned - candidates.size();

        // Survivors grouped by parent so each parent's rows are read once.
        std::stable_sort(candidates.begin(), candidates.end(),
                         [](const Candidate& x, const Candidate& y) { return x.parent < y.parent; });
        const size_t kn = candidates.size();
        Eigen::MatrixXcd next_envs(static_cast<Eigen::Index>(kn) * cr, cr);
        std::vector<std::vector<uint8_t>> next_prefixes(kn);
        std::vector<double> next_log(kn);
        std::vector<bool> next_identity(kn);
        for (size_t j = 0; j < kn; ++j) {
            const Candidate& c = candidates[j];
            const auto rows = static_cast<Eigen::Index>(c.parent) * cl;
            Eigen::MatrixXcd m = pauli_transfer_one(t, b0.middleRows(rows, cl), b1.middleRows(rows, cl), c.alpha);
            const double nrm = m.norm();
            next_envs.middleRows(static_cast<Eigen::Index>(j) * cr, cr) = m / nrm;
            next_prefixes[j] = prefixes[c.parent];
            next_prefixes[j].push_back(c.alpha);
            next_log[j] = c.log_prob;
            next_identity[j] = c.extends_identity;
        }
        envs = std::move(next_envs);
        prefixes = std::move(next_prefixes);
        log_probs = std::move(next_log);
        identity = std::move(next_identity);
        result.stats.branches_per_site.push_back(kn);
        result.stats.max_branches = std::max(result.stats.max_branches, kn);
    }

    const double log_accept = std::log1p(-cfg.accept_tol) - static_cast<double>(n) * std::log(2.0);
    for (size_t mu = 0; mu < prefixes.size(); ++mu) {
        if (log_probs[mu] >= log_accept) {
            result.strings.emplace_back(std::move(prefixes[mu]));
        }
    }
    return result;
}

}  // namespace detail

// Biased sweep collecting Pauli strings with Pi(sigma) = 2^-N. The forward
// direction runs on the right-normalized state; the backward direction runs
// the same sweep on the mirrored left-normalized state and reverses the
// results. Deterministic for a given state and config.
inline SweepResult stabilizer_sweep(const MpsState& state, const SamplerConfig& cfg) {
    cfg.validate();
    if (cfg.direction == Direction::Forward) {
        if (state.gauge() == Gauge::Right) {
            return detail::forward_sweep(state, cfg);
        }
        return detail::forward_sweep(right_normalize(state), cfg);
    }
    const MpsState mirrored = mirror(state.gauge() == Gauge::Left ? state : left_normalize(state));
    SweepResult r = detail::forward_sweep(mirrored, cfg);
    for (auto& p : r.strings) {
        std::reverse(p.codes.begin(), p.codes.end());
    }
    std::reverse(r.stats.branches_per_site.begin(), r.stats.branches_per_site.end());
    return r;
}

// Draws sigma with probability Pi(sigma) site by site from the conditionals.
// Returns the string and its realized probability.
inline std::pair<PauliString, double> perfect_sample(const MpsState& state, Rng& rng) {
    const MpsState* s = &state;
    MpsState normalized;
    if (state.gauge() != Gauge::Right) {
        normalized = right_normalize(state);
        s = &normalized;
    }
    Branch b;
    for (size_t i = 0; i < s->num_sites(); ++i) {
        const auto p = conditional_probs(b, s->site(i));
        const double sum = p[0] + p[1] + p[2] + p[3];
        double u = rng.uniform_real() * sum;
        uint8_t alpha = 3;
        for (uint8_t a = 0; a < 4; ++a) {
            if (p[a] <= 0) continue;
            if (u < p[a]) {
                alpha = a;
                break;
            }
            u -= p[a];
            alpha = a;
        }
        b = update_environment(b, alpha, s->site(i));
    }
    return {PauliString(std::move(b.prefix)), b.partial_prob()};
}

inline std::pair<PauliString, double> perfect_sample(const MpsState& state, uint64_t seed) {
    Rng rng(seed);
    return perfect_sample(state, rng);
}

// Accepts p iff |<psi|p|psi>| >= 1 - tol; the result carries the sign of the
// expectation value.
inline std::optional<PauliString> verify_stabilizer(const MpsState& state, const PauliString& p, double tol = 1e-6) {
    PauliString q(p.codes);
    const double e = expectation_pauli(state, q);
    if (std::abs(e) < 1.0 - tol) {
        return std::nullopt;
    }
    q.sign = e > 0 ? Sign::Plus : Sign::Minus;
    return q;
}

// R_N = (1) and R_{k-1} = 2^{-1/2} sum_{s',s} conj(sigma_k)_{s' s} A_k^{s'} R_k (A_k^s)^dag.
// Entry i has shape chi_i x chi_i. Requires a right-normalized state for the
// norm bound ||R_i||_F^2 <= chi_i / 2^(N-i) to hold.
inline std::vector<Eigen::MatrixXcd> right_environments(const MpsState& state, const PauliString& p) {
    const size_t n = state.num_sites();
    if (p.size() != n) {
        throw InvalidInput("right_environments: string length does not match the state");
    }
    std::vector<Eigen::MatrixXcd> envs(n + 1);
    envs[n] = Eigen::MatrixXcd::Identity(1, 1);
    const double r = 1.0 / std::sqrt(2.0);
    for (size_t k = n; k-- > 0;) {
        const SiteTensor& t = state.site(k);
        const Eigen::Matrix2cd sigma = pauli_matrix(p.codes[k]).conjugate();
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(t.left_dim(), t.left_dim());
        for (int s = 0; s < 2; ++s) {
            const Eigen::MatrixXcd right = envs[k + 1] * t.a[s].adjoint();
            for (int sp = 0; sp < 2; ++sp) {
                if (sigma(sp, s) != cplx(0, 0)) {
                    acc.noalias() += sigma(sp, s) * (t.a[sp] * right);
                }
            }
        }
        envs[k] = r * acc;
    }
    return envs;
}

}  // namespace mpsstab
