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
#include <chrono>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "mpsstab/clifford.hpp"
#include "mpsstab/errors.hpp"
#include "mpsstab/mps.hpp"
#include "mpsstab/pauli.hpp"
#include "mpsstab/rng.hpp"
#include "mpsstab/sampler.hpp"
#include "mpsstab/tableau.hpp"

namespace mpsstab {

struct LearnerConfig {
    SamplerConfig sampler;
    size_t iterations = 5;
    size_t modifier_depth = 1;  // D
    size_t patience = 5;
    uint64_t seed = 0;
    TruncationConfig truncation;
    size_t bond_cap = 4096;
    double sign_tol = 1e-6;
    // Stop as soon as k reaches this value (e.g. a rank known by construction).
    std::optional<size_t> target_rank;

    void validate() const {
        sampler.validate();
        truncation.validate();
        if (iterations < 1) {
            throw InvalidInput("iterations must be at least 1");
        }
        if (patience < 1) {
            throw InvalidInput("patience must be at least 1");
        }
        if (bond_cap < 1) {
            throw InvalidInput("bond_cap must be at least 1");
        }
        if (!(sign_tol > 0 && sign_tol < 1)) {
            throw InvalidInput("sign_tol must lie in (0, 1)");
        }
    }
};

struct IterationRecord {
    size_t iteration = 0;
    size_t k = 0;
    size_t candidates = 0;      // distinct strings returned by both sweeps
    size_t new_generators = 0;  // rank increase in this iteration
    size_t max_branches = 0;
    size_t chi_max = 0;         // largest bond of the swept state
    double seconds = 0.0;
};

struct LearnResult {
    size_t num_qubits = 0;
    Tableau generators;
    size_t k = 0;
    size_t nullity = 0;
    std::vector<IterationRecord> history;
};

// Thrown when modifying the state exceeds the bond cap. Carries everything
// learned before the failing iteration.
class LearnCapacityError : public CapacityError {
  public:
    LearnCapacityError(const std::string& what, LearnResult partial)
        : CapacityError(what), partial_(std::move(partial)) {}
    const LearnResult& partial() const { return partial_; }

  private:
    LearnResult partial_;
};

// |psi'> = U|psi>, right-normalized. Each layer of two-qubit gates can at most
// double a bond.
inline MpsState modified_state(const MpsState& state, const Circuit& circuit, const TruncationConfig& trunc = {},
                               std::optional<size_t> bond_cap = std::nullopt) {
    MpsState out = state.gauge() == Gauge::Right ? state : right_normalize(state);
    apply_circuit(out, circuit, trunc, bond_cap);
    if (out.gauge() != Gauge::Right) {
        out = right_normalize(std::move(out));
    }
    // Bonds the circuit never touched still count against the cap.
    if (bond_cap && out.max_bond() > *bond_cap) {
        throw CapacityError("bond dimension " + std::to_string(out.max_bond()) + " exceeds cap " +
                            std::to_string(*bond_cap));
    }
    return out;
}

// Overwrites every row sign with the sign of its expectation value.
inline Tableau assign_signs(const MpsState& state, Tableau t, double tol = 1e-6) {
    for (size_t i = 0; i < t.num_rows(); ++i) {
        const auto v = verify_stabilizer(state, decode(t.row(i)), tol);
        if (!v) {
            throw StaleRowError("generator " + to_string(decode(t.row(i))) + " no longer stabilizes the state");
        }
        t.set_sign(i, *v->sign);
    }
    return t;
}

namespace detail {

struct LearnerState {
    const MpsState& original;
    const LearnerConfig& cfg;
    Tableau tableau;

    // Verifies unsigned candidates on the original state and inserts the ones
    // not yet in the span. Returns the rank increase.
    size_t absorb(std::span<const PauliString> candidates) {
        const size_t before = *tableau.rank();
        for (const auto& p : candidates) {
            if (p.is_identity() || group_membership(tableau, p)) {
                continue;
            }
            if (auto v = verify_stabilizer(original, p, cfg.sign_tol)) {
                const PauliString one[] = {*v};
                tableau = insert_and_reduce(std::move(tableau), one).tableau;
            }
        }
        return *tableau.rank() - before;
    }
};

inline std::vector<PauliString> both_sweeps(const MpsState& s, const SamplerConfig& base, size_t& max_branches) {
    SamplerConfig cfg = base;
    cfg.direction = Direction::Forward;
    SweepResult fwd = stabilizer_sweep(s, cfg);
    cfg.direction = Direction::Backward;
    SweepResult bwd = stabilizer_sweep(s, cfg);
    max_branches = std::max(fwd.stats.max_branches, bwd.stats.max_branches);
    std::vector<PauliString> out = std::move(fwd.strings);
    out.insert(out.end(), std::make_move_iterator(bwd.strings.begin()), std::make_move_iterator(bwd.strings.end()));
    std::sort(out.begin(), out.end(), [](const PauliString& a, const PauliString& b) { return a.codes < b.codes; });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace detail

// Learns the stabilizer group of `state`. Optional `warm_start` strings are
// verified and inserted before the first sweep; they only save work.
inline LearnResult learn(const MpsState& state, const LearnerConfig& cfg,
                         std::span<const PauliString> warm_start = {}) {
    cfg.validate();
    if (std::abs(norm_squared(state) - 1.0) > 1e-8) {
        throw InvalidInput("learn: state is not normalized");
    }
    const size_t n = state.num_sites();
    const MpsState original = state.gauge() == Gauge::Right ? state : right_normalize(state);
    detail::LearnerState ls{original, cfg, gaussian_eliminate(Tableau(n))};

    LearnResult result;
    result.num_qubits = n;
    auto finish = [&]() {
        result.k = *ls.tableau.rank();
        result.nullity = n - result.k;
        result.generators = ls.tableau;
    };

    std::vector<PauliString> warm;
    for (const auto& p : warm_start) {
        warm.emplace_back(p.codes);
    }
    ls.absorb(warm);

    const auto done = [&]() {
        const size_t k = *ls.tableau.rank();
        return k == n || (cfg.target_rank && k >= *cfg.target_rank);
    };
    size_t stale = 0;
    for (size_t it = 1; it <= cfg.iterations && !done(); ++it) {
        const auto t0 = std::chrono::steady_clock::now();
        IterationRecord rec;
        rec.iteration = it;
        std::vector<PauliString> candidates;
        if (it == 1) {
            candidates = detail::both_sweeps(original, cfg.sampler, rec.max_branches);
            rec.chi_max = original.max_bond();
        } else {
            const Circuit c = random_clifford_circuit(n, cfg.modifier_depth, CircuitGeometry::GeneratorLayers,
                                                      derive_seed(cfg.seed, it));
            MpsState mod;
            try {
                mod = modified_state(original, c, cfg.truncation, cfg.bond_cap);
            } catch (const CapacityError& e) {
                finish();
                throw LearnCapacityError(e.what(), std::move(result));
            }
            rec.chi_max = mod.max_bond();
            candidates = detail::both_sweeps(mod, cfg.sampler, rec.max_branches);
            const Circuit back = inverse(c);
            for (auto& p : candidates) {
                p = conjugate(std::move(p), back);
                p.sign.reset();
            }
        }
        rec.candidates = candidates.size();
        rec.new_generators = ls.absorb(candidates);
        rec.k = *ls.tableau.rank();
        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        result.history.push_back(rec);
        stale = rec.new_generators == 0 ? stale + 1 : 0;
        if (stale >= cfg.patience) {
            break;
        }
    }
    finish();
    return result;
}

// k after each of `iterations` iterations, repeating the final value when the
// learner stopped early.
inline std::vector<size_t> rank_by_iteration(const LearnResult& r, size_t iterations) {
    std::vector<size_t> out(iterations, r.k);
    for (size_t i = 0; i < std::min(iterations, r.history.size()); ++i) {
        out[i] = r.history[i].k;
    }
    return out;
}

// Plain-text report: header lines, signed generators, then history as CSV.
// Timings are omitted unless requested so reports are reproducible.
inline void write_report(std::ostream& os, const LearnResult& r, bool with_timing = false) {
    os << "N " << r.num_qubits << "\n";
    os << "k " << r.k << "\n";
    os << "nullity " << r.nullity << "\n";
    os << "generators " << r.generators.num_rows() << "\n";
    os << to_text(r.generators);
    os << "history\n";
    os << "iteration,k,candidates,new_generators,max_branches,chi_max" << (with_timing ? ",seconds" : "") << "\n";
    for (const auto& h : r.history) {
        os << h.iteration << ',' << h.k << ',' << h.candidates << ',' << h.new_generators << ',' << h.max_branches
           << ',' << h.chi_max;
        if (with_timing) {
            os << ',' << h.seconds;
        }
        os << "\n";
    }
}

inline std::string report(const LearnResult& r, bool with_timing = false) {
    std::ostringstream os;
    write_report(os, r, with_timing);
    return os.str();
}

}  // namespace mpsstab
