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
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "mpsstab/clifford.hpp"
#include "mpsstab/errors.hpp"
#include "mpsstab/learner.hpp"
#include "mpsstab/mps.hpp"
#include "mpsstab/pauli.hpp"
#include "mpsstab/rng.hpp"
#include "mpsstab/tableau.hpp"

namespace mpsstab {

enum class ExperimentKind { SuccessProbability, RankVsIteration, DopedDynamics, LearnSingle };

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::LearnSingle;
    std::vector<size_t> n = {8};
    std::vector<size_t> nt = {0};  // T-state count for the static experiments
    size_t tau = 2;                // T gates per step in the dynamics experiment
    std::vector<size_t> m = {256};
    size_t iterations = 5;
    size_t modifier_depth = 1;
    size_t patience = 5;
    std::optional<size_t> scramble_depth;  // defaults to N
    size_t steps = 8;
    size_t trajectories = 100;
    uint64_t seed = 0;
    size_t bond_cap = 4096;
    size_t threads = 0;  // 0 reads MPSSTAB_THREADS, falling back to 1

    void validate() const {
        if (n.empty() || m.empty() || nt.empty()) {
            throw InvalidInput("n, nt and m need at least one value");
        }
        for (size_t v : n) {
            if (v < 1) {
                throw InvalidInput("n must be at least 1");
            }
        }
        for (size_t v : m) {
            if (v < 1) {
                throw InvalidInput("m must be at least 1");
            }
        }
        if (kind != ExperimentKind::DopedDynamics) {
            const size_t n_max = *std::max_element(n.begin(), n.end());
            for (size_t v : nt) {
                if (v > n_max) {
                    throw InvalidInput("nt must not exceed n");
                }
            }
        } else if (tau > *std::min_element(n.begin(), n.end())) {
            throw InvalidInput("tau must not exceed n");
        }
        if (trajectories < 1) {
            throw InvalidInput("trajectories must be at least 1");
        }
        if (iterations < 1 || patience < 1 || bond_cap < 1) {
            throw InvalidInput("iterations, patience and bond_cap must be at least 1");
        }
    }
};

inline size_t thread_count(size_t requested = 0) {
    if (requested > 0) {
        return requested;
    }
    if (const char* env = std::getenv("MPSSTAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<size_t>(v);
        }
    }
    return 1;
}

// Runs body(i) for i in [0, count) on up to `threads` workers. The first
// exception (lowest index) is rethrown after all workers finish.
inline void parallel_for(size_t count, size_t threads, const std::function<void(size_t)>& body) {
    threads = std::max<size_t>(1, std::min(threads, count));
    std::vector<std::exception_ptr> errors(count);
    if (threads == 1) {
        for (size_t i = 0; i < count; ++i) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        for (size_t w = 0; w < threads; ++w) {
            pool.emplace_back([&]() {
                for (size_t i = next++; i < count; i = next++) {
                    try {
                        body(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

inline Eigen::Vector2cd t_state() {
    const double r = 1.0 / std::sqrt(2.0);
    return {cplx(r, 0), std::polar(r, M_PI / 4)};
}

struct DopedState {
    MpsState state;
    Circuit circuit;
    Tableau reference;  // conjugated +Z on the first N - N_T qubits, reduced
};

// U|0>^(N-N_T)|T>^N_T with U a random generator-layer Clifford circuit of
// depth N (or `depth`).
inline DopedState prepare_doped_state(size_t n, size_t nt, uint64_t seed, std::optional<size_t> depth = std::nullopt) {
    if (n < 1 || nt > n) {
        throw InvalidInput("prepare_doped_state: need 0 <= nt <= n and n >= 1");
    }
    std::vector<Eigen::Vector2cd> local(n, Eigen::Vector2cd(1, 0));
    for (size_t q = n - nt; q < n; ++q) {
        local[q] = t_state();
    }
    DopedState out;
    out.state = from_product_state(local);
    out.circuit = random_clifford_circuit(n, depth.value_or(n), CircuitGeometry::GeneratorLayers, seed);
    apply_circuit(out.state, out.circuit);
    Tableau ref(n);
    for (size_t q = 0; q < n - nt; ++q) {
        PauliString z(n);
        z.codes[q] = 3;
        z.sign = Sign::Plus;
        ref.add_row(conjugate(std::move(z), out.circuit));
    }
    out.reference = gaussian_eliminate(std::move(ref));
    return out;
}

inline LearnerConfig learner_config(const ExperimentSpec& spec, size_t m, uint64_t seed) {
    LearnerConfig cfg;
    cfg.sampler.max_branches = m;
    cfg.iterations = spec.iterations;
    cfg.modifier_depth = spec.modifier_depth;
    cfg.patience = spec.patience;
    cfg.bond_cap = spec.bond_cap;
    cfg.seed = seed;
    return cfg;
}

namespace detail {

inline std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace detail

// Per-trajectory seeds: derive_seed(spec.seed, trajectory). Inside a
// trajectory, stream 0 prepares the state and stream 1 drives the learner.
struct SuccessRow {
    size_t n = 0;
    size_t nt = 0;
    size_t iteration = 0;
    double success_rate = 0.0;
    double stderr_ = 0.0;
    size_t trials = 0;
};

inline std::vector<SuccessRow> run_fig2(const ExperimentSpec& spec) {
    spec.validate();
    std::vector<SuccessRow> rows;
    for (size_t n : spec.n) {
        for (size_t nt : spec.nt) {
            if (nt > n) {
                continue;
            }
            std::vector<std::vector<size_t>> ks(spec.trajectories);
            parallel_for(spec.trajectories, thread_count(spec.threads), [&](size_t traj) {
                const uint64_t ts = derive_seed(spec.seed, traj);
                const DopedState d = prepare_doped_state(n, nt, derive_seed(ts, 0), spec.scramble_depth);
                LearnerConfig cfg = learner_config(spec, spec.m.front(), derive_seed(ts, 1));
                cfg.patience = spec.iterations;
                cfg.target_rank = n - nt;
                ks[traj] = rank_by_iteration(learn(d.state, cfg), spec.iterations);
            });
            for (size_t it = 1; it <= spec.iterations; ++it) {
                size_t hits = 0;
                for (const auto& k : ks) {
                    hits += k[it - 1] == n - nt;
                }
                const double p = static_cast<double>(hits) / static_cast<double>(spec.trajectories);
                rows.push_back({n, nt, it, p, std::sqrt(p * (1 - p) / static_cast<double>(spec.trajectories)),
                                spec.trajectories});
            }
        }
    }
    return rows;
}

inline void write_fig2_csv(std::ostream& os, const std::vector<SuccessRow>& rows) {
    os << "n,nt,iter,success_rate,stderr,trials\n";
    for (const auto& r : rows) {
        os << r.n << ',' << r.nt << ',' << r.iteration << ',' << detail::fixed(r.success_rate) << ','
           << detail::fixed(r.stderr_) << ',' << r.trials << "\n";
    }
}

struct RankRow {
    size_t m = 0;
    size_t iteration = 0;
    double mean_k = 0.0;
    size_t min_k = 0;
    size_t max_k = 0;
    size_t trials = 0;
};

// Uses spec.n.front() and spec.nt.front(); the same states are reused for
// every M.
inline std::vector<RankRow> run_fig3(const ExperimentSpec& spec) {
    spec.validate();
    const size_t n = spec.n.front();
    const size_t nt = spec.nt.front();
    if (nt > n) {
        throw InvalidInput("nt must not exceed n");
    }
    std::vector<RankRow> rows;
    for (size_t m : spec.m) {
        std::vector<std::vector<size_t>> ks(spec.trajectories);
        parallel_for(spec.trajectories, thread_count(spec.threads), [&](size_t traj) {
            const uint64_t ts = derive_seed(spec.seed, traj);
            const DopedState d = prepare_doped_state(n, nt, derive_seed(ts, 0), spec.scramble_depth);
            LearnerConfig cfg = learner_config(spec, m, derive_seed(ts, 1));
            cfg.patience = spec.iterations;
            ks[traj] = rank_by_iteration(learn(d.state, cfg), spec.iterations);
        });
        for (size_t it = 1; it <= spec.iterations; ++it) {
            RankRow r{m, it, 0.0, n, 0, spec.trajectories};
            double sum = 0;
            for (const auto& k : ks) {
                sum += static_cast<double>(k[it - 1]);
                r.min_k = std::min(r.min_k, k[it - 1]);
                r.max_k = std::max(r.max_k, k[it - 1]);
            }
            r.mean_k = sum / static_cast<double>(spec.trajectories);
            rows.push_back(r);
        }
    }
    return rows;
}

inline void write_fig3_csv(std::ostream& os, const std::vector<RankRow>& rows) {
    os << "m,iter,mean_k,min_k,max_k,trials\n";
    for (const auto& r : rows) {
        os << r.m << ',' << r.iteration << ',' << detail::fixed(r.mean_k) << ',' << r.min_k << ',' << r.max_k << ','
           << r.trials << "\n";
    }
}

struct DynamicsRow {
    size_t trajectory = 0;
    size_t step = 0;
    size_t k = 0;
    size_t chi_max = 0;
};

struct DynamicsResult {
    std::vector<DynamicsRow> rows;
    std::vector<size_t> truncated;  // trajectories stopped by the bond cap
};

// Called after every recorded step with the current state and learner output.
// May run concurrently for different trajectories.
using DynamicsObserver =
    std::function<void(size_t trajectory, size_t step, const MpsState& state, const LearnResult& result)>;

// Gates of one dynamics step: a staircase layer of uniform two-qubit
// Cliffords, then T on `tau` distinct random sites.
inline Circuit dynamics_step(size_t n, size_t tau, uint64_t seed) {
    Circuit c = random_clifford_circuit(n, 1, CircuitGeometry::StaircaseUniform, derive_seed(seed, 0));
    Rng rng(derive_seed(seed, 1));
    std::vector<uint32_t> sites(n);
    for (size_t q = 0; q < n; ++q) {
        sites[q] = static_cast<uint32_t>(q);
    }
    for (size_t j = 0; j < tau; ++j) {
        std::swap(sites[j], sites[j + rng.uniform_index(n - j)]);
        c.gates.push_back(Gate::t(sites[j]));
    }
    return c;
}

inline DynamicsResult run_fig4(const ExperimentSpec& spec, const DynamicsObserver& observer = {}) {
    spec.validate();
    const size_t n = spec.n.front();
    std::vector<std::vector<DynamicsRow>> per_traj(spec.trajectories);
    std::vector<char> cut(spec.trajectories, 0);
    parallel_for(spec.trajectories, thread_count(spec.threads), [&](size_t traj) {
        const uint64_t ts = derive_seed(spec.seed, traj);
        MpsState state = zero_state(n);
        std::vector<PauliString> previous;
        for (size_t step = 0; step <= spec.steps; ++step) {
            std::vector<PauliString> warm;
            if (step > 0) {
                const Circuit c = dynamics_step(n, spec.tau, derive_seed(ts, 2 * step));
                try {
                    apply_circuit(state, c, TruncationConfig{}, spec.bond_cap);
                } catch (const CapacityError&) {
                    cut[traj] = 1;
                    return;
                }
                // Surviving generators move with the Clifford layer; the T
                // gates are handled by re-verification inside the learner.
                Circuit clifford_part{n, {}, 1};
                for (const auto& g : c.gates) {
                    if (g.is_clifford()) {
                        clifford_part.gates.push_back(g);
                    }
                }
                for (const auto& p : previous) {
                    warm.push_back(conjugate(p, clifford_part));
                }
            }
            const LearnerConfig cfg = learner_config(spec, spec.m.front(), derive_seed(ts, 2 * step + 1));
            LearnResult r;
            try {
                r = learn(state, cfg, warm);
            } catch (const CapacityError&) {
                // A partial k says nothing about the bound; drop the step.
                cut[traj] = 1;
                return;
            }
            const size_t floor = n > step * spec.tau ? n - step * spec.tau : 0;
            if (r.k < floor) {
                throw InvariantViolation("trajectory " + std::to_string(traj) + " step " + std::to_string(step) +
                                         ": k = " + std::to_string(r.k) + " below N - n tau = " +
                                         std::to_string(floor));
            }
            per_traj[traj].push_back({traj, step, r.k, state.max_bond()});
            if (observer) {
                observer(traj, step, state, r);
            }
            previous = r.generators.generators();
        }
    });
    DynamicsResult out;
    for (size_t traj = 0; traj < spec.trajectories; ++traj) {
        out.rows.insert(out.rows.end(), per_traj[traj].begin(), per_traj[traj].end());
        if (cut[traj]) {
            out.truncated.push_back(traj);
        }
    }
    return out;
}

inline void write_fig4_csv(std::ostream& os, const DynamicsResult& r) {
    os << "traj,n,k,chi_max\n";
    for (const auto& row : r.rows) {
        os << row.trajectory << ',' << row.step << ',' << row.k << ',' << row.chi_max << "\n";
    }
}

}  // namespace mpsstab
