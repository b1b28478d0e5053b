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

// Command-line driver: learn one state or run the benchmark experiments.
// Exit codes: 0 success, 1 other failure, 2 usage or validation error,
// 3 bond-dimension capacity exceeded.

#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mpsstab/mpsstab.hpp"
#include "mpsstab/oracle.hpp"

namespace {

using namespace mpsstab;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCapacity = 3;

struct Options {
    ExperimentSpec spec;
    std::string state = "doped";
    std::string mps_path;
    std::string output;
    std::string json_path;
    std::string config;
    bool timing = false;
};

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--seed", o.spec.seed, "Base seed");
    sub->add_option("--iterations", o.spec.iterations, "Learner iterations per state")->check(CLI::PositiveNumber);
    sub->add_option("--depth", o.spec.modifier_depth, "Clifford layers per modified state")->check(CLI::NonNegativeNumber);
    sub->add_option("--patience", o.spec.patience, "Stop after this many iterations without progress")
        ->check(CLI::PositiveNumber);
    sub->add_option("--bond-cap", o.spec.bond_cap, "Largest bond dimension allowed")->check(CLI::PositiveNumber);
    sub->add_option("--output,-o", o.output, "Output file (default: stdout)");
    sub->add_option("--config", o.config, "key=value file; command-line flags take precedence");
}

// Fills options not given on the command line from the key=value file.
void apply_config(CLI::App* sub, const std::string& path) {
    std::ifstream probe(path);
    if (!probe) {
        throw CLI::ValidationError("--config", "cannot open " + path);
    }
    for (const auto& item : CLI::ConfigINI().from_file(path)) {
        CLI::Option* opt = sub->get_option_no_throw("--" + item.name);
        if (opt == nullptr || item.name == "config") {
            throw CLI::ValidationError("--config", "unknown key '" + item.name + "'");
        }
        if (opt->count() == 0) {
            opt->add_result(item.inputs);
            opt->run_callback();
        }
    }
}

// Writes through `fn` to the output file, or stdout when none is given.
void emit(const std::string& path, const std::function<void(std::ostream&)>& fn) {
    if (path.empty()) {
        fn(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw InvalidInput("cannot open output file " + path);
    }
    fn(os);
}

MpsState ghz_state(size_t n) {
    MpsState s = zero_state(n);
    Circuit c{n, {Gate::h(0)}, 0};
    for (uint32_t q = 0; q + 1 < n; ++q) {
        c.gates.push_back(Gate::cnot(q, q + 1));
    }
    apply_circuit(s, c);
    return s;
}

nlohmann::json to_json(const LearnResult& r, bool timing) {
    nlohmann::json j;
    j["n"] = r.num_qubits;
    j["k"] = r.k;
    j["nullity"] = r.nullity;
    j["generators"] = nlohmann::json::array();
    for (const auto& g : r.generators.generators()) {
        j["generators"].push_back(to_string(g));
    }
    j["history"] = nlohmann::json::array();
    for (const auto& h : r.history) {
        nlohmann::json e{{"iteration", h.iteration},
                         {"k", h.k},
                         {"candidates", h.candidates},
                         {"new_generators", h.new_generators},
                         {"max_branches", h.max_branches},
                         {"chi_max", h.chi_max}};
        if (timing) {
            e["seconds"] = h.seconds;
        }
        j["history"].push_back(e);
    }
    return j;
}

void write_learn_outputs(const Options& o, const LearnResult& r) {
    emit(o.output, [&](std::ostream& os) { write_report(os, r, o.timing); });
    if (!o.json_path.empty()) {
        emit(o.json_path, [&](std::ostream& os) { os << to_json(r, o.timing).dump(2) << "\n"; });
    }
}

int run_learn(const Options& o) {
    const ExperimentSpec& spec = o.spec;
    MpsState state;
    if (!o.mps_path.empty()) {
        state = load_mps(o.mps_path);
    } else if (o.state == "doped") {
        if (spec.nt.front() > spec.n.front()) {
            throw InvalidInput("nt must not exceed n");
        }
        state = prepare_doped_state(spec.n.front(), spec.nt.front(), derive_seed(spec.seed, 0), spec.scramble_depth)
                    .state;
    } else if (o.state == "zero") {
        state = zero_state(spec.n.front());
    } else {
        state = ghz_state(spec.n.front());
    }
    const LearnerConfig cfg = learner_config(spec, spec.m.front(), derive_seed(spec.seed, 1));
    try {
        write_learn_outputs(o, learn(state, cfg));
    } catch (const LearnCapacityError& e) {
        std::cerr << "error: " << e.what() << "; partial result written\n";
        write_learn_outputs(o, e.partial());
        return kExitCapacity;
    }
    return 0;
}

int run_fig4_cmd(const Options& o) {
    const DynamicsResult r = run_fig4(o.spec);
    emit(o.output, [&](std::ostream& os) { write_fig4_csv(os, r); });
    if (!r.truncated.empty()) {
        std::cerr << "warning: " << r.truncated.size() << " trajectories stopped at the bond cap:";
        for (size_t t : r.truncated) {
            std::cerr << ' ' << t;
        }
        std::cerr << "\n";
        return kExitCapacity;
    }
    return 0;
}

// Learns each scrambled state and compares against the dense reference.
int run_oracle_check(const Options& o) {
    const ExperimentSpec& spec = o.spec;
    const size_t n = spec.n.front();
    const size_t nt = spec.nt.front();
    if (n > oracle::kGroupLimit) {
        throw InvalidInput("oracle-check supports n <= " + std::to_string(oracle::kGroupLimit));
    }
    if (nt > n) {
        throw InvalidInput("nt must not exceed n");
    }
    std::vector<size_t> ks(spec.trajectories), oracle_ks(spec.trajectories);
    std::vector<char> match(spec.trajectories);
    parallel_for(spec.trajectories, thread_count(spec.threads), [&](size_t traj) {
        const uint64_t ts = derive_seed(spec.seed, traj);
        const DopedState d = prepare_doped_state(n, nt, derive_seed(ts, 0), spec.scramble_depth);
        const LearnResult r = learn(d.state, learner_config(spec, spec.m.front(), derive_seed(ts, 1)));
        const Tableau exact = oracle::exact_stabilizer_group(oracle::from_mps(d.state));
        ks[traj] = r.k;
        oracle_ks[traj] = *exact.rank();
        match[traj] = r.generators == exact;
    });
    bool all = true;
    emit(o.output, [&](std::ostream& os) {
        os << "traj,n,nt,k,oracle_k,match\n";
        for (size_t t = 0; t < spec.trajectories; ++t) {
            os << t << ',' << n << ',' << nt << ',' << ks[t] << ',' << oracle_ks[t] << ',' << int(match[t]) << "\n";
            all = all && match[t];
        }
    });
    return all ? 0 : kExitFailure;
}

int run(int argc, char** argv) {
    CLI::App app{"Stabilizer group learning for matrix product states"};
    app.require_subcommand(1);
    Options o;
    ExperimentSpec& s = o.spec;

    auto* learn_cmd = app.add_subcommand("learn", "Learn the stabilizer group of one state");
    add_common(learn_cmd, o);
    learn_cmd->add_option("--mps", o.mps_path, "MPS binary file")->check(CLI::ExistingFile);
    learn_cmd->add_option("--state", o.state, "Built-in state")->check(CLI::IsMember({"doped", "zero", "ghz"}));
    learn_cmd->add_option("--n", s.n, "Qubits")->expected(1);
    learn_cmd->add_option("--nt", s.nt, "T states before scrambling (doped)")->expected(1);
    learn_cmd->add_option("--m", s.m, "Branches kept per site")->expected(1);
    learn_cmd->add_option("--scramble-depth", s.scramble_depth, "Scrambling depth (default n)");
    learn_cmd->add_option("--json", o.json_path, "Also write the result as JSON");
    learn_cmd->add_flag("--timing", o.timing, "Include wall times in the report");

    auto* fig2 = app.add_subcommand("fig2", "Success rate of recovering all N - N_T generators");
    add_common(fig2, o);
    fig2->add_option("--n", s.n, "Qubit counts");
    fig2->add_option("--nt", s.nt, "T-state counts");
    fig2->add_option("--m", s.m, "Branches kept per site")->expected(1);
    fig2->add_option("--traj", s.trajectories, "Trajectories per (n, nt)")->check(CLI::PositiveNumber);
    fig2->add_option("--scramble-depth", s.scramble_depth, "Scrambling depth (default n)");

    auto* fig3 = app.add_subcommand("fig3", "Generators found per iteration for several M");
    add_common(fig3, o);
    fig3->add_option("--n", s.n, "Qubits")->expected(1);
    fig3->add_option("--nt", s.nt, "T states")->expected(1);
    fig3->add_option("--m", s.m, "Branch limits to compare");
    fig3->add_option("--traj", s.trajectories, "Trajectories per M")->check(CLI::PositiveNumber);
    fig3->add_option("--scramble-depth", s.scramble_depth, "Scrambling depth (default n)");

    auto* fig4 = app.add_subcommand("fig4", "Generators along Clifford + T dynamics");
    add_common(fig4, o);
    fig4->add_option("--n", s.n, "Qubits")->expected(1);
    fig4->add_option("--tau", s.tau, "T gates per step");
    fig4->add_option("--steps", s.steps, "Steps after the initial state");
    fig4->add_option("--m", s.m, "Branches kept per site")->expected(1);
    fig4->add_option("--traj", s.trajectories, "Trajectories")->check(CLI::PositiveNumber);

    auto* check = app.add_subcommand("oracle-check", "Compare learned groups with dense enumeration");
    add_common(check, o);
    check->add_option("--n", s.n, "Qubits")->expected(1);
    check->add_option("--nt", s.nt, "T states")->expected(1);
    check->add_option("--m", s.m, "Branches kept per site")->expected(1);
    check->add_option("--traj", s.trajectories, "States to check")->check(CLI::PositiveNumber);
    check->add_option("--scramble-depth", s.scramble_depth, "Scrambling depth (default n)");

    try {
        app.parse(argc, argv);
        CLI::App* sub = app.get_subcommands().front();
        if (!o.config.empty()) {
            apply_config(sub, o.config);
        }
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        if (sub == learn_cmd) {
            s.kind = ExperimentKind::LearnSingle;
            s.validate();
            return run_learn(o);
        }
        if (sub == fig2) {
            s.kind = ExperimentKind::SuccessProbability;
            const std::vector<SuccessRow> rows = run_fig2(s);
            emit(o.output, [&](std::ostream& os) { write_fig2_csv(os, rows); });
            return 0;
        }
        if (sub == fig3) {
            s.kind = ExperimentKind::RankVsIteration;
            const std::vector<RankRow> rows = run_fig3(s);
            emit(o.output, [&](std::ostream& os) { write_fig3_csv(os, rows); });
            return 0;
        }
        if (sub == fig4) {
            s.kind = ExperimentKind::DopedDynamics;
            return run_fig4_cmd(o);
        }
        s.validate();
        return run_oracle_check(o);
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const CapacityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCapacity;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
