#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "treeflow/json_io.hpp"
#include "treeflow/oracles.hpp"

using namespace treeflow;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitInvalid = 2;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write file: " + path);
    out << text;
}

std::string rat_halves(long long halves) { return Rat(halves, 2).str(); }

int cmd_solve(const std::string& input, const std::string& algorithm,
              const std::string& output, bool verify) {
    Instance inst = instance_from_json(slurp(input));
    if (inst.tag == ProblemTag::MULTIWAY) {
        MultiwayResult r = multiway_cut(inst);
        std::cout << "relaxation: " << r.relaxation.str() << "\n"
                  << "cut value: " << r.cut_value << "\n";
        nlohmann::json j;
        j["relaxation"] = r.relaxation.str();
        j["cut_value"] = r.cut_value;
        j["partition"] = r.partition;
        if (!output.empty()) spit(output, j.dump(2));
        return kExitOk;
    }
    Solution sol;
    if (inst.tag == ProblemTag::MCMF) {
        sol = solve_mcmf(inst, algorithm == "scaling");
        std::cout << "flow value: " << rat_halves(sol.flow.value_halves())
                  << " (halves: " << sol.flow.value_halves() << ")\n";
    } else {
        sol = algorithm == "scaling" ? solve_scaling(inst) : solve_descent(inst);
    }
    std::cout << "value: " << rat_halves(sol.value_halves)
              << " (halves: " << sol.value_halves << ")\n";
    if (!sol.phase_steps.empty()) {
        std::cout << "scaling phases: " << sol.phase_steps.size() << " (steps:";
        for (int s : sol.phase_steps) std::cout << " " << s;
        std::cout << ")\n";
    }
    if (!sol.descent_steps.empty())
        std::cout << "descent iterations: " << sol.descent_steps.size() << "\n";
    if (sol.perturb_scale != 1)
        std::cout << "cost perturbation scale: " << sol.perturb_scale << "\n";
    std::cout << "certified: " << (sol.certified ? "yes" : "no") << "\n";
    if (verify) {
        auto rep = verify_optimality(inst, sol.flow, sol.potential);
        std::cout << "verification: " << (rep.ok ? "ok" : rep.violation) << "\n";
        if (!rep.ok) return kExitInfeasible;
    }
    if (!output.empty()) spit(output, solution_to_json(sol));
    return sol.certified ? kExitOk : kExitInfeasible;
}

int cmd_verify(const std::string& input, const std::string& solution_path) {
    Instance inst = instance_from_json(slurp(input));
    Solution sol = solution_from_json(slurp(solution_path));
    if (int(sol.potential.h.size()) != inst.n)
        throw InvalidInput("potential size does not match instance");
    auto rep = verify_optimality(inst, sol.flow, sol.potential);
    if (!rep.ok) {
        std::cout << "NOT OPTIMAL: " << rep.violation << "\n";
        return kExitInfeasible;
    }
    long long cost = primal_cost_halves(inst, sol.flow);
    if (cost != sol.value_halves) {
        std::cout << "NOT OPTIMAL: claimed value " << sol.value_halves
                  << " != recomputed " << cost << "\n";
        return kExitInfeasible;
    }
    std::cout << "certified optimal, value " << rat_halves(cost)
              << " (halves: " << cost << ")\n";
    return kExitOk;
}

int cmd_oracle(const std::string& input) {
    Instance inst = instance_from_json(slurp(input));
    if (inst.tag == ProblemTag::MULTIWAY) {
        auto r = brute_force_multiway(inst);
        std::cout << r.value << "\n";
        return kExitOk;
    }
    if (inst.tag == ProblemTag::MCMF) inst = reduce_mcmf(inst).reduced;
    auto r = brute_force_L(inst);
    std::cout << r.value.str() << "\n";
    return kExitOk;
}

int cmd_ksubmod_min(const std::string& input) {
    TermSum f = term_sum_from_json(slurp(input));
    MinResult r = minimize(f);
    std::cout << "point:";
    for (int v : r.point) std::cout << " " << v;
    std::cout << "\nvalue: " << r.value.str() << "\n";
    return kExitOk;
}

int cmd_lconvex_min(const std::string& input, const std::string& start) {
    TwoSeparable g = two_separable_from_json(slurp(input));
    g.validate_lconvex();
    TreePoint x0(g.n, 0);
    if (!start.empty()) {
        nlohmann::json j = nlohmann::json::parse(slurp(start), nullptr, false);
        if (j.is_discarded() || !j.is_array())
            throw InvalidInput("start point must be a JSON array");
        x0 = j.get<TreePoint>();
        if (int(x0.size()) != g.n) throw InvalidInput("start point size mismatch");
        for (int v : x0)
            if (v < 0 || v >= g.tree->n) throw InvalidInput("start vertex out of range");
    }
    auto [xmin, trace] = steepest_descent(g, x0);
    std::cout << "point:";
    for (int v : xmin) std::cout << " " << v;
    std::cout << "\nvalue: " << eval(g, xmin).str() << "\nsteps: " << trace.steps()
              << "\n";
    return kExitOk;
}

int cmd_multiway(const std::string& input) {
    Instance inst = instance_from_json(slurp(input));
    MultiwayResult r = multiway_cut(inst);
    std::cout << "relaxation: " << r.relaxation.str() << "\n"
              << "cut value: " << r.cut_value << "\n"
              << "partition:";
    for (int p : r.partition) std::cout << " " << p;
    std::cout << "\n";
    return kExitOk;
}

int cmd_gen(int nodes, int terminals, long long maxcap, long long maxcost,
            unsigned seed, const std::string& output) {
    if (nodes < 2 || terminals < 2 || terminals > nodes)
        throw InvalidInput("need 2 <= terminals <= nodes");
    std::mt19937 rng(seed);
    Instance in;
    in.n = nodes;
    // random spanning tree plus extra edges keeps instances connected
    for (int v = 1; v < nodes; ++v) {
        int u = std::uniform_int_distribution<int>(0, v - 1)(rng);
        in.edges.push_back({u, v,
                            std::uniform_int_distribution<long long>(1, maxcap)(rng),
                            std::uniform_int_distribution<long long>(0, maxcost)(rng)});
    }
    int extra = std::uniform_int_distribution<int>(0, nodes)(rng);
    for (int e = 0; e < extra; ++e) {
        int u = std::uniform_int_distribution<int>(0, nodes - 1)(rng);
        int v = std::uniform_int_distribution<int>(0, nodes - 1)(rng);
        if (u == v) continue;
        in.edges.push_back({u, v,
                            std::uniform_int_distribution<long long>(0, maxcap)(rng),
                            std::uniform_int_distribution<long long>(0, maxcost)(rng)});
    }
    std::vector<int> perm(nodes);
    for (int i = 0; i < nodes; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    in.terminals.assign(perm.begin(), perm.begin() + terminals);
    auto rep = check_feasibility(in);
    for (int ti = 0; ti < terminals; ++ti) {
        long long want = std::uniform_int_distribution<long long>(0, maxcap)(rng);
        in.demands.push_back(std::min(want, rep.kappa[ti]));
    }
    std::string text = instance_to_json(in);
    if (output.empty()) std::cout << text << "\n";
    else spit(output, text);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"minimum-cost free multiflow toolkit"};
    app.require_subcommand(1);

    std::string input, output, solution, algorithm = "scaling", start;
    bool verify = false;
    int nodes = 6, terminals = 3;
    long long maxcap = 3, maxcost = 3;
    unsigned seed = 0;

    auto* solve = app.add_subcommand("solve", "solve an instance");
    solve->add_option("--input", input)->required();
    solve->add_option("--algorithm", algorithm)
        ->check(CLI::IsMember({"scaling", "descent"}));
    solve->add_option("--output", output);
    solve->add_flag("--verify", verify);

    auto* ver = app.add_subcommand("verify", "check a solution certificate");
    ver->add_option("--input", input)->required();
    ver->add_option("--solution", solution)->required();

    auto* oracle = app.add_subcommand("oracle", "brute-force optimum");
    oracle->add_option("--input", input)->required();

    auto* kmin = app.add_subcommand("ksubmod-min", "minimize a term sum");
    kmin->add_option("--input", input)->required();

    auto* lmin = app.add_subcommand("lconvex-min", "minimize a 2-separable objective");
    lmin->add_option("--input", input)->required();
    lmin->add_option("--start", start);

    auto* mway = app.add_subcommand("multiway", "2-approximate multiway cut");
    mway->add_option("--input", input)->required();

    auto* gen = app.add_subcommand("gen", "generate a random feasible instance");
    gen->add_option("--nodes", nodes);
    gen->add_option("--terminals", terminals);
    gen->add_option("--maxcap", maxcap);
    gen->add_option("--maxcost", maxcost);
    gen->add_option("--seed", seed);
    gen->add_option("--output", output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        if (solve->parsed()) return cmd_solve(input, algorithm, output, verify);
        if (ver->parsed()) return cmd_verify(input, solution);
        if (oracle->parsed()) return cmd_oracle(input);
        if (kmin->parsed()) return cmd_ksubmod_min(input);
        if (lmin->parsed()) return cmd_lconvex_min(input, start);
        if (mway->parsed()) return cmd_multiway(input);
        if (gen->parsed())
            return cmd_gen(nodes, terminals, maxcap, maxcost, seed, output);
    } catch (const Infeasible& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    return kExitInvalid;
}
