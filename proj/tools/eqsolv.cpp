// eqsolv: decide equations over semipattern groups and nilpotent matrix rings.
//
// Exit codes: decide/oracle 0 = SAT, 1 = UNSAT; equiv 0 = equivalent,
// 1 = not equivalent; 2 = error; 3 = oracle disagreement.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "eqsolv/bench.hpp"
#include "eqsolv/group_reduction.hpp"
#include "eqsolv/nilpotent_ring.hpp"
#include "eqsolv/problem_file.hpp"

using namespace eqsolv;

namespace {

constexpr int kSat = 0;
constexpr int kUnsat = 1;
constexpr int kError = 2;
constexpr int kDisagree = 3;

struct Flags {
    std::string path;
    bool oracle = false;
    std::string dump_path;
    std::uint64_t guard = 100'000'000;
    std::uint64_t seed = 0;
    std::string backend = "pruned";
    std::string out_path;
};

SolveOptions solve_options(const Flags& f) {
    SolveOptions o;
    o.backend = parse_backend(f.backend);
    o.guard = f.guard;
    o.seed = f.seed;
    return o;
}

const char* verdict_name(Verdict v) { return v == Verdict::Sat ? "SAT" : "UNSAT"; }

void print_stats(const SolveStats& s) {
    std::cout << "stats: explored=" << s.explored << " prunes=" << s.prunes
              << " linear_completions=" << s.linear_completions << " time_ms=" << s.wall_ms << '\n';
}

template <class Map>
void print_witness(const Map& witness, const std::vector<std::string>& names) {
    for (const auto& [v, value] : witness) std::cout << "  " << names.at(v) << " = " << format_element(value) << '\n';
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

RingExpr factor_expr(const RingProblem& rp) {
    if (rp.rhs == rp.ring.zero()) return rp.expr;
    return rp.expr - RingExpr::constant(rp.rhs);
}

PolySystem ring_system(const RingProblem& rp) {
    if (rp.ideal) {
        const RingExpr e = factor_expr(rp);
        return build_ring_system(rp.ring, sigma_expand(e, rp.ring), rp.ring.zero(), e.variables());
    }
    return build_ring_system(rp.ring, sigma_expand(rp.expr, rp.ring), rp.rhs, rp.expr.variables());
}

std::string dump_text(const ProblemFile& file) {
    if (file.group) {
        const GroupProblem gp = resolve_group(file);
        return render_system(build_system(gp.group, gp.lhs, gp.rhs), gp.var_names);
    }
    const RingProblem rp = resolve_ring(file);
    std::string head;
    if (rp.ideal) {
        head = "# right-hand side ranges over the " + std::to_string(rp.ideal->elements.size()) +
               " elements of the ideal\n";
    }
    return head + render_system(ring_system(rp), rp.var_names);
}

int decide_group(const ProblemFile& file, const Flags& flags) {
    const GroupProblem gp = resolve_group(file);
    const SemipatternGroup& g = gp.group;
    std::cout << "group: m=" << g.dim() << " over " << g.domain()->name() << ", |P|=" << g.pattern().size()
              << ", order " << g.order() << '\n';
    const GroupDecision d = decide_equation(g, gp.lhs, gp.rhs, solve_options(flags));
    std::cout << "system length: " << d.system_length << '\n';
    std::cout << "verdict: " << verdict_name(d.verdict) << '\n';
    if (d.sat()) {
        print_witness(d.witness, gp.var_names);
        std::cout << "witness verified\n";
    }
    print_stats(d.stats);
    if (flags.oracle) {
        const GroupDecision o = brute_force_solve(g, gp.lhs, gp.rhs, flags.guard);
        std::cout << "oracle: " << verdict_name(o.verdict) << '\n';
        if (o.verdict != d.verdict) {
            std::cout << "oracle DISAGREES\n";
            return kDisagree;
        }
    }
    return d.sat() ? kSat : kUnsat;
}

int decide_ring(const ProblemFile& file, const Flags& flags) {
    const RingProblem rp = resolve_ring(file);
    const NilpotentRing& ring = rp.ring;
    std::cout << "ring: m=" << ring.dim() << " over " << ring.domain()->name() << ", order " << ring.cardinality();
    if (rp.ideal) std::cout << ", ideal of order " << rp.ideal->elements.size();
    std::cout << '\n';
    RingDecision d = rp.ideal ? decide_factor_ring(ring, *rp.ideal, factor_expr(rp), solve_options(flags))
                              : decide_ring_equation(ring, rp.expr, rp.rhs, solve_options(flags));
    std::cout << "verdict: " << verdict_name(d.verdict) << '\n';
    if (d.sat()) {
        print_witness(d.witness, rp.var_names);
        if (rp.ideal) std::cout << "  lhs - rhs = " << format_element(*d.target) << " (in the ideal)\n";
        std::cout << "witness verified\n";
    }
    print_stats(d.stats);
    if (flags.oracle) {
        const RingDecision o = rp.ideal ? brute_force_ring_solve(ring, rp.expr, rp.rhs, &*rp.ideal, flags.guard)
                                        : brute_force_ring_solve(ring, rp.expr, rp.rhs, nullptr, flags.guard);
        std::cout << "oracle: " << verdict_name(o.verdict) << '\n';
        if (o.verdict != d.verdict) {
            std::cout << "oracle DISAGREES\n";
            return kDisagree;
        }
    }
    return d.sat() ? kSat : kUnsat;
}

int cmd_decide(const Flags& flags) {
    const ProblemFile file = load_problem(flags.path);
    if (!flags.dump_path.empty()) write_file(flags.dump_path, dump_text(file));
    return file.group ? decide_group(file, flags) : decide_ring(file, flags);
}

int cmd_oracle(const Flags& flags) {
    const ProblemFile file = load_problem(flags.path);
    if (file.group) {
        const GroupProblem gp = resolve_group(file);
        const GroupDecision o = brute_force_solve(gp.group, gp.lhs, gp.rhs, flags.guard);
        std::cout << "oracle: " << verdict_name(o.verdict) << '\n';
        if (o.sat()) print_witness(o.witness, gp.var_names);
        std::cout << "substitutions tried: " << o.stats.explored << '\n';
        return o.sat() ? kSat : kUnsat;
    }
    const RingProblem rp = resolve_ring(file);
    const RingDecision o = brute_force_ring_solve(rp.ring, rp.expr, rp.rhs, rp.ideal ? &*rp.ideal : nullptr, flags.guard);
    std::cout << "oracle: " << verdict_name(o.verdict) << '\n';
    if (o.sat()) print_witness(o.witness, rp.var_names);
    std::cout << "substitutions tried: " << o.stats.explored << '\n';
    return o.sat() ? kSat : kUnsat;
}

int cmd_equiv(const Flags& flags) {
    const ProblemFile file = load_problem(flags.path);
    if (!file.group) throw std::invalid_argument("equiv needs a [group] problem");
    const GroupProblem gp = resolve_group(file);
    GroupWord rhs;
    if (const auto* w = std::get_if<GroupWord>(&gp.rhs)) {
        rhs = *w;
    } else {
        rhs.letters.push_back(Letter::constant(std::get<GroupElement>(gp.rhs)));
    }
    const EquivalenceResult r = decide_equivalence(gp.group, gp.lhs, rhs, solve_options(flags));
    std::cout << "equations solved: " << r.equations_solved << '\n';
    if (r.equivalent) {
        std::cout << "equivalent\n";
        return 0;
    }
    std::cout << "not equivalent; separating substitution:\n";
    GroupAssignment full = *r.separating;
    for (VarId v = 0; v < gp.var_names.size(); ++v) full.emplace(v, gp.group.identity());
    print_witness(full, gp.var_names);
    const GroupElement left = evaluate_word(gp.group, gp.lhs, full);
    const GroupElement right = evaluate_word(gp.group, rhs, full);
    if (left == right) throw std::logic_error("separating substitution failed re-verification");
    std::cout << "  lhs = " << format_element(left) << "\n  rhs = " << format_element(right) << '\n';
    return 1;
}

int cmd_dump(const Flags& flags) {
    const ProblemFile file = load_problem(flags.path);
    const std::string text = dump_text(file);
    if (flags.out_path.empty()) {
        std::cout << text;
    } else {
        write_file(flags.out_path, text);
    }
    return 0;
}

int cmd_bench(const Flags& flags, bool seed_given) {
    std::ifstream in(flags.path);
    if (!in) throw std::runtime_error("cannot open " + flags.path);
    std::stringstream buf;
    buf << in.rdbuf();
    BenchConfig cfg = parse_bench_config(buf.str());
    if (seed_given) cfg.seed = flags.seed;
    if (flags.out_path.empty()) {
        run_bench(cfg, solve_options(flags), std::cout);
    } else {
        std::ofstream out(flags.out_path);
        if (!out) throw std::runtime_error("cannot write " + flags.out_path);
        run_bench(cfg, solve_options(flags), out);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Equation solvability over semipattern groups and nilpotent matrix rings"};
    app.require_subcommand(1);
    Flags flags;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--guard", flags.guard, "Search guard (explored assignments / brute-force substitutions)");
        sub->add_option("--backend", flags.backend, "Solver backend: pruned or naive");
        sub->add_option("--seed", flags.seed, "Seed");
    };

    auto* decide = app.add_subcommand("decide", "Decide solvability of the equation in a problem file");
    decide->add_option("problem", flags.path)->required();
    decide->add_flag("--oracle", flags.oracle, "Cross-check with the brute-force oracle");
    decide->add_option("--dump-system", flags.dump_path, "Write the reduced polynomial system to a file");
    add_common(decide);

    auto* equiv = app.add_subcommand("equiv", "Decide whether lhs and rhs agree under every substitution");
    equiv->add_option("problem", flags.path)->required();
    add_common(equiv);

    auto* oracle = app.add_subcommand("oracle", "Brute-force decision only");
    oracle->add_option("problem", flags.path)->required();
    add_common(oracle);

    auto* dump = app.add_subcommand("dump-system", "Print the reduced polynomial system");
    dump->add_option("problem", flags.path)->required();
    dump->add_option("-o,--out", flags.out_path, "Output file");

    auto* bench = app.add_subcommand("bench", "Run a bench config and print CSV rows");
    bench->add_option("config", flags.path)->required();
    bench->add_option("-o,--out", flags.out_path, "CSV output file");
    add_common(bench);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kError;
    }

    try {
        if (*decide) return cmd_decide(flags);
        if (*equiv) return cmd_equiv(flags);
        if (*oracle) return cmd_oracle(flags);
        if (*dump) return cmd_dump(flags);
        if (*bench) return cmd_bench(flags, bench->count("--seed") > 0);
    } catch (const ParseError& e) {
        std::cerr << flags.path << ": " << e.what() << '\n';
        return kError;
    } catch (const GuardExceeded& e) {
        std::cerr << "guard exceeded: " << e.what() << '\n';
        return kError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kError;
    }
    return kError;
}
