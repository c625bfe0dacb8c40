#include "eqsolv/bench.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "eqsolv/group_reduction.hpp"

namespace eqsolv {

using nlohmann::json;

namespace {

template <class T>
std::vector<T> uint_list(const json& j, const char* key) {
    if (!j.is_array()) throw std::invalid_argument(std::string("bench key '") + key + "' must be a list");
    std::vector<T> out;
    for (const auto& x : j) {
        if (!x.is_number_unsigned()) throw std::invalid_argument(std::string("bench key '") + key + "' needs nonnegative integers");
        out.push_back(x.get<T>());
    }
    return out;
}

std::pair<std::uint32_t, std::uint32_t> split_prime_power(std::uint64_t q) {
    for (std::uint32_t p = 2; p <= q; ++p) {
        if (q % p != 0) continue;
        std::uint32_t k = 0;
        while (q % p == 0) {
            q /= p;
            ++k;
        }
        if (q != 1) break;
        return {p, k};
    }
    throw std::invalid_argument("bench q is not a prime power");
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt_ms(double ms) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << ms;
    return s.str();
}

std::string verdict_name(Verdict v) { return v == Verdict::Sat ? "SAT" : "UNSAT"; }

}  // namespace

BenchConfig parse_bench_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("bench config: ") + e.what());
    }
    static const std::set<std::string> top_keys{"seed", "oracle_guard", "families"};
    static const std::set<std::string> family_keys{"name",      "q",         "m",         "pattern",    "orders",
                                                   "lengths",   "variables", "constant_prob", "repetitions"};
    if (!root.is_object()) throw std::invalid_argument("bench config must be an object");
    for (const auto& [k, v] : root.items()) {
        if (!top_keys.count(k)) throw std::invalid_argument("unknown bench key '" + k + "'");
    }
    BenchConfig cfg;
    if (root.contains("seed")) cfg.seed = root["seed"].get<std::uint64_t>();
    if (root.contains("oracle_guard")) cfg.oracle_guard = root["oracle_guard"].get<std::uint64_t>();
    if (!root.contains("families") || !root["families"].is_array()) {
        throw std::invalid_argument("bench config needs a 'families' list");
    }
    for (const auto& f : root["families"]) {
        for (const auto& [k, v] : f.items()) {
            if (!family_keys.count(k)) throw std::invalid_argument("unknown family key '" + k + "'");
        }
        BenchFamily fam;
        fam.name = f.value("name", std::string("family") + std::to_string(cfg.families.size() + 1));
        fam.q = f.at("q").get<std::uint64_t>();
        fam.m = f.at("m").get<int>();
        const json& pat = f.at("pattern");
        if (pat.is_string() && pat.get<std::string>() == "full") {
            fam.pattern = full_pattern(fam.m);
        } else {
            for (const auto& pos : pat) {
                if (!pos.is_array() || pos.size() != 2) throw std::invalid_argument("pattern entries must be [i,j]");
                fam.pattern.emplace_back(pos[0].get<int>() - 1, pos[1].get<int>() - 1);
            }
        }
        fam.orders = f.contains("orders") ? uint_list<std::uint32_t>(f["orders"], "orders")
                                          : std::vector<std::uint32_t>(fam.m, 1);
        fam.lengths = uint_list<std::uint32_t>(f.at("lengths"), "lengths");
        if (f.contains("variables")) {
            const json& v = f["variables"];
            if (!(v.is_string() && v.get<std::string>() == "all")) fam.variables = uint_list<std::uint32_t>(v, "variables");
        }
        fam.constant_prob = f.value("constant_prob", 0.0);
        fam.repetitions = f.value("repetitions", 1u);
        cfg.families.push_back(std::move(fam));
    }
    return cfg;
}

std::string bench_csv_header() {
    return "family,n,m,q,vars,rep,corner_factors,system_length,reduction_ms,solver_ms,oracle_ms,verdict,"
           "oracle_verdict,agree";
}

std::string to_csv(const BenchRow& r) {
    std::ostringstream s;
    s << r.family << ',' << r.n << ',' << r.m << ',' << r.q << ',' << r.vars << ',' << r.rep << ','
      << r.corner_factors << ',' << r.system_length << ',' << fmt_ms(r.reduction_ms) << ',' << fmt_ms(r.solver_ms)
      << ',' << (r.oracle_verdict ? fmt_ms(r.oracle_ms) : "skipped") << ',' << verdict_name(r.verdict) << ','
      << (r.oracle_verdict ? verdict_name(*r.oracle_verdict) : "skipped") << ','
      << (r.oracle_verdict ? (*r.oracle_verdict == r.verdict ? "yes" : "NO") : "skipped");
    return s.str();
}

GroupElement random_element(const SemipatternGroup& g, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::uint64_t> pick(0, g.order() - 1);
    return g.element_at(pick(rng));
}

GroupWord random_word(const SemipatternGroup& g, std::uint32_t n, std::uint32_t vars, double constant_prob,
                      std::mt19937_64& rng) {
    std::bernoulli_distribution constant(vars == 0 ? 1.0 : constant_prob);
    std::uniform_int_distribution<std::uint32_t> var(0, vars == 0 ? 0 : vars - 1);
    GroupWord w;
    for (std::uint32_t k = 0; k < n; ++k) {
        if (constant(rng)) {
            w.letters.push_back(Letter::constant(random_element(g, rng)));
        } else {
            w.letters.push_back(Letter::variable(var(rng)));
        }
    }
    return w;
}

std::vector<BenchRow> run_bench(const BenchConfig& config, const SolveOptions& options, std::ostream& out) {
    std::mt19937_64 rng(config.seed);
    std::vector<BenchRow> rows;
    out << bench_csv_header() << '\n';
    for (const auto& fam : config.families) {
        const auto [p, k] = split_prime_power(fam.q);
        const SemipatternGroup g(make_field(p, k), fam.m, fam.pattern, fam.orders);
        for (std::uint32_t n : fam.lengths) {
            const std::vector<std::uint32_t> var_counts =
                fam.variables.empty() ? std::vector<std::uint32_t>{n} : fam.variables;
            for (std::uint32_t v : var_counts) {
                for (std::uint32_t rep = 0; rep < fam.repetitions; ++rep) {
                    GroupWord w;
                    if (fam.variables.empty()) {
                        for (std::uint32_t t = 0; t < n; ++t) w.letters.push_back(Letter::variable(t));
                    } else {
                        w = random_word(g, n, v, fam.constant_prob, rng);
                    }
                    const GroupElement rhs = random_element(g, rng);
                    const auto used = static_cast<std::uint32_t>(w.variables().size());

                    BenchRow row;
                    row.family = fam.name;
                    row.n = n;
                    row.m = fam.m;
                    row.q = fam.q;
                    row.vars = used;
                    row.rep = rep;

                    auto t0 = std::chrono::steady_clock::now();
                    const PolySystem system = build_system(g, w, rhs);
                    row.reduction_ms = ms_since(t0);
                    const SymbolicMatrix product = symbolic_product(g, w);
                    row.corner_factors = fam.m > 1 ? product(0, fam.m - 1).factor_length() : 0;
                    row.system_length = system.total_length();

                    t0 = std::chrono::steady_clock::now();
                    const Solution sol = solve(system, options);
                    row.solver_ms = ms_since(t0);
                    row.verdict = sol.verdict;

                    const long double space = std::pow(static_cast<long double>(g.order()), used);
                    if (space <= static_cast<long double>(config.oracle_guard)) {
                        t0 = std::chrono::steady_clock::now();
                        row.oracle_verdict = brute_force_solve(g, w, rhs, config.oracle_guard).verdict;
                        row.oracle_ms = ms_since(t0);
                    }
                    out << to_csv(row) << '\n' << std::flush;
                    rows.push_back(std::move(row));
                }
            }
        }
    }
    return rows;
}

}  // namespace eqsolv
