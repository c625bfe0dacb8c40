#include "eqsolv/group_reduction.hpp"

#include <stdexcept>

namespace eqsolv {

SymbolicLetter symbolic_letter(const SemipatternGroup& g, const Letter& letter) {
    const int m = g.dim();
    const DomainPtr& d = g.domain();
    SymbolicMatrix slots(m, m, Polynomial(d));
    if (letter.is_variable()) {
        const VarId k = letter.var();
        for (int i = 0; i < m; ++i) slots(i, i) = Polynomial::variable(d, Variable::subgroup_slot(i, k));
        for (const auto& [i, j] : g.pattern()) {
            slots(i, j) = Polynomial::variable(d, Variable::field_slot(i, j, k));
        }
    } else {
        const GroupElement& c = letter.element();
        if (!g.contains(c)) throw std::invalid_argument("constant letter is not a group element");
        for (int i = 0; i < m; ++i) {
            for (int j = i; j < m; ++j) slots(i, j) = Polynomial::constant(d, c(i, j));
        }
    }
    return SymbolicLetter{std::move(slots)};
}

SymbolicMatrix symbolic_product(const std::vector<SymbolicLetter>& letters, int m,
                                const DomainPtr& domain) {
    SymbolicMatrix acc(m, m, Polynomial(domain));
    for (int i = 0; i < m; ++i) acc(i, i) = Polynomial::constant(domain, domain->one());
    for (const auto& letter : letters) {
        SymbolicMatrix next(m, m, Polynomial(domain));
        for (int i = 0; i < m; ++i) {
            for (int j = i; j < m; ++j) {
                Polynomial sum(domain);
                for (int k = i; k <= j; ++k) {
                    if (acc(i, k).is_zero() || letter.slots(k, j).is_zero()) continue;
                    sum += acc(i, k) * letter.slots(k, j);
                }
                next(i, j) = std::move(sum);
            }
        }
        acc = std::move(next);
    }
    return acc;
}

SymbolicMatrix symbolic_product(const SemipatternGroup& g, const GroupWord& w) {
    std::vector<SymbolicLetter> letters;
    letters.reserve(w.size());
    for (const auto& l : w.letters) letters.push_back(symbolic_letter(g, l));
    return symbolic_product(letters, g.dim(), g.domain());
}

std::uint64_t entry_monomial_count(std::uint64_t n, int i, int j) {
    if (j <= i) throw std::invalid_argument("entry_monomial_count needs i < j");
    const std::uint64_t k = static_cast<std::uint64_t>(j - i);
    if (n == 0) return 0;
    // C(n + k - 1, k), built incrementally so every step stays integral.
    std::uint64_t c = 1;
    for (std::uint64_t t = 1; t <= k; ++t) c = c * (n - 1 + t) / t;
    return c;
}

void add_letter_domains(const SemipatternGroup& g, VarId v, VariableDomains& domains) {
    std::vector<Scalar> full(g.domain()->cardinality());
    for (Scalar x = 0; x < full.size(); ++x) full[x] = x;
    for (int i = 0; i < g.dim(); ++i) {
        domains[Variable::subgroup_slot(i, v)] = g.subgroup(i).elements();
    }
    for (const auto& [i, j] : g.pattern()) domains[Variable::field_slot(i, j, v)] = full;
}

namespace {

std::set<VarId> equation_variables(const GroupWord& lhs, const GroupRhs& rhs) {
    std::set<VarId> vars = lhs.variables();
    if (const auto* w = std::get_if<GroupWord>(&rhs)) {
        const auto more = w->variables();
        vars.insert(more.begin(), more.end());
    }
    return vars;
}

}  // namespace

PolySystem build_system(const SemipatternGroup& g, const GroupWord& lhs, const GroupRhs& rhs) {
    const int m = g.dim();
    PolySystem system;
    system.domain = g.domain();
    const SymbolicMatrix left = symbolic_product(g, lhs);
    if (const auto* c = std::get_if<GroupElement>(&rhs)) {
        if (!g.contains(*c)) throw std::invalid_argument("right-hand side is not a group element");
        for (int i = 0; i < m; ++i) {
            for (int j = i; j < m; ++j) system.constraints.push_back({left(i, j), (*c)(i, j)});
        }
    } else {
        const SymbolicMatrix right = symbolic_product(g, std::get<GroupWord>(rhs));
        for (int i = 0; i < m; ++i) {
            for (int j = i; j < m; ++j) {
                system.constraints.push_back({left(i, j) - right(i, j), g.domain()->zero()});
            }
        }
    }
    for (VarId v : equation_variables(lhs, rhs)) add_letter_domains(g, v, system.domains);
    return system;
}

GroupAssignment reassemble_witness(const SemipatternGroup& g, const std::set<VarId>& vars,
                                   const Assignment& slots) {
    GroupAssignment out;
    const int m = g.dim();
    for (VarId v : vars) {
        GroupElement e(m, m, g.domain()->zero());
        for (int i = 0; i < m; ++i) e(i, i) = slots.at(Variable::subgroup_slot(i, v));
        for (const auto& [i, j] : g.pattern()) e(i, j) = slots.at(Variable::field_slot(i, j, v));
        out.emplace(v, std::move(e));
    }
    return out;
}

GroupDecision decide_equation(const SemipatternGroup& g, const GroupWord& lhs, const GroupRhs& rhs,
                              const SolveOptions& options) {
    const PolySystem system = build_system(g, lhs, rhs);
    const Solution solution = solve(system, options);
    GroupDecision out;
    out.verdict = solution.verdict;
    out.stats = solution.stats;
    out.system_length = system.total_length();
    if (solution.sat()) {
        out.witness = reassemble_witness(g, equation_variables(lhs, rhs), solution.witness);
        const GroupElement left = evaluate_word(g, lhs, out.witness);
        const GroupElement right = std::holds_alternative<GroupWord>(rhs)
                                       ? evaluate_word(g, std::get<GroupWord>(rhs), out.witness)
                                       : std::get<GroupElement>(rhs);
        if (left != right) throw std::logic_error("reduction witness failed re-verification");
    }
    return out;
}

EquivalenceResult decide_equivalence(const SemipatternGroup& g, const GroupWord& f, const GroupWord& h,
                                     const SolveOptions& options) {
    EquivalenceResult out;
    if (f == h) return out;
    const GroupElement id = g.identity();
    for (std::uint64_t index = 0; index < g.order(); ++index) {
        const GroupElement c = g.element_at(index);
        if (c == id) continue;
        GroupWord shifted;
        shifted.letters.push_back(Letter::constant(c));
        shifted = shifted * h;
        ++out.equations_solved;
        GroupDecision d = decide_equation(g, f, shifted, options);
        if (d.sat()) {
            out.equivalent = false;
            out.separating = std::move(d.witness);
            return out;
        }
    }
    return out;
}

}  // namespace eqsolv
