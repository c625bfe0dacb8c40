// Acceptance gate: one PASS/FAIL line per check, nonzero exit on any FAIL.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "eqsolv/bench.hpp"
#include "eqsolv/group_reduction.hpp"
#include "eqsolv/nilpotent_ring.hpp"
#include "ring_support.hpp"

using namespace eqsolv;
using eqsolv::testing::random_ring_element;
using eqsolv::testing::random_sigma_expr;
using Clock = std::chrono::steady_clock;

namespace {

constexpr int kGroupInstances = 500;
constexpr double kGroupBudgetSeconds = 300.0;
constexpr int kCommutationPairs = 1000;
constexpr int kNilpotentProducts = 10'000;
constexpr int kRingInstances = 500;
constexpr int kFactorInstances = 100;
constexpr int kEquivalencePairs = 100;
constexpr double kScalingBudgetSeconds = 60.0;

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
    std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double seconds_since(Clock::time_point t) {
    return std::chrono::duration<double>(Clock::now() - t).count();
}

SemipatternGroup ut(std::uint32_t q, int m) {
    return SemipatternGroup(make_field(q), m, full_pattern(m), std::vector<std::uint32_t>(m, 1));
}

SemipatternGroup order54() { return SemipatternGroup(make_field(3), 3, full_pattern(3), {1, 2, 1}); }

SemipatternGroup sparse18() { return SemipatternGroup(make_field(3), 3, {{0, 1}, {0, 2}}, {2, 1, 1}); }

std::vector<SemipatternGroup> group_family() { return {ut(2, 3), ut(2, 4), order54(), sparse18()}; }

GroupWord distinct_vars(std::uint32_t n) {
    GroupWord w;
    for (std::uint32_t k = 0; k < n; ++k) w.letters.push_back(Letter::variable(k));
    return w;
}

GroupAssignment random_assignment(const SemipatternGroup& g, const std::set<VarId>& vars, std::mt19937_64& rng) {
    GroupAssignment a;
    for (VarId v : vars) a[v] = random_element(g, rng);
    return a;
}

Assignment slot_assignment(const SemipatternGroup& g, const GroupAssignment& a) {
    Assignment out;
    for (const auto& [v, e] : a) {
        for (int i = 0; i < g.dim(); ++i) out[Variable::subgroup_slot(i, v)] = e(i, i);
        for (auto [i, j] : g.pattern()) out[Variable::field_slot(i, j, v)] = e(i, j);
    }
    return out;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

void check_group_reduction() {
    std::mt19937_64 rng(101);
    const auto groups = group_family();
    std::uniform_int_distribution<std::uint32_t> len(0, 8), nvars(1, 3);
    std::bernoulli_distribution reachable(0.5);
    int agree = 0, sat = 0, witnesses_ok = 0;
    const auto start = Clock::now();
    for (int t = 0; t < kGroupInstances; ++t) {
        const SemipatternGroup& g = groups[t % groups.size()];
        const GroupWord w = random_word(g, len(rng), nvars(rng), 0.3, rng);
        const GroupElement rhs =
            reachable(rng) ? evaluate_word(g, w, random_assignment(g, w.variables(), rng)) : random_element(g, rng);
        const GroupDecision d = decide_equation(g, w, rhs);
        const GroupDecision o = brute_force_solve(g, w, rhs);
        if (d.verdict == o.verdict) ++agree;
        if (d.sat()) {
            ++sat;
            if (evaluate_word(g, w, d.witness) == rhs) ++witnesses_ok;
        }
    }
    const double secs = seconds_since(start);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d/%d verdicts agree, %d SAT witnesses verified of %d, %.1f s (limit %.0f s)",
                  agree, kGroupInstances, witnesses_ok, sat, secs, kGroupBudgetSeconds);
    report("group equations vs brute force", agree == kGroupInstances && witnesses_ok == sat &&
                                                 secs < kGroupBudgetSeconds, buf);
}

void check_count_law() {
    int entries = 0, bad = 0;
    for (std::uint32_t q : {2u, 3u}) {
        for (int m = 2; m <= 4; ++m) {
            const SemipatternGroup g = ut(q, m);
            for (std::uint32_t n = 0; n <= 6; ++n) {
                const SymbolicMatrix s = symbolic_product(g, distinct_vars(n));
                for (int i = 0; i < m; ++i) {
                    for (int j = i + 1; j < m; ++j) {
                        ++entries;
                        const auto& monos = s(i, j).monomials();
                        bool ok = monos.size() == binomial(n + j - i - 1, j - i);
                        for (const auto& mono : monos) ok = ok && mono.degree() == n && mono.coef == 1;
                        if (!ok) ++bad;
                    }
                }
            }
        }
    }
    report("entry monomial count law", bad == 0,
           std::to_string(entries - bad) + "/" + std::to_string(entries) + " entries match C(n+j-i-1, j-i)");
}

void check_commutation() {
    std::mt19937_64 rng(202);
    std::uniform_int_distribution<std::uint32_t> len(0, 8);
    int bad = 0, total = 0;
    for (const auto& g : group_family()) {
        for (int t = 0; t < kCommutationPairs; ++t) {
            ++total;
            const GroupWord w = random_word(g, len(rng), 3, 0.3, rng);
            const GroupAssignment a = random_assignment(g, {0, 1, 2}, rng);
            const SymbolicMatrix s = symbolic_product(g, w);
            const GroupElement value = evaluate_word(g, w, a);
            const Assignment slots = slot_assignment(g, a);
            bool ok = true;
            for (int i = 0; i < g.dim(); ++i)
                for (int j = i; j < g.dim(); ++j) ok = ok && evaluate(s(i, j), slots) == value(i, j);
            if (!ok) ++bad;
        }
    }
    report("symbolic product commutes with evaluation", bad == 0,
           std::to_string(total - bad) + "/" + std::to_string(total) + " pairs over 4 groups");
}

void check_nilpotency() {
    std::mt19937_64 rng(303);
    std::string detail;
    bool ok = true;
    const std::vector<std::array<std::uint32_t, 3>> params{{2, 1, 2}, {2, 2, 2}, {3, 1, 3}, {2, 2, 3}};
    for (const auto& [m, alpha, p] : params) {
        const NilpotentRing r(p, alpha, static_cast<int>(m));
        int nonzero = 0;
        for (int t = 0; t < kNilpotentProducts; ++t) {
            RingElement acc = random_ring_element(r, rng);
            for (std::uint32_t k = 1; k < r.nilpotency_bound(); ++k) acc = r.mul(acc, random_ring_element(r, rng));
            if (acc != r.zero()) ++nonzero;
        }
        ok = ok && nonzero == 0;
        std::uint32_t modulus = 1;
        for (std::uint32_t k = 0; k < alpha; ++k) modulus *= p;
        detail += "M(" + std::to_string(m) + ",Z_" + std::to_string(modulus) + "): " + std::to_string(nonzero) + " nonzero; ";
    }
    // exhaustive search for a nonzero product one factor short of the bound
    const NilpotentRing r(2, 2, 2);
    const auto elems = r.elements();
    std::vector<RingElement> witness;
    std::function<bool(const RingElement&, std::uint32_t)> search = [&](const RingElement& acc, std::uint32_t depth) {
        if (depth == r.nilpotency_bound() - 1) return acc != r.zero();
        for (const auto& e : elems) {
            witness.push_back(e);
            if (search(depth == 0 ? e : r.mul(acc, e), depth + 1)) return true;
            witness.pop_back();
        }
        return false;
    };
    const bool found = search(r.zero(), 0);
    ok = ok && found;
    if (found) {
        RingElement acc = witness.front();
        for (std::size_t k = 1; k < witness.size(); ++k) acc = r.mul(acc, witness[k]);
        ok = ok && acc != r.zero() && witness.size() == 3;
        detail += "nonzero 3-fold product in M(2,Z_4) found";
    } else {
        detail += "no nonzero 3-fold product in M(2,Z_4)";
    }
    report("ring nilpotency bound", ok, detail);
}

struct LengthAudit {
    std::uint64_t monomials = 0;
    std::uint64_t violations = 0;
    std::size_t worst = 0;

    void check(const NilpotentRing& r, const SigmaForm& form) {
        const std::uint64_t bound = entry_length_bound(r);
        for (const auto& mono : form.monomials) {
            ++monomials;
            const Matrix<Polynomial> e = entrywise_rewrite(SigmaForm{{mono}}, r);
            for (int i = 0; i < r.dim(); ++i) {
                for (int j = 0; j < r.dim(); ++j) {
                    const Polynomial& g = e(i, j);
                    worst = std::max(worst, g.factor_length());
                    bool ok = g.factor_length() <= bound;
                    for (const auto& m : g.monomials()) ok = ok && m.degree() <= r.nilpotency_bound() - 1;
                    if (!ok) ++violations;
                }
            }
        }
    }
};

LengthAudit length_audit;

void check_ring_reduction() {
    std::mt19937_64 rng(404);
    const std::vector<NilpotentRing> rings{NilpotentRing(2, 1, 2), NilpotentRing(2, 2, 2), NilpotentRing(3, 1, 3)};
    std::bernoulli_distribution reachable(0.5);
    int agree = 0, sat = 0, witnesses_ok = 0;
    for (int t = 0; t < kRingInstances; ++t) {
        const NilpotentRing& r = rings[t % rings.size()];
        const RingExpr e = random_sigma_expr(r, rng, 2);
        RingAssignment probe;
        for (VarId v : e.variables()) probe[v] = random_ring_element(r, rng);
        const RingElement rhs = reachable(rng) ? evaluate(r, e, probe) : random_ring_element(r, rng);
        length_audit.check(r, sigma_expand(e, r));
        const RingDecision d = decide_ring_equation(r, e, rhs);
        const RingDecision o = brute_force_ring_solve(r, e, rhs);
        if (d.verdict == o.verdict) ++agree;
        if (d.sat()) {
            ++sat;
            if (evaluate(r, e, d.witness) == rhs) ++witnesses_ok;
        }
    }
    report("ring equations vs brute force", agree == kRingInstances && witnesses_ok == sat,
           std::to_string(agree) + "/" + std::to_string(kRingInstances) + " verdicts agree, " +
               std::to_string(witnesses_ok) + " SAT witnesses verified of " + std::to_string(sat));
}

// M/I by coset representatives: the least-index element of x + I.
struct Quotient {
    const NilpotentRing& r;
    std::vector<RingElement> ideal;

    RingElement canon(const RingElement& x) const {
        RingElement best = x;
        for (const auto& i : ideal) {
            const RingElement y = r.add(x, i);
            if (r.index_of(y) < r.index_of(best)) best = y;
        }
        return best;
    }

    RingElement eval(const RingExpr& e, const RingAssignment& a) const {
        switch (e.kind()) {
            case RingExpr::Kind::Const: return canon(e.value());
            case RingExpr::Kind::Var: return canon(a.at(e.var_id()));
            case RingExpr::Kind::Neg: return canon(r.neg(eval(e.children()[0], a)));
            case RingExpr::Kind::Scale: {
                const auto n = static_cast<std::int64_t>(r.domain()->cardinality());
                const auto k = static_cast<Scalar>(((e.factor() % n) + n) % n);
                return canon(r.scale(eval(e.children()[0], a), k));
            }
            case RingExpr::Kind::Sum: {
                RingElement acc = r.zero();
                for (const auto& c : e.children()) acc = canon(r.add(acc, eval(c, a)));
                return acc;
            }
            case RingExpr::Kind::Product: {
                RingElement acc = eval(e.children()[0], a);
                for (std::size_t k = 1; k < e.children().size(); ++k) acc = canon(r.mul(acc, eval(e.children()[k], a)));
                return acc;
            }
        }
        return r.zero();
    }

    std::vector<RingElement> representatives() const {
        std::vector<RingElement> out;
        for (const auto& x : r.elements())
            if (canon(x) == x) out.push_back(x);
        return out;
    }

    bool solvable(const RingExpr& e) const {
        const auto reps = representatives();
        const std::set<VarId> used = e.variables();
        const std::vector<VarId> vars(used.begin(), used.end());
        std::vector<std::size_t> idx(vars.size(), 0);
        const RingElement zero = canon(r.zero());
        while (true) {
            RingAssignment a;
            for (std::size_t k = 0; k < vars.size(); ++k) a[vars[k]] = reps[idx[k]];
            if (eval(e, a) == zero) return true;
            std::size_t k = 0;
            for (; k < vars.size(); ++k) {
                if (++idx[k] < reps.size()) break;
                idx[k] = 0;
            }
            if (k == vars.size()) return false;
        }
    }
};

void check_factor_ring() {
    std::mt19937_64 rng(505);
    const NilpotentRing r(2, 2, 2);
    RingElement gen = r.zero();
    gen(0, 1) = 2;
    const Ideal ideal = enumerate_ideal(r, {gen});
    const Quotient quotient{r, {r.zero(), gen}};
    const bool ideal_ok = ideal.elements.size() == 2 && ideal.contains(r.zero()) && ideal.contains(gen);
    const std::size_t cosets = quotient.representatives().size();
    std::bernoulli_distribution reachable(0.5);
    int agree = 0;
    for (int t = 0; t < kFactorInstances; ++t) {
        const RingExpr e = random_sigma_expr(r, rng, 2);
        RingAssignment probe;
        for (VarId v : e.variables()) probe[v] = random_ring_element(r, rng);
        const RingElement rhs = reachable(rng) ? evaluate(r, e, probe) : random_ring_element(r, rng);
        const RingExpr eq = e - RingExpr::constant(rhs);
        length_audit.check(r, sigma_expand(eq, r));
        const RingDecision d = decide_factor_ring(r, ideal, eq);
        bool ok = d.sat() == quotient.solvable(eq);
        if (d.sat()) ok = ok && ideal.contains(evaluate(r, eq, d.witness));
        if (ok) ++agree;
    }
    report("factor ring equations vs coset arithmetic", ideal_ok && cosets == 16 && agree == kFactorInstances,
           std::to_string(agree) + "/" + std::to_string(kFactorInstances) + " agree, |I| = " +
               std::to_string(ideal.elements.size()) + ", " + std::to_string(cosets) + " cosets");
}

void check_entry_lengths() {
    report("entry length bounds", length_audit.violations == 0 && length_audit.monomials > 0,
           std::to_string(length_audit.violations) + " violations over " + std::to_string(length_audit.monomials) +
               " rewritten monomials, longest entry " + std::to_string(length_audit.worst));
}

bool exhaustively_equivalent(const SemipatternGroup& g, const GroupWord& f, const GroupWord& h) {
    const auto elems = g.elements();
    const std::vector<VarId> vars{0, 1};
    for (const auto& a : elems)
        for (const auto& b : elems) {
            const GroupAssignment asg{{0, a}, {1, b}};
            if (evaluate_word(g, f, asg) != evaluate_word(g, h, asg)) return false;
        }
    return true;
}

GroupWord commuted(const GroupWord& w) {
    GroupWord out = w;
    for (auto& l : out.letters)
        if (l.is_variable()) l = Letter::variable(1 - l.var());
    return out;
}

void check_equivalence() {
    std::mt19937_64 rng(606);
    std::vector<SemipatternGroup> groups = group_family();
    groups.erase(groups.begin() + 1);
    groups.push_back(ut(3, 3));
    groups.push_back(ut(2, 4));
    std::uniform_int_distribution<std::uint32_t> len(0, 6);
    std::uniform_int_distribution<int> shape(0, 2);
    int agree = 0, equivalent = 0;
    bool sizes_ok = true;
    for (int t = 0; t < kEquivalencePairs; ++t) {
        const SemipatternGroup& g = groups[t % groups.size()];
        sizes_ok = sizes_ok && g.order() <= 100;
        const GroupWord f = random_word(g, len(rng), 2, 0.2, rng);
        GroupWord h;
        switch (shape(rng)) {
            case 0: h = random_word(g, len(rng), 2, 0.2, rng); break;
            case 1: h = commuted(f); break;
            default: {
                GroupWord power;
                for (std::uint64_t k = 0; k < exponent_bound(g); ++k) power.letters.push_back(Letter::variable(0));
                h = power * f;
            }
        }
        const bool expected = exhaustively_equivalent(g, f, h);
        const EquivalenceResult res = decide_equivalence(g, f, h);
        bool ok = res.equivalent == expected;
        if (!res.equivalent && res.separating) {
            GroupAssignment s = *res.separating;
            for (VarId v : {0u, 1u}) s.try_emplace(v, g.identity());
            ok = ok && evaluate_word(g, f, s) != evaluate_word(g, h, s);
        }
        if (ok) ++agree;
        if (expected) ++equivalent;
    }
    report("equivalence vs exhaustive substitution", sizes_ok && agree == kEquivalencePairs,
           std::to_string(agree) + "/" + std::to_string(kEquivalencePairs) + " agree, " +
               std::to_string(equivalent) + " equivalent pairs");
}

void check_scaling() {
    std::mt19937_64 rng(707);
    const SemipatternGroup g = order54();
    std::vector<std::pair<GroupWord, GroupElement>> cases;
    cases.emplace_back(distinct_vars(6), random_element(g, rng));
    cases.emplace_back(distinct_vars(6), g.identity());
    GroupWord twice = distinct_vars(6) * distinct_vars(6);
    cases.emplace_back(twice, random_element(g, rng));
    GroupWord mixed = random_word(g, 10, 6, 0.2, rng);
    cases.emplace_back(mixed, evaluate_word(g, mixed, random_assignment(g, mixed.variables(), rng)));
    double worst = 0;
    bool ok = true;
    int sat = 0;
    for (const auto& [w, rhs] : cases) {
        const auto start = Clock::now();
        try {
            const GroupDecision d = decide_equation(g, w, rhs);
            if (d.sat()) {
                ++sat;
                ok = ok && evaluate_word(g, w, d.witness) == rhs;
            }
        } catch (const std::exception&) {
            ok = false;
        }
        worst = std::max(worst, seconds_since(start));
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu instances over 6 variables, %d SAT and verified, slowest %.2f s (limit %.0f s)",
                  cases.size(), sat, worst, kScalingBudgetSeconds);
    report("order-54 group with six variables", ok && worst < kScalingBudgetSeconds, buf);
}

}  // namespace

int main() {
    check_group_reduction();
    check_count_law();
    check_commutation();
    check_nilpotency();
    check_ring_reduction();
    check_factor_ring();
    check_entry_lengths();
    check_equivalence();
    check_scaling();
    std::printf("%d failing\n", failures);
    return failures == 0 ? 0 : 1;
}
