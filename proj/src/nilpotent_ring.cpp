#include "eqsolv/nilpotent_ring.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace eqsolv {

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
        return std::numeric_limits<std::uint64_t>::max();
    }
    return a * b;
}

bool above(int i, int j) { return i < j; }

}  // namespace

NilpotentRing::NilpotentRing(std::uint32_t p, std::uint32_t alpha, int m) : p_(p), alpha_(alpha), m_(m) {
    if (!is_prime(p)) throw std::invalid_argument("ring characteristic " + std::to_string(p) + " is not prime");
    if (alpha < 1) throw std::invalid_argument("ring exponent must be at least 1");
    if (m < 1 || m > 16) throw std::invalid_argument("ring dimension must lie in [1, 16]");
    domain_ = make_modular(p, alpha);
    below_range_ = domain_->cardinality() / p;
    for (int i = 0; i < m_; ++i) {
        for (int j = 0; j < m_; ++j) {
            cardinality_ = saturating_mul(cardinality_, above(i, j) ? domain_->cardinality() : below_range_);
        }
    }
}

bool NilpotentRing::contains(const RingElement& x) const {
    if (x.rows() != static_cast<std::size_t>(m_) || x.cols() != static_cast<std::size_t>(m_)) return false;
    for (int i = 0; i < m_; ++i) {
        for (int j = 0; j < m_; ++j) {
            const Scalar v = x(i, j);
            if (!domain_->contains(v)) return false;
            if (!above(i, j) && v % p_ != 0) return false;
        }
    }
    return true;
}

RingElement NilpotentRing::zero() const { return RingElement(m_, m_, Scalar{0}); }

RingElement NilpotentRing::add(const RingElement& a, const RingElement& b) const {
    RingElement out(m_, m_, Scalar{0});
    for (int i = 0; i < m_; ++i) {
        for (int j = 0; j < m_; ++j) out(i, j) = domain_->add(a(i, j), b(i, j));
    }
    return out;
}

RingElement NilpotentRing::sub(const RingElement& a, const RingElement& b) const { return add(a, neg(b)); }

RingElement NilpotentRing::neg(const RingElement& a) const {
    RingElement out(m_, m_, Scalar{0});
    for (int i = 0; i < m_; ++i) {
        for (int j = 0; j < m_; ++j) out(i, j) = domain_->neg(a(i, j));
    }
    return out;
}

RingElement NilpotentRing::mul(const RingElement& a, const RingElement& b) const {
    RingElement out(m_, m_, Scalar{0});
    for (int i = 0; i < m_; ++i) {
        for (int k = 0; k < m_; ++k) {
            const Scalar aik = a(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < m_; ++j) {
                out(i, j) = domain_->add(out(i, j), domain_->mul(aik, b(k, j)));
            }
        }
    }
    return out;
}

RingElement NilpotentRing::scale(const RingElement& a, Scalar c) const {
    RingElement out(m_, m_, Scalar{0});
    for (int i = 0; i < m_; ++i) {
        for (int j = 0; j < m_; ++j) out(i, j) = domain_->mul(c, a(i, j));
    }
    return out;
}

std::uint64_t NilpotentRing::index_of(const RingElement& x) const {
    if (!contains(x)) throw std::invalid_argument("matrix is not an element of the ring");
    std::uint64_t index = 0;
    for (int i = 0; i < m_; ++i) {
        for (int j = 0; j < m_; ++j) {
            if (above(i, j)) {
                index = index * domain_->cardinality() + x(i, j);
            } else {
                index = index * below_range_ + x(i, j) / p_;
            }
        }
    }
    return index;
}

RingElement NilpotentRing::element_at(std::uint64_t index) const {
    if (index >= cardinality_) throw std::out_of_range("ring element index out of range");
    RingElement out(m_, m_, Scalar{0});
    for (int i = m_ - 1; i >= 0; --i) {
        for (int j = m_ - 1; j >= 0; --j) {
            if (above(i, j)) {
                out(i, j) = static_cast<Scalar>(index % domain_->cardinality());
                index /= domain_->cardinality();
            } else {
                out(i, j) = static_cast<Scalar>(index % below_range_) * p_;
                index /= below_range_;
            }
        }
    }
    return out;
}

std::vector<RingElement> NilpotentRing::elements(std::uint64_t limit) const {
    if (cardinality_ > limit) {
        throw std::length_error("ring has " + std::to_string(cardinality_) + " elements, above the limit " +
                                std::to_string(limit));
    }
    std::vector<RingElement> out;
    out.reserve(cardinality_);
    for (std::uint64_t k = 0; k < cardinality_; ++k) out.push_back(element_at(k));
    return out;
}

std::vector<RingElement> NilpotentRing::additive_generators() const {
    std::vector<RingElement> out;
    for (int i = 0; i < m_; ++i) {
        for (int j = 0; j < m_; ++j) {
            RingElement e = zero();
            e(i, j) = above(i, j) ? 1 : domain_->from_integer(p_);
            if (e(i, j) != 0) out.push_back(std::move(e));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

RingExpr RingExpr::constant(RingElement c) {
    RingExpr e;
    e.kind_ = Kind::Const;
    e.constant_ = std::make_shared<const RingElement>(std::move(c));
    return e;
}

RingExpr RingExpr::var(VarId v) {
    RingExpr e;
    e.kind_ = Kind::Var;
    e.var_ = v;
    return e;
}

RingExpr RingExpr::sum(std::vector<RingExpr> terms) {
    RingExpr e;
    e.kind_ = Kind::Sum;
    e.children_ = std::move(terms);
    return e;
}

RingExpr RingExpr::product(std::vector<RingExpr> factors) {
    if (factors.empty()) throw std::invalid_argument("empty ring product");
    RingExpr e;
    e.kind_ = Kind::Product;
    e.children_ = std::move(factors);
    return e;
}

RingExpr RingExpr::neg(RingExpr inner) {
    RingExpr e;
    e.kind_ = Kind::Neg;
    e.children_.push_back(std::move(inner));
    return e;
}

RingExpr RingExpr::scale(std::int64_t k, RingExpr inner) {
    RingExpr e;
    e.kind_ = Kind::Scale;
    e.factor_ = k;
    e.children_.push_back(std::move(inner));
    return e;
}

std::set<VarId> RingExpr::variables() const {
    std::set<VarId> out;
    if (kind_ == Kind::Var) out.insert(var_);
    for (const auto& c : children_) {
        const auto more = c.variables();
        out.insert(more.begin(), more.end());
    }
    return out;
}

bool RingLetter::operator<(const RingLetter& o) const {
    if (is_variable() != o.is_variable()) return is_variable();
    if (is_variable()) return var() < o.var();
    return element() < o.element();
}

// ---------------------------------------------------------------------------

namespace {

using RawSigma = std::vector<SigmaMonomial>;

RawSigma expand(const RingExpr& e, const NilpotentRing& ring) {
    const Domain& d = *ring.domain();
    const std::size_t bound = ring.nilpotency_bound();
    switch (e.kind()) {
        case RingExpr::Kind::Const: {
            if (e.value() == ring.zero()) return {};
            if (!ring.contains(e.value())) throw std::invalid_argument("constant is not an element of the ring");
            return {SigmaMonomial{1, {RingLetter{e.value()}}}};
        }
        case RingExpr::Kind::Var:
            return {SigmaMonomial{1, {RingLetter{e.var_id()}}}};
        case RingExpr::Kind::Sum: {
            RawSigma out;
            for (const auto& c : e.children()) {
                RawSigma part = expand(c, ring);
                out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
            }
            return out;
        }
        case RingExpr::Kind::Product: {
            RawSigma acc = expand(e.children().front(), ring);
            for (std::size_t k = 1; k < e.children().size() && !acc.empty(); ++k) {
                const RawSigma right = expand(e.children()[k], ring);
                RawSigma next;
                for (const auto& a : acc) {
                    for (const auto& b : right) {
                        if (a.letters.size() + b.letters.size() >= bound) continue;
                        const Scalar coef = d.mul(a.coef, b.coef);
                        if (coef == 0) continue;
                        SigmaMonomial mono{coef, a.letters};
                        mono.letters.insert(mono.letters.end(), b.letters.begin(), b.letters.end());
                        next.push_back(std::move(mono));
                    }
                }
                acc = std::move(next);
            }
            return acc;
        }
        case RingExpr::Kind::Neg: {
            RawSigma out = expand(e.children().front(), ring);
            for (auto& mono : out) mono.coef = d.neg(mono.coef);
            return out;
        }
        case RingExpr::Kind::Scale: {
            RawSigma out = expand(e.children().front(), ring);
            const Scalar k = d.from_integer(e.factor());
            for (auto& mono : out) mono.coef = d.mul(k, mono.coef);
            return out;
        }
    }
    return {};
}

}  // namespace

SigmaForm sigma_expand(const RingExpr& expr, const NilpotentRing& ring) {
    const Domain& d = *ring.domain();
    std::map<std::vector<RingLetter>, Scalar> merged;
    for (auto& mono : expand(expr, ring)) {
        if (mono.letters.size() >= ring.nilpotency_bound()) continue;
        auto [it, inserted] = merged.emplace(std::move(mono.letters), mono.coef);
        if (!inserted) it->second = d.add(it->second, mono.coef);
    }
    SigmaForm out;
    for (auto& [letters, coef] : merged) {
        if (coef != 0) out.monomials.push_back(SigmaMonomial{coef, letters});
    }
    return out;
}

RingElement evaluate(const NilpotentRing& ring, const RingExpr& expr, const RingAssignment& a) {
    switch (expr.kind()) {
        case RingExpr::Kind::Const:
            return expr.value();
        case RingExpr::Kind::Var: {
            const auto it = a.find(expr.var_id());
            if (it == a.end()) throw std::out_of_range("unassigned ring variable " + std::to_string(expr.var_id()));
            if (!ring.contains(it->second)) throw std::invalid_argument("assigned value is not a ring element");
            return it->second;
        }
        case RingExpr::Kind::Sum: {
            RingElement acc = ring.zero();
            for (const auto& c : expr.children()) acc = ring.add(acc, evaluate(ring, c, a));
            return acc;
        }
        case RingExpr::Kind::Product: {
            RingElement acc = evaluate(ring, expr.children().front(), a);
            for (std::size_t k = 1; k < expr.children().size(); ++k) {
                acc = ring.mul(acc, evaluate(ring, expr.children()[k], a));
            }
            return acc;
        }
        case RingExpr::Kind::Neg:
            return ring.neg(evaluate(ring, expr.children().front(), a));
        case RingExpr::Kind::Scale:
            return ring.scale(evaluate(ring, expr.children().front(), a),
                              ring.domain()->from_integer(expr.factor()));
    }
    return ring.zero();
}

RingElement evaluate(const NilpotentRing& ring, const SigmaForm& form, const RingAssignment& a) {
    RingElement acc = ring.zero();
    for (const auto& mono : form.monomials) {
        RingElement term;
        bool first = true;
        for (const auto& letter : mono.letters) {
            RingElement value;
            if (letter.is_variable()) {
                const auto it = a.find(letter.var());
                if (it == a.end()) throw std::out_of_range("unassigned ring variable " + std::to_string(letter.var()));
                value = it->second;
            } else {
                value = letter.element();
            }
            term = first ? value : ring.mul(term, value);
            first = false;
        }
        acc = ring.add(acc, ring.scale(term, mono.coef));
    }
    return acc;
}

// ---------------------------------------------------------------------------

Matrix<Polynomial> entrywise_rewrite(const SigmaForm& form, const NilpotentRing& ring) {
    const int m = ring.dim();
    const std::uint32_t alpha = ring.alpha();
    const DomainPtr& d = ring.domain();
    const Scalar p = d->from_integer(ring.p());
    Matrix<Polynomial> out(m, m, Polynomial(d));

    // Slot polynomial of letter entry (r, c), or nullopt when it is constant 0.
    auto slot = [&](const RingLetter& letter, int r, int c) -> std::optional<Polynomial> {
        if (letter.is_variable()) {
            if (above(r, c)) return Polynomial::variable(d, Variable::ring_above(r, c, letter.var()));
            return Polynomial::variable(d, Variable::ring_below(r, c, letter.var())).scaled(p);
        }
        const Scalar v = letter.element()(r, c);
        if (v == 0) return std::nullopt;
        return Polynomial::constant(d, v);
    };

    for (const auto& mono : form.monomials) {
        for (int start = 0; start < m; ++start) {
            // state (column, number of on/below slots picked so far) -> partial sum
            std::map<std::pair<int, std::uint32_t>, Polynomial> states;
            states.emplace(std::make_pair(start, 0u), Polynomial::constant(d, mono.coef));
            for (const auto& letter : mono.letters) {
                std::map<std::pair<int, std::uint32_t>, Polynomial> next;
                for (const auto& [key, poly] : states) {
                    const auto [r, depth] = key;
                    for (int c = 0; c < m; ++c) {
                        const std::uint32_t nd = depth + (above(r, c) ? 0 : 1);
                        if (nd >= alpha) continue;
                        auto s = slot(letter, r, c);
                        if (!s) continue;
                        Polynomial term = poly * *s;
                        if (term.is_zero()) continue;
                        auto [it, inserted] = next.emplace(std::make_pair(c, nd), term);
                        if (!inserted) it->second += term;
                    }
                }
                states = std::move(next);
                if (states.empty()) break;
            }
            for (const auto& [key, poly] : states) out(start, key.first) += poly;
        }
    }
    return out;
}

std::uint64_t entry_length_bound(const NilpotentRing& ring) {
    const std::uint64_t n = ring.nilpotency_bound();
    if (n < 2) return 0;
    std::uint64_t power = 1;
    for (std::uint64_t k = 0; k + 2 < n; ++k) power = saturating_mul(power, static_cast<std::uint64_t>(ring.dim()));
    return saturating_mul(n - 1, power);
}

void add_ring_letter_domains(const NilpotentRing& ring, VarId v, VariableDomains& domains) {
    const int m = ring.dim();
    std::vector<Scalar> full(ring.domain()->cardinality());
    for (Scalar x = 0; x < full.size(); ++x) full[x] = x;
    std::vector<Scalar> below(ring.below_range());
    for (Scalar x = 0; x < below.size(); ++x) below[x] = x;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (above(i, j)) {
                domains[Variable::ring_above(i, j, v)] = full;
            } else {
                domains[Variable::ring_below(i, j, v)] = below;
            }
        }
    }
}

PolySystem build_ring_system(const NilpotentRing& ring, const SigmaForm& form, const RingElement& rhs,
                             const std::set<VarId>& vars) {
    if (!ring.contains(rhs)) throw std::invalid_argument("right-hand side is not an element of the ring");
    const Matrix<Polynomial> entries = entrywise_rewrite(form, ring);
    PolySystem system;
    system.domain = ring.domain();
    const int m = ring.dim();
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) system.constraints.push_back({entries(i, j), rhs(i, j)});
    }
    for (VarId v : vars) add_ring_letter_domains(ring, v, system.domains);
    return system;
}

RingAssignment reassemble_ring_witness(const NilpotentRing& ring, const std::set<VarId>& vars,
                                       const Assignment& slots) {
    const int m = ring.dim();
    const Domain& d = *ring.domain();
    RingAssignment out;
    for (VarId v : vars) {
        RingElement e = ring.zero();
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                if (above(i, j)) {
                    e(i, j) = slots.at(Variable::ring_above(i, j, v));
                } else {
                    e(i, j) = d.mul(d.from_integer(ring.p()), slots.at(Variable::ring_below(i, j, v)));
                }
            }
        }
        out.emplace(v, std::move(e));
    }
    return out;
}

namespace {

void accumulate(SolveStats& total, const SolveStats& part) {
    total.explored += part.explored;
    total.prunes += part.prunes;
    total.linear_completions += part.linear_completions;
    total.wall_ms += part.wall_ms;
}

RingDecision solve_rewritten(const NilpotentRing& ring, const RingExpr& expr, PolySystem system,
                             const std::set<VarId>& vars, const RingElement& rhs, const SolveOptions& options,
                             const Ideal* ideal) {
    RingDecision out;
    const Solution solution = solve(system, options);
    out.verdict = solution.verdict;
    out.stats = solution.stats;
    if (solution.sat()) {
        out.witness = reassemble_ring_witness(ring, vars, solution.witness);
        out.target = rhs;
        const RingElement value = evaluate(ring, expr, out.witness);
        const bool ok = ideal ? value == rhs && ideal->contains(value) : value == rhs;
        if (!ok) throw std::logic_error("ring witness failed re-verification");
    }
    return out;
}

}  // namespace

RingDecision decide_ring_equation(const NilpotentRing& ring, const RingExpr& expr, const RingElement& rhs,
                                  const SolveOptions& options) {
    const std::set<VarId> vars = expr.variables();
    const SigmaForm form = sigma_expand(expr, ring);
    return solve_rewritten(ring, expr, build_ring_system(ring, form, rhs, vars), vars, rhs, options, nullptr);
}

// ---------------------------------------------------------------------------

bool Ideal::contains(const RingElement& x) const {
    return std::binary_search(elements.begin(), elements.end(), x);
}

Ideal enumerate_ideal(const NilpotentRing& ring, const std::vector<RingElement>& generators, std::uint64_t guard) {
    if (ring.cardinality() > guard) {
        throw GuardExceeded("ideal enumeration over " + std::to_string(ring.cardinality()) +
                                " ring elements exceeds guard " + std::to_string(guard),
                            static_cast<long double>(ring.cardinality()));
    }
    for (const auto& g : generators) {
        if (!ring.contains(g)) throw std::invalid_argument("ideal generator is not an element of the ring");
    }
    const std::vector<RingElement> ring_gens = ring.additive_generators();
    std::vector<bool> member(ring.cardinality(), false);
    std::vector<RingElement> members{ring.zero()};
    member[0] = true;

    std::vector<RingElement> queue(generators.begin(), generators.end());
    while (!queue.empty()) {
        const RingElement y = std::move(queue.back());
        queue.pop_back();
        if (member[ring.index_of(y)]) continue;
        // members := members + <y>
        const std::size_t base = members.size();
        RingElement step = y;
        while (!member[ring.index_of(step)]) {
            for (std::size_t k = 0; k < base; ++k) {
                RingElement s = ring.add(members[k], step);
                const std::uint64_t idx = ring.index_of(s);
                if (!member[idx]) {
                    member[idx] = true;
                    members.push_back(std::move(s));
                }
            }
            step = ring.add(step, y);
        }
        for (const auto& r : ring_gens) {
            queue.push_back(ring.mul(r, y));
            queue.push_back(ring.mul(y, r));
        }
    }

    Ideal out;
    out.generators = generators;
    out.elements.reserve(members.size());
    for (std::uint64_t k = 0; k < member.size(); ++k) {
        if (member[k]) out.elements.push_back(ring.element_at(k));
    }
    return out;
}

RingDecision decide_factor_ring(const NilpotentRing& ring, const Ideal& ideal, const RingExpr& expr,
                                const SolveOptions& options) {
    const std::set<VarId> vars = expr.variables();
    const SigmaForm form = sigma_expand(expr, ring);
    PolySystem system = build_ring_system(ring, form, ring.zero(), vars);
    const int m = ring.dim();
    RingDecision out;
    for (const auto& target : ideal.elements) {
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) system.constraints[i * m + j].rhs = target(i, j);
        }
        RingDecision part = solve_rewritten(ring, expr, system, vars, target, options, &ideal);
        accumulate(out.stats, part.stats);
        if (part.sat()) {
            part.stats = out.stats;
            return part;
        }
    }
    return out;
}

RingDecision brute_force_ring_solve(const NilpotentRing& ring, const RingExpr& expr, const RingElement& rhs,
                                    const Ideal* ideal, std::uint64_t guard) {
    const std::set<VarId> var_set = expr.variables();
    const std::vector<VarId> vars(var_set.begin(), var_set.end());
    long double space = 1;
    for (std::size_t k = 0; k < vars.size(); ++k) space *= static_cast<long double>(ring.cardinality());
    if (space > static_cast<long double>(guard)) {
        throw GuardExceeded("ring brute force needs " + std::to_string(static_cast<double>(space)) +
                                " substitutions, above the guard " + std::to_string(guard),
                            space);
    }
    const std::vector<RingElement> all = vars.empty() ? std::vector<RingElement>{} : ring.elements(guard);
    std::vector<std::size_t> digits(vars.size(), 0);
    RingAssignment a;
    for (VarId v : vars) a[v] = all.front();

    RingDecision out;
    while (true) {
        ++out.stats.explored;
        const RingElement value = evaluate(ring, expr, a);
        const RingElement diff = ring.sub(value, rhs);
        const bool hit = ideal ? ideal->contains(diff) : value == rhs;
        if (hit) {
            out.verdict = Verdict::Sat;
            out.witness = a;
            out.target = ideal ? diff : rhs;
            return out;
        }
        std::size_t k = vars.size();
        while (k > 0) {
            --k;
            if (++digits[k] < all.size()) {
                a[vars[k]] = all[digits[k]];
                break;
            }
            digits[k] = 0;
            a[vars[k]] = all.front();
            if (k == 0) return out;
        }
        if (vars.empty()) return out;
    }
}

}  // namespace eqsolv
