#include "eqsolv/polynomial.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace eqsolv {

std::string to_string(const Variable& v) {
    const auto i = std::to_string(v.row + 1);
    const auto j = std::to_string(v.col + 1);
    const auto k = std::to_string(v.letter + 1);
    switch (v.sort) {
        case VarSort::Field: return "x[" + i + "][" + j + "][" + k + "]";
        case VarSort::Subgroup: return "y[" + i + "][" + k + "]";
        case VarSort::RingAbove: return "s[" + i + "][" + j + "][" + k + "]";
        case VarSort::RingBelow: return "a[" + i + "][" + j + "][" + k + "]";
        case VarSort::Matrix: return "X[" + k + "]";
    }
    return "?";
}

namespace {

bool all_commutative(const std::vector<Variable>& factors) {
    return std::all_of(factors.begin(), factors.end(),
                       [](const Variable& v) { return v.commutative(); });
}

std::vector<Variable> multiply_factors(const std::vector<Variable>& a,
                                       const std::vector<Variable>& b) {
    std::vector<Variable> out;
    out.reserve(a.size() + b.size());
    if (all_commutative(a) && all_commutative(b)) {
        std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    } else {
        out.insert(out.end(), a.begin(), a.end());
        out.insert(out.end(), b.begin(), b.end());
    }
    return out;
}

}  // namespace

Polynomial::Polynomial(DomainPtr domain) : domain_(std::move(domain)) {
    if (!domain_) throw std::invalid_argument("polynomial needs a domain");
}

Polynomial Polynomial::constant(DomainPtr domain, Scalar c) {
    Polynomial f(std::move(domain));
    f.canonicalize({Monomial{c, {}}});
    return f;
}

Polynomial Polynomial::variable(DomainPtr domain, const Variable& v) {
    Polynomial f(std::move(domain));
    f.canonicalize({Monomial{f.domain_->one(), {v}}});
    return f;
}

Polynomial Polynomial::from_monomials(DomainPtr domain, std::vector<Monomial> monomials) {
    Polynomial f(std::move(domain));
    f.canonicalize(std::move(monomials));
    return f;
}

void Polynomial::canonicalize(std::vector<Monomial> raw) {
    std::map<std::vector<Variable>, Scalar> merged;
    for (auto& m : raw) {
        if (all_commutative(m.factors)) std::sort(m.factors.begin(), m.factors.end());
        auto [it, inserted] = merged.try_emplace(std::move(m.factors), m.coef);
        if (!inserted) it->second = domain_->add(it->second, m.coef);
    }
    monomials_.clear();
    length_ = 0;
    for (auto& [factors, coef] : merged) {
        if (coef == domain_->zero()) continue;
        length_ += factors.size() + 1;
        monomials_.push_back(Monomial{coef, factors});
    }
}

bool Polynomial::is_constant() const noexcept {
    return monomials_.empty() || (monomials_.size() == 1 && monomials_[0].factors.empty());
}

Scalar Polynomial::constant_term() const noexcept {
    if (!monomials_.empty() && monomials_.front().factors.empty()) return monomials_.front().coef;
    return 0;
}

std::vector<Variable> Polynomial::variables() const {
    std::vector<Variable> out;
    for (const auto& m : monomials_) out.insert(out.end(), m.factors.begin(), m.factors.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
    if (!same_domain(domain_, rhs.domain_)) throw std::invalid_argument("mixed domains");
    if (rhs.is_zero()) return *this;
    std::vector<Monomial> raw = monomials_;
    raw.insert(raw.end(), rhs.monomials_.begin(), rhs.monomials_.end());
    canonicalize(std::move(raw));
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) { return *this += -rhs; }

Polynomial Polynomial::operator-() const {
    Polynomial out = *this;
    for (auto& m : out.monomials_) m.coef = domain_->neg(m.coef);
    return out;
}

Polynomial Polynomial::scaled(Scalar c) const {
    std::vector<Monomial> raw = monomials_;
    for (auto& m : raw) m.coef = domain_->mul(m.coef, c);
    return from_monomials(domain_, std::move(raw));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (!same_domain(a.domain_, b.domain_)) throw std::invalid_argument("mixed domains");
    const Domain& d = *a.domain_;
    std::vector<Monomial> raw;
    raw.reserve(a.monomials_.size() * b.monomials_.size());
    for (const auto& ma : a.monomials_) {
        for (const auto& mb : b.monomials_) {
            const Scalar coef = d.mul(ma.coef, mb.coef);
            if (coef == d.zero()) continue;
            raw.push_back(Monomial{coef, multiply_factors(ma.factors, mb.factors)});
        }
    }
    return Polynomial::from_monomials(a.domain_, std::move(raw));
}

Scalar evaluate(const Polynomial& f, const Assignment& a, const VariableDomains* domains) {
    const Domain& d = *f.domain();
    if (domains != nullptr) {
        for (const auto& v : f.variables()) {
            auto value = a.find(v);
            auto allowed = domains->find(v);
            if (value == a.end()) throw std::out_of_range("unassigned variable " + to_string(v));
            if (allowed != domains->end() &&
                !std::binary_search(allowed->second.begin(), allowed->second.end(),
                                    value->second)) {
                throw std::domain_error("value " + std::to_string(value->second) +
                                        " outside the domain of " + to_string(v));
            }
        }
    }
    Scalar total = d.zero();
    for (const auto& m : f.monomials()) {
        Scalar term = m.coef;
        for (const auto& v : m.factors) {
            auto it = a.find(v);
            if (it == a.end()) throw std::out_of_range("unassigned variable " + to_string(v));
            term = d.mul(term, it->second);
        }
        total = d.add(total, term);
    }
    return total;
}

std::string to_string(const Polynomial& f) {
    if (f.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& m : f.monomials()) {
        if (!first) out << " + ";
        first = false;
        out << m.coef;
        for (const auto& v : m.factors) out << '*' << to_string(v);
    }
    return out.str();
}

Expr Expr::constant(DomainPtr domain, Scalar c) {
    Expr e;
    e.op_ = Op::Const;
    e.domain_ = std::move(domain);
    e.value_ = c;
    return e;
}

Expr Expr::var(const Variable& v) {
    Expr e;
    e.op_ = Op::Var;
    e.var_ = v;
    return e;
}

Expr Expr::add(std::vector<Expr> terms) {
    Expr e;
    e.op_ = Op::Add;
    e.children_ = std::move(terms);
    return e;
}

Expr Expr::mul(std::vector<Expr> factors) {
    Expr e;
    e.op_ = Op::Mul;
    e.children_ = std::move(factors);
    return e;
}

Expr Expr::neg(Expr inner) {
    Expr e;
    e.op_ = Op::Neg;
    e.children_.push_back(std::move(inner));
    return e;
}

namespace {

void collect_domain(const Expr& e, DomainPtr& found) {
    if (e.op() == Expr::Op::Const) {
        if (!found) {
            found = e.domain();
        } else if (!same_domain(found, e.domain())) {
            throw std::invalid_argument("expression mixes scalars from " + found->name() +
                                        " and " + e.domain()->name());
        }
    }
    for (const auto& c : e.children()) collect_domain(c, found);
}

Polynomial expand(const Expr& e, const DomainPtr& domain) {
    switch (e.op()) {
        case Expr::Op::Const: return Polynomial::constant(domain, e.value());
        case Expr::Op::Var: return Polynomial::variable(domain, e.variable());
        case Expr::Op::Add: {
            Polynomial sum(domain);
            for (const auto& c : e.children()) sum += expand(c, domain);
            return sum;
        }
        case Expr::Op::Mul: {
            Polynomial prod = Polynomial::constant(domain, domain->one());
            for (const auto& c : e.children()) prod = prod * expand(c, domain);
            return prod;
        }
        case Expr::Op::Neg: return -expand(e.children().front(), domain);
    }
    return Polynomial(domain);
}

}  // namespace

Polynomial normalize(const Expr& e) {
    DomainPtr domain;
    collect_domain(e, domain);
    if (!domain) throw std::invalid_argument("expression has no scalar fixing its domain");
    return expand(e, domain);
}

Polynomial normalize(const Expr& e, const DomainPtr& domain) {
    DomainPtr found = domain;
    collect_domain(e, found);
    return expand(e, domain);
}

Scalar evaluate(const Expr& e, const Domain& domain, const Assignment& a) {
    switch (e.op()) {
        case Expr::Op::Const: return e.value();
        case Expr::Op::Var: {
            auto it = a.find(e.variable());
            if (it == a.end()) throw std::out_of_range("unassigned variable " + to_string(e.variable()));
            return it->second;
        }
        case Expr::Op::Add: {
            Scalar sum = domain.zero();
            for (const auto& c : e.children()) sum = domain.add(sum, evaluate(c, domain, a));
            return sum;
        }
        case Expr::Op::Mul: {
            Scalar prod = domain.one();
            for (const auto& c : e.children()) prod = domain.mul(prod, evaluate(c, domain, a));
            return prod;
        }
        case Expr::Op::Neg: return domain.neg(evaluate(e.children().front(), domain, a));
    }
    return domain.zero();
}

}  // namespace eqsolv
