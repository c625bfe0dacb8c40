#include "eqsolv/semipattern_group.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>
#include <string>

namespace eqsolv {

namespace {

std::string pos_string(Position p) {
    return "(" + std::to_string(p.first + 1) + "," + std::to_string(p.second + 1) + ")";
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
        return std::numeric_limits<std::uint64_t>::max();
    }
    return a * b;
}

}  // namespace

PatternClosureError::PatternClosureError(Position first, Position second)
    : std::invalid_argument("pattern is not closed: " + pos_string(first) + " and " +
                            pos_string(second) + " are in P but " +
                            pos_string({first.first, second.second}) + " is not"),
      first_(first),
      second_(second) {}

std::vector<Position> full_pattern(int m) {
    std::vector<Position> p;
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) p.emplace_back(i, j);
    }
    return p;
}

SemipatternGroup::SemipatternGroup(DomainPtr domain, int m, std::vector<Position> pattern,
                                   std::vector<std::uint32_t> orders)
    : domain_(std::move(domain)), m_(m), pattern_(std::move(pattern)), orders_(std::move(orders)) {
    if (!domain_ || !domain_->is_field()) {
        throw std::invalid_argument("semipattern groups need a field domain");
    }
    if (m_ < 1) throw std::invalid_argument("matrix size must be at least 1");
    if (orders_.size() != static_cast<std::size_t>(m_)) {
        throw std::invalid_argument("expected " + std::to_string(m_) + " diagonal orders");
    }
    mask_.assign(static_cast<std::size_t>(m_) * m_, false);
    for (const auto& [i, j] : pattern_) {
        if (i < 0 || j >= m_ || i >= j) {
            throw std::invalid_argument("pattern position " + pos_string({i, j}) +
                                        " is not strictly above the diagonal");
        }
        mask_[i * m_ + j] = true;
    }
    std::sort(pattern_.begin(), pattern_.end());
    pattern_.erase(std::unique(pattern_.begin(), pattern_.end()), pattern_.end());
    for (const auto& [i, j] : pattern_) {
        for (int k = j + 1; k < m_; ++k) {
            if (in_pattern(j, k) && !in_pattern(i, k)) throw PatternClosureError({i, j}, {j, k});
        }
    }
    for (int i = 0; i < m_; ++i) {
        subgroups_.push_back(subgroup_of_order(domain_, orders_[i]));
        order_ = saturating_mul(order_, orders_[i]);
    }
    for (std::size_t t = 0; t < pattern_.size(); ++t) {
        order_ = saturating_mul(order_, domain_->cardinality());
    }
}

GroupElement SemipatternGroup::identity() const {
    GroupElement e(m_, m_, domain_->zero());
    for (int i = 0; i < m_; ++i) e(i, i) = domain_->one();
    return e;
}

bool SemipatternGroup::contains(const GroupElement& g) const {
    if (g.rows() != static_cast<std::size_t>(m_) || g.cols() != static_cast<std::size_t>(m_)) {
        return false;
    }
    for (int i = 0; i < m_; ++i) {
        for (int j = 0; j < m_; ++j) {
            const Scalar v = g(i, j);
            if (!domain_->contains(v)) return false;
            if (i == j) {
                if (!subgroups_[i].contains(v)) return false;
            } else if (i > j || !in_pattern(i, j)) {
                if (v != domain_->zero()) return false;
            }
        }
    }
    return true;
}

GroupElement SemipatternGroup::multiply(const GroupElement& a, const GroupElement& b) const {
    const Domain& d = *domain_;
    GroupElement c(m_, m_, d.zero());
    for (int i = 0; i < m_; ++i) {
        for (int j = i; j < m_; ++j) {
            Scalar sum = d.zero();
            for (int k = i; k <= j; ++k) sum = d.add(sum, d.mul(a(i, k), b(k, j)));
            c(i, j) = sum;
        }
    }
    return c;
}

GroupElement SemipatternGroup::inverse(const GroupElement& g) const {
    const Domain& d = *domain_;
    GroupElement x(m_, m_, d.zero());
    for (int j = 0; j < m_; ++j) {
        x(j, j) = d.inv(g(j, j));
        for (int i = j - 1; i >= 0; --i) {
            Scalar sum = d.zero();
            for (int k = i + 1; k <= j; ++k) sum = d.add(sum, d.mul(g(i, k), x(k, j)));
            x(i, j) = d.neg(d.mul(d.inv(g(i, i)), sum));
        }
    }
    return x;
}

GroupElement SemipatternGroup::power(const GroupElement& g, std::uint64_t e) const {
    GroupElement result = identity();
    GroupElement base = g;
    while (e > 0) {
        if (e & 1) result = multiply(result, base);
        base = multiply(base, base);
        e >>= 1;
    }
    return result;
}

std::uint64_t SemipatternGroup::index_of(const GroupElement& g) const {
    std::uint64_t index = 0;
    for (int i = 0; i < m_; ++i) index = index * orders_[i] + subgroups_[i].index_of(g(i, i));
    for (const auto& [i, j] : pattern_) index = index * domain_->cardinality() + g(i, j);
    return index;
}

GroupElement SemipatternGroup::element_at(std::uint64_t index) const {
    GroupElement g(m_, m_, domain_->zero());
    for (std::size_t t = pattern_.size(); t-- > 0;) {
        g(pattern_[t].first, pattern_[t].second) = static_cast<Scalar>(index % domain_->cardinality());
        index /= domain_->cardinality();
    }
    for (int i = m_; i-- > 0;) {
        g(i, i) = subgroups_[i].elements()[index % orders_[i]];
        index /= orders_[i];
    }
    return g;
}

std::vector<GroupElement> SemipatternGroup::elements(std::uint64_t limit) const {
    if (order_ > limit) {
        throw std::length_error("group of order " + std::to_string(order_) +
                                " is too large to enumerate");
    }
    std::vector<GroupElement> out;
    out.reserve(order_);
    for (std::uint64_t k = 0; k < order_; ++k) out.push_back(element_at(k));
    return out;
}

std::set<VarId> GroupWord::variables() const {
    std::set<VarId> vars;
    for (const auto& l : letters) {
        if (l.is_variable()) vars.insert(l.var());
    }
    return vars;
}

GroupWord operator*(const GroupWord& a, const GroupWord& b) {
    GroupWord out = a;
    out.letters.insert(out.letters.end(), b.letters.begin(), b.letters.end());
    return out;
}

GroupElement evaluate_word(const SemipatternGroup& g, const GroupWord& w, const GroupAssignment& a) {
    GroupElement result = g.identity();
    for (const auto& letter : w.letters) {
        if (letter.is_variable()) {
            auto it = a.find(letter.var());
            if (it == a.end()) {
                throw std::out_of_range("variable " + std::to_string(letter.var()) + " unassigned");
            }
            if (!g.contains(it->second)) {
                throw std::invalid_argument("value of variable " + std::to_string(letter.var()) +
                                            " is not in the group");
            }
            result = g.multiply(result, it->second);
        } else {
            result = g.multiply(result, letter.element());
        }
    }
    return result;
}

std::uint64_t exponent_bound(const SemipatternGroup& g) {
    const std::uint64_t p = g.domain()->characteristic_prime();
    std::uint64_t unipotent = 1;
    while (unipotent < static_cast<std::uint64_t>(g.dim())) unipotent *= p;
    std::uint64_t diagonal = 1;
    for (auto d : g.orders()) diagonal = std::lcm(diagonal, static_cast<std::uint64_t>(d));
    return unipotent * diagonal;
}

GroupWord invert_word(const GroupWord& w, const SemipatternGroup& g) {
    const std::uint64_t e = exponent_bound(g);
    GroupWord out;
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
        if (it->is_variable()) {
            for (std::uint64_t k = 0; k + 1 < e; ++k) out.letters.push_back(*it);
        } else {
            out.letters.push_back(Letter::constant(g.inverse(it->element())));
        }
    }
    return out;
}

namespace {

constexpr std::uint64_t kCayleyLimit = 2048;

// Word evaluation over element indices, through a Cayley table when small.
class IndexedGroup {
public:
    explicit IndexedGroup(const SemipatternGroup& g) : n_(g.order()) {
        if (n_ <= kCayleyLimit) {
            const auto els = g.elements(kCayleyLimit);
            table_.resize(n_ * n_);
            for (std::uint64_t a = 0; a < n_; ++a) {
                for (std::uint64_t b = 0; b < n_; ++b) {
                    table_[a * n_ + b] = static_cast<std::uint32_t>(g.index_of(g.multiply(els[a], els[b])));
                }
            }
        }
    }

    bool tabled() const noexcept { return !table_.empty(); }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return table_[a * n_ + b]; }

private:
    std::uint64_t n_;
    std::vector<std::uint32_t> table_;
};

struct IndexedWord {
    // Non-negative: constant element index; negative: -(slot + 1).
    std::vector<std::int64_t> letters;
};

IndexedWord index_word(const SemipatternGroup& g, const GroupWord& w,
                       const std::map<VarId, std::size_t>& slot) {
    IndexedWord out;
    for (const auto& l : w.letters) {
        if (l.is_variable()) {
            out.letters.push_back(-static_cast<std::int64_t>(slot.at(l.var())) - 1);
        } else {
            if (!g.contains(l.element())) throw std::invalid_argument("constant letter not in group");
            out.letters.push_back(static_cast<std::int64_t>(g.index_of(l.element())));
        }
    }
    return out;
}

}  // namespace

GroupDecision brute_force_solve(const SemipatternGroup& g, const GroupWord& lhs, const GroupRhs& rhs,
                                std::uint64_t guard) {
    const auto start = std::chrono::steady_clock::now();
    std::set<VarId> vars = lhs.variables();
    if (const auto* w = std::get_if<GroupWord>(&rhs)) {
        const auto more = w->variables();
        vars.insert(more.begin(), more.end());
    } else if (!g.contains(std::get<GroupElement>(rhs))) {
        throw std::invalid_argument("right-hand side is not a group element");
    }
    const std::vector<VarId> order(vars.begin(), vars.end());
    long double space = 1.0L;
    for (std::size_t k = 0; k < order.size(); ++k) space *= static_cast<long double>(g.order());
    if (space > static_cast<long double>(guard)) {
        throw GuardExceeded("brute force needs " + std::to_string(static_cast<double>(space)) +
                                " substitutions, guard is " + std::to_string(guard),
                            space);
    }

    std::map<VarId, std::size_t> slot;
    for (std::size_t k = 0; k < order.size(); ++k) slot[order[k]] = k;

    GroupDecision out;
    const std::size_t v = order.size();
    std::vector<std::uint64_t> digit(v, 0);
    const IndexedGroup indexed(g);

    if (indexed.tabled()) {
        const IndexedWord left = index_word(g, lhs, slot);
        const bool word_rhs = std::holds_alternative<GroupWord>(rhs);
        const IndexedWord right =
            word_rhs ? index_word(g, std::get<GroupWord>(rhs), slot) : IndexedWord{};
        const std::uint64_t target = word_rhs ? 0 : g.index_of(std::get<GroupElement>(rhs));
        const std::uint64_t id = g.index_of(g.identity());
        auto eval = [&](const IndexedWord& w) {
            std::uint64_t cur = id;
            for (auto l : w.letters) cur = indexed.mul(cur, l >= 0 ? l : digit[-l - 1]);
            return cur;
        };
        while (true) {
            ++out.stats.explored;
            if (eval(left) == (word_rhs ? eval(right) : target)) {
                out.verdict = Verdict::Sat;
                for (std::size_t k = 0; k < v; ++k) out.witness[order[k]] = g.element_at(digit[k]);
                break;
            }
            std::size_t k = v;
            bool done = true;
            while (k > 0) {
                --k;
                if (++digit[k] < g.order()) {
                    done = false;
                    break;
                }
                digit[k] = 0;
            }
            if (done) break;
        }
    } else {
        GroupAssignment a;
        for (auto var : order) a[var] = g.element_at(0);
        while (true) {
            ++out.stats.explored;
            const GroupElement left = evaluate_word(g, lhs, a);
            const GroupElement right = std::holds_alternative<GroupWord>(rhs)
                                           ? evaluate_word(g, std::get<GroupWord>(rhs), a)
                                           : std::get<GroupElement>(rhs);
            if (left == right) {
                out.verdict = Verdict::Sat;
                out.witness = a;
                break;
            }
            std::size_t k = v;
            bool done = true;
            while (k > 0) {
                --k;
                if (++digit[k] < g.order()) {
                    a[order[k]] = g.element_at(digit[k]);
                    done = false;
                    break;
                }
                digit[k] = 0;
                a[order[k]] = g.element_at(0);
            }
            if (done) break;
        }
    }
    if (out.sat()) {
        const GroupElement left = evaluate_word(g, lhs, out.witness);
        const GroupElement right = std::holds_alternative<GroupWord>(rhs)
                                       ? evaluate_word(g, std::get<GroupWord>(rhs), out.witness)
                                       : std::get<GroupElement>(rhs);
        if (left != right) throw std::logic_error("brute force witness failed verification");
    }
    out.stats.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace eqsolv
