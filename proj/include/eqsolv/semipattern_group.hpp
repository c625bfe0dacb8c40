// Semipattern groups N_P * D inside the upper triangular group T_m(F_q).
//
// N_P holds the unitriangular matrices whose above-diagonal support lies in
// the pattern P; D holds the diagonal matrices whose i-th entry ranges over
// the order-d_i subgroup S_i of F_q^x.

#ifndef EQSOLV_SEMIPATTERN_GROUP_HPP
#define EQSOLV_SEMIPATTERN_GROUP_HPP

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "eqsolv/finite_algebra.hpp"
#include "eqsolv/matrix.hpp"
#include "eqsolv/system_solver.hpp"

namespace eqsolv {

using GroupElement = Matrix<Scalar>;

/// 0-based (row, col), row < col.
using Position = std::pair<int, int>;

class PatternClosureError : public std::invalid_argument {
public:
    PatternClosureError(Position first, Position second);
    Position first() const noexcept { return first_; }
    Position second() const noexcept { return second_; }

private:
    Position first_;
    Position second_;
};

class SemipatternGroup {
public:
    /// Throws PatternClosureError when some (i,j), (j,k) in P lacks (i,k),
    /// std::invalid_argument on malformed positions or subgroup orders.
    SemipatternGroup(DomainPtr domain, int m, std::vector<Position> pattern,
                     std::vector<std::uint32_t> orders);

    const DomainPtr& domain() const noexcept { return domain_; }
    int dim() const noexcept { return m_; }
    const std::vector<Position>& pattern() const noexcept { return pattern_; }
    bool in_pattern(int i, int j) const noexcept { return mask_[i * m_ + j]; }
    const std::vector<std::uint32_t>& orders() const noexcept { return orders_; }
    const MultSubgroup& subgroup(int i) const { return subgroups_[i]; }

    /// q^|P| * prod d_i, saturating at UINT64_MAX.
    std::uint64_t order() const noexcept { return order_; }

    GroupElement identity() const;
    bool contains(const GroupElement& g) const;
    GroupElement multiply(const GroupElement& a, const GroupElement& b) const;
    GroupElement inverse(const GroupElement& g) const;
    GroupElement power(const GroupElement& g, std::uint64_t e) const;

    /// Mixed-radix code: diagonal subgroup indices first, then pattern
    /// entries in pattern order, earliest most significant.
    std::uint64_t index_of(const GroupElement& g) const;
    GroupElement element_at(std::uint64_t index) const;
    /// All elements in index order. Throws when |G| exceeds `limit`.
    std::vector<GroupElement> elements(std::uint64_t limit = 1'000'000) const;

private:
    DomainPtr domain_;
    int m_;
    std::vector<Position> pattern_;
    std::vector<bool> mask_;
    std::vector<std::uint32_t> orders_;
    std::vector<MultSubgroup> subgroups_;
    std::uint64_t order_ = 1;
};

/// Full pattern {(i,j) : i < j}.
std::vector<Position> full_pattern(int m);

struct Letter {
    std::variant<GroupElement, VarId> value;

    static Letter constant(GroupElement g) { return Letter{std::move(g)}; }
    static Letter variable(VarId v) { return Letter{v}; }
    bool is_variable() const noexcept { return std::holds_alternative<VarId>(value); }
    VarId var() const { return std::get<VarId>(value); }
    const GroupElement& element() const { return std::get<GroupElement>(value); }
    bool operator==(const Letter&) const = default;
};

struct GroupWord {
    std::vector<Letter> letters;

    std::size_t size() const noexcept { return letters.size(); }
    std::set<VarId> variables() const;
    bool operator==(const GroupWord&) const = default;
};

/// Concatenation.
GroupWord operator*(const GroupWord& a, const GroupWord& b);

using GroupAssignment = std::map<VarId, GroupElement>;

/// Left-to-right product; the empty word is I. Throws std::out_of_range for an
/// unassigned variable and std::invalid_argument for an out-of-group value.
GroupElement evaluate_word(const SemipatternGroup& g, const GroupWord& w, const GroupAssignment& a);

/// p^ceil(log_p m) * lcm(d_1, ..., d_m); every element satisfies g^E = I.
std::uint64_t exponent_bound(const SemipatternGroup& g);

/// Reversed word with constants inverted and each variable letter replaced by
/// E - 1 copies of itself.
GroupWord invert_word(const GroupWord& w, const SemipatternGroup& g);

/// Right-hand side of an equation: a constant element or another word.
using GroupRhs = std::variant<GroupElement, GroupWord>;

struct GroupDecision {
    Verdict verdict = Verdict::Unsat;
    GroupAssignment witness;
    SolveStats stats;
    std::size_t system_length = 0;

    bool sat() const noexcept { return verdict == Verdict::Sat; }
};

/// Exhaustive oracle over |G|^v substitutions, variables in ascending id
/// order, elements in index order; the witness is the first hit. Throws
/// GuardExceeded when |G|^v > guard.
GroupDecision brute_force_solve(const SemipatternGroup& g, const GroupWord& lhs, const GroupRhs& rhs,
                                std::uint64_t guard = 100'000'000);

}  // namespace eqsolv

#endif  // EQSOLV_SEMIPATTERN_GROUP_HPP
