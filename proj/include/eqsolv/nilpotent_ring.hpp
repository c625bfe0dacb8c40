// Nilpotent matrix rings M(m, Z_{p^alpha}): m x m matrices over Z_{p^alpha}
// whose entries on or below the main diagonal are multiples of p.
//
// Any product of m*alpha elements of M vanishes, which bounds both the
// sum-of-monomials expansion of an expression and the chain expansion of
// each matrix entry.

#ifndef EQSOLV_NILPOTENT_RING_HPP
#define EQSOLV_NILPOTENT_RING_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "eqsolv/finite_algebra.hpp"
#include "eqsolv/matrix.hpp"
#include "eqsolv/polynomial.hpp"
#include "eqsolv/system_solver.hpp"

namespace eqsolv {

using RingElement = Matrix<Scalar>;

class NilpotentRing {
public:
    NilpotentRing(std::uint32_t p, std::uint32_t alpha, int m);

    std::uint32_t p() const noexcept { return p_; }
    std::uint32_t alpha() const noexcept { return alpha_; }
    int dim() const noexcept { return m_; }
    const DomainPtr& domain() const noexcept { return domain_; }

    /// Every product of this many elements is zero.
    std::uint32_t nilpotency_bound() const noexcept { return static_cast<std::uint32_t>(m_) * alpha_; }
    /// (p^alpha)^{m(m-1)/2} * (p^{alpha-1})^{m(m+1)/2}, saturating.
    std::uint64_t cardinality() const noexcept { return cardinality_; }
    /// Number of values of an on/below-diagonal slot a with entry p*a.
    std::uint32_t below_range() const noexcept { return below_range_; }

    bool contains(const RingElement& x) const;
    RingElement zero() const;
    RingElement add(const RingElement& a, const RingElement& b) const;
    RingElement sub(const RingElement& a, const RingElement& b) const;
    RingElement neg(const RingElement& a) const;
    RingElement mul(const RingElement& a, const RingElement& b) const;
    RingElement scale(const RingElement& a, Scalar c) const;

    /// Row-major mixed-radix code: above-diagonal entries range over
    /// p^alpha values, the others over multiples of p.
    std::uint64_t index_of(const RingElement& x) const;
    RingElement element_at(std::uint64_t index) const;
    std::vector<RingElement> elements(std::uint64_t limit = 10'000'000) const;

    /// Additive generators: E_ij above the diagonal, p*E_ij on or below.
    std::vector<RingElement> additive_generators() const;

private:
    std::uint32_t p_;
    std::uint32_t alpha_;
    int m_;
    DomainPtr domain_;
    std::uint32_t below_range_;
    std::uint64_t cardinality_ = 1;
};

/// Expression tree over ring constants and matrix variables. Integer
/// coefficients act by repeated addition.
class RingExpr {
public:
    enum class Kind { Const, Var, Sum, Product, Neg, Scale };

    static RingExpr constant(RingElement c);
    static RingExpr var(VarId v);
    static RingExpr sum(std::vector<RingExpr> terms);
    static RingExpr product(std::vector<RingExpr> factors);
    static RingExpr neg(RingExpr e);
    static RingExpr scale(std::int64_t k, RingExpr e);

    friend RingExpr operator+(RingExpr a, RingExpr b) { return sum({std::move(a), std::move(b)}); }
    friend RingExpr operator*(RingExpr a, RingExpr b) { return product({std::move(a), std::move(b)}); }
    friend RingExpr operator-(RingExpr a, RingExpr b) { return sum({std::move(a), neg(std::move(b))}); }

    Kind kind() const noexcept { return kind_; }
    const RingElement& value() const { return *constant_; }
    VarId var_id() const noexcept { return var_; }
    std::int64_t factor() const noexcept { return factor_; }
    const std::vector<RingExpr>& children() const noexcept { return children_; }
    std::set<VarId> variables() const;

private:
    Kind kind_ = Kind::Sum;
    std::shared_ptr<const RingElement> constant_;
    VarId var_ = 0;
    std::int64_t factor_ = 1;
    std::vector<RingExpr> children_;
};

struct RingLetter {
    std::variant<RingElement, VarId> value;

    bool is_variable() const noexcept { return std::holds_alternative<VarId>(value); }
    VarId var() const { return std::get<VarId>(value); }
    const RingElement& element() const { return std::get<RingElement>(value); }
    bool operator==(const RingLetter&) const = default;
    bool operator<(const RingLetter& o) const;
};

struct SigmaMonomial {
    Scalar coef = 1;
    std::vector<RingLetter> letters;  // product order
    bool operator==(const SigmaMonomial&) const = default;
};

/// Sum of monomials, merged on identical letter sequences, sorted, without
/// zero coefficients.
struct SigmaForm {
    std::vector<SigmaMonomial> monomials;
    bool operator==(const SigmaForm&) const = default;
};

/// Distributes products over sums; drops monomials with at least
/// nilpotency_bound() letters.
SigmaForm sigma_expand(const RingExpr& expr, const NilpotentRing& ring);

using RingAssignment = std::map<VarId, RingElement>;

/// Direct matrix evaluation of the tree.
RingElement evaluate(const NilpotentRing& ring, const RingExpr& expr, const RingAssignment& a);
RingElement evaluate(const NilpotentRing& ring, const SigmaForm& form, const RingAssignment& a);

/// m x m entry polynomials over Z_{p^alpha} in the slot variables
/// s[i][j][k] (i < j) and a[i][j][k] (i >= j, entry p*a). Chains that pick
/// alpha or more on/below-diagonal slots are dropped.
Matrix<Polynomial> entrywise_rewrite(const SigmaForm& form, const NilpotentRing& ring);

/// (m*alpha - 1) * m^{m*alpha - 2}: bound on the factor length of an entry
/// of a single rewritten monomial; 0 when m*alpha < 2.
std::uint64_t entry_length_bound(const NilpotentRing& ring);

void add_ring_letter_domains(const NilpotentRing& ring, VarId v, VariableDomains& domains);

/// {f_ij = rhs_ij : all i, j}.
PolySystem build_ring_system(const NilpotentRing& ring, const SigmaForm& form, const RingElement& rhs,
                             const std::set<VarId>& vars);

RingAssignment reassemble_ring_witness(const NilpotentRing& ring, const std::set<VarId>& vars,
                                       const Assignment& slots);

struct RingDecision {
    Verdict verdict = Verdict::Unsat;
    RingAssignment witness;
    /// Right-hand side that was hit: the ideal element for factor rings.
    std::optional<RingElement> target;
    SolveStats stats;

    bool sat() const noexcept { return verdict == Verdict::Sat; }
};

RingDecision decide_ring_equation(const NilpotentRing& ring, const RingExpr& expr, const RingElement& rhs,
                                  const SolveOptions& options = {});

/// An ideal of M given by generators, with its full element set.
struct Ideal {
    std::vector<RingElement> generators;
    std::vector<RingElement> elements;  // ascending index order

    bool contains(const RingElement& x) const;
};

/// Least additive subgroup containing the generators and closed under left
/// and right multiplication by M. Throws GuardExceeded when |M| > guard.
Ideal enumerate_ideal(const NilpotentRing& ring, const std::vector<RingElement>& generators,
                      std::uint64_t guard = 10'000'000);

/// Solvability of expr = 0 over M/I, decided as expr = a over M for the
/// elements a of I in order.
RingDecision decide_factor_ring(const NilpotentRing& ring, const Ideal& ideal, const RingExpr& expr,
                                const SolveOptions& options = {});

/// Exhaustive oracle over M^v with direct tree evaluation. With an ideal,
/// solves expr - rhs in I (the equation over M/I). Throws GuardExceeded when
/// |M|^v > guard.
RingDecision brute_force_ring_solve(const NilpotentRing& ring, const RingExpr& expr,
                                    const RingElement& rhs, const Ideal* ideal = nullptr,
                                    std::uint64_t guard = 100'000'000);

}  // namespace eqsolv

#endif  // EQSOLV_NILPOTENT_RING_HPP
