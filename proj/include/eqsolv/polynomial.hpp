// Multivariate polynomials over a finite domain, kept in sum-of-monomials
// normal form.

#ifndef EQSOLV_POLYNOMIAL_HPP
#define EQSOLV_POLYNOMIAL_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "eqsolv/finite_algebra.hpp"

namespace eqsolv {

/// Identifier of an unknown of an equation (a word or expression letter).
using VarId = std::uint32_t;

/// Sort of a variable. Field and Subgroup slots come from group letters
/// (x_{i,j,k} and y_{i,k}); RingAbove / RingBelow are the s_{i,j,k} and
/// a_{i,j,k} slots of nilpotent matrix ring letters; Matrix is a
/// non-commuting ring-valued unknown.
enum class VarSort : std::uint8_t { Field, Subgroup, RingAbove, RingBelow, Matrix };

struct Variable {
    std::uint32_t letter = 0;
    VarSort sort = VarSort::Field;
    std::uint16_t row = 0;  // 0-based
    std::uint16_t col = 0;  // 0-based

    static Variable field_slot(int i, int j, std::uint32_t k) {
        return {k, VarSort::Field, static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(j)};
    }
    static Variable subgroup_slot(int i, std::uint32_t k) {
        return {k, VarSort::Subgroup, static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(i)};
    }
    static Variable ring_above(int i, int j, std::uint32_t k) {
        return {k, VarSort::RingAbove, static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(j)};
    }
    static Variable ring_below(int i, int j, std::uint32_t k) {
        return {k, VarSort::RingBelow, static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(j)};
    }
    static Variable matrix(std::uint32_t k) { return {k, VarSort::Matrix, 0, 0}; }

    bool commutative() const noexcept { return sort != VarSort::Matrix; }

    auto operator<=>(const Variable&) const = default;
};

/// x[i][j][k], y[i][k], s[i][j][k], a[i][j][k] or X[k]; indices 1-based.
std::string to_string(const Variable& v);

struct Monomial {
    Scalar coef = 0;
    /// Sorted for commutative monomials, in product order otherwise.
    std::vector<Variable> factors;

    std::size_t degree() const noexcept { return factors.size(); }
    bool operator==(const Monomial&) const = default;
};

class Polynomial {
public:
    explicit Polynomial(DomainPtr domain);

    static Polynomial constant(DomainPtr domain, Scalar c);
    static Polynomial variable(DomainPtr domain, const Variable& v);
    /// Builds the normal form of an arbitrary monomial list.
    static Polynomial from_monomials(DomainPtr domain, std::vector<Monomial> monomials);

    const DomainPtr& domain() const noexcept { return domain_; }
    const std::vector<Monomial>& monomials() const noexcept { return monomials_; }
    bool is_zero() const noexcept { return monomials_.empty(); }
    /// Constant term or 0 when the polynomial has variables.
    bool is_constant() const noexcept;
    Scalar constant_term() const noexcept;

    /// ||f||: every monomial of degree d contributes d + 1 symbols.
    std::size_t length() const noexcept { return length_; }
    /// Total number of variable occurrences (coefficients not counted).
    std::size_t factor_length() const noexcept { return length_ - monomials_.size(); }
    std::vector<Variable> variables() const;

    Polynomial& operator+=(const Polynomial& rhs);
    Polynomial& operator-=(const Polynomial& rhs);
    Polynomial operator-() const;
    Polynomial scaled(Scalar c) const;

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

    bool operator==(const Polynomial& other) const {
        return same_domain(domain_, other.domain_) && monomials_ == other.monomials_;
    }

private:
    void canonicalize(std::vector<Monomial> raw);

    DomainPtr domain_;
    std::vector<Monomial> monomials_;
    std::size_t length_ = 0;
};

using Assignment = std::map<Variable, Scalar>;
using VariableDomains = std::map<Variable, std::vector<Scalar>>;

/// Throws std::out_of_range for a missing variable and std::domain_error
/// when `domains` is given and a value lies outside its variable's domain.
Scalar evaluate(const Polynomial& f, const Assignment& a, const VariableDomains* domains = nullptr);

/// `coef*var1*var2 + ...`; the zero polynomial renders as `0`.
std::string to_string(const Polynomial& f);

/// Unnormalized polynomial expression tree.
class Expr {
public:
    enum class Op { Const, Var, Add, Mul, Neg };

    static Expr constant(DomainPtr domain, Scalar c);
    static Expr var(const Variable& v);
    static Expr add(std::vector<Expr> terms);
    static Expr mul(std::vector<Expr> factors);
    static Expr neg(Expr e);

    friend Expr operator+(Expr a, Expr b) { return add({std::move(a), std::move(b)}); }
    friend Expr operator*(Expr a, Expr b) { return mul({std::move(a), std::move(b)}); }
    friend Expr operator-(Expr a) { return neg(std::move(a)); }
    friend Expr operator-(Expr a, Expr b) { return add({std::move(a), neg(std::move(b))}); }

    Op op() const noexcept { return op_; }
    const DomainPtr& domain() const noexcept { return domain_; }
    Scalar value() const noexcept { return value_; }
    const Variable& variable() const noexcept { return var_; }
    const std::vector<Expr>& children() const noexcept { return children_; }

private:
    Op op_ = Op::Const;
    DomainPtr domain_;
    Scalar value_ = 0;
    Variable var_{};
    std::vector<Expr> children_;
};

/// Expands to normal form. Throws std::invalid_argument when constants come
/// from different domains or when no constant fixes the domain.
Polynomial normalize(const Expr& e);
Polynomial normalize(const Expr& e, const DomainPtr& domain);

/// Direct tree evaluation; independent of normalize.
Scalar evaluate(const Expr& e, const Domain& domain, const Assignment& a);

}  // namespace eqsolv

#endif  // EQSOLV_POLYNOMIAL_HPP
