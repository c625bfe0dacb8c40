// Exact arithmetic over finite fields GF(p^k) and modular rings Z_{p^alpha}.
//
// Elements are canonical integer codes: residues for Z_{p^alpha}, and for
// extension fields the coefficient vector c_0 + c_1 t + ... encoded base p.
// Equality of elements is therefore equality of codes.

#ifndef EQSOLV_FINITE_ALGEBRA_HPP
#define EQSOLV_FINITE_ALGEBRA_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace eqsolv {

using Scalar = std::uint32_t;

enum class DomainKind { Field, Modular };

struct DomainSpec {
    std::uint32_t p = 2;
    std::uint32_t exponent = 1;
    DomainKind kind = DomainKind::Field;
    /// Monic defining polynomial, lowest coefficient first. Only read for
    /// extension fields; empty selects the built-in table entry.
    std::vector<std::uint32_t> modulus;
};

class Domain {
public:
    explicit Domain(const DomainSpec& spec);

    DomainKind kind() const noexcept { return kind_; }
    std::uint32_t characteristic_prime() const noexcept { return p_; }
    std::uint32_t exponent() const noexcept { return exponent_; }
    std::uint32_t cardinality() const noexcept { return size_; }
    const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }

    /// Z_p counts as a field even when built as a modular domain.
    bool is_field() const noexcept { return kind_ == DomainKind::Field || exponent_ == 1; }

    Scalar zero() const noexcept { return 0; }
    Scalar one() const noexcept { return 1; }

    Scalar add(Scalar a, Scalar b) const;
    Scalar sub(Scalar a, Scalar b) const { return add(a, neg(b)); }
    Scalar neg(Scalar a) const;
    Scalar mul(Scalar a, Scalar b) const;
    Scalar pow(Scalar a, std::uint64_t e) const;
    bool is_unit(Scalar a) const;
    /// Throws std::domain_error for non-units.
    Scalar inv(Scalar a) const;

    /// Image of the integer n under Z -> domain.
    Scalar from_integer(std::int64_t n) const;
    bool contains(Scalar a) const noexcept { return a < size_; }

    /// "F_3", "GF(9)" or "Z_4".
    std::string name() const;

    bool operator==(const Domain& other) const noexcept {
        return kind_ == other.kind_ && p_ == other.p_ && exponent_ == other.exponent_ &&
               modulus_ == other.modulus_;
    }

private:
    Scalar add_raw(Scalar a, Scalar b) const;
    Scalar mul_raw(Scalar a, Scalar b) const;
    Scalar neg_raw(Scalar a) const;

    DomainKind kind_;
    std::uint32_t p_;
    std::uint32_t exponent_;
    std::uint32_t size_;
    std::vector<std::uint32_t> modulus_;
    bool extension_ = false;

    // Full operation tables for small domains.
    std::vector<Scalar> add_table_;
    std::vector<Scalar> mul_table_;
    std::vector<Scalar> neg_table_;
    std::vector<Scalar> inv_table_;  // size_ marks "not a unit"
};

using DomainPtr = std::shared_ptr<const Domain>;

/// Validates and builds a domain. Throws std::invalid_argument on a non-prime
/// p, a reducible or malformed modulus, or an extension degree without a
/// supplied or built-in modulus.
DomainPtr make_domain(const DomainSpec& spec);
DomainPtr make_field(std::uint32_t p, std::uint32_t k = 1);
DomainPtr make_modular(std::uint32_t p, std::uint32_t alpha);

bool same_domain(const DomainPtr& a, const DomainPtr& b) noexcept;

bool is_prime(std::uint64_t n) noexcept;

/// Irreducibility of a monic polynomial over F_p by trial division with all
/// monic polynomials of degree <= deg/2.
bool is_irreducible(std::uint32_t p, const std::vector<std::uint32_t>& coeffs);

/// Built-in defining polynomials for q in {4, 8, 9, 16, 25, 27, 32}.
std::optional<std::vector<std::uint32_t>> builtin_modulus(std::uint32_t p, std::uint32_t k);

/// Least e >= 1 with x^e = 1. Throws std::domain_error when x is not a unit.
std::uint64_t element_order(const Domain& domain, Scalar x);

/// The unique subgroup of order d of the cyclic group F_q^x.
class MultSubgroup {
public:
    MultSubgroup(DomainPtr domain, std::uint32_t order, std::vector<Scalar> elements);

    const DomainPtr& domain() const noexcept { return domain_; }
    std::uint32_t order() const noexcept { return order_; }
    /// Ascending code order.
    const std::vector<Scalar>& elements() const noexcept { return elements_; }
    bool contains(Scalar x) const noexcept;
    /// Position of x in elements(); x must be a member.
    std::uint32_t index_of(Scalar x) const;

private:
    DomainPtr domain_;
    std::uint32_t order_;
    std::vector<Scalar> elements_;
    std::vector<std::int32_t> position_;
};

/// Throws std::invalid_argument when the domain is not a field or d does not
/// divide q - 1.
MultSubgroup subgroup_of_order(const DomainPtr& domain, std::uint32_t d);

}  // namespace eqsolv

#endif  // EQSOLV_FINITE_ALGEBRA_HPP
