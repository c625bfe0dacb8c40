#include "eqsolv/finite_algebra.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace eqsolv {

namespace {

constexpr std::uint32_t kTableLimit = 256;

std::vector<std::uint32_t> digits(Scalar code, std::uint32_t p, std::uint32_t k) {
    std::vector<std::uint32_t> out(k, 0);
    for (std::uint32_t i = 0; i < k; ++i) {
        out[i] = code % p;
        code /= p;
    }
    return out;
}

Scalar undigits(const std::vector<std::uint32_t>& d, std::uint32_t p) {
    Scalar code = 0;
    for (std::size_t i = d.size(); i-- > 0;) code = code * p + d[i];
    return code;
}

// Remainder of a modulo the monic b over F_p; both lowest coefficient first.
std::vector<std::uint32_t> poly_mod(std::vector<std::uint32_t> a,
                                    const std::vector<std::uint32_t>& b, std::uint32_t p) {
    const std::size_t db = b.size() - 1;
    while (a.size() > db) {
        const std::uint32_t lead = a.back() % p;
        const std::size_t shift = a.size() - 1 - db;
        if (lead != 0) {
            for (std::size_t i = 0; i <= db; ++i) {
                a[shift + i] = (a[shift + i] + (p - lead) * b[i]) % p;
            }
        }
        a.pop_back();
    }
    return a;
}

std::uint64_t checked_pow(std::uint64_t base, std::uint32_t e) {
    std::uint64_t r = 1;
    for (std::uint32_t i = 0; i < e; ++i) {
        r *= base;
        if (r > (1ULL << 31)) throw std::invalid_argument("domain too large");
    }
    return r;
}

}  // namespace

bool is_prime(std::uint64_t n) noexcept {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

bool is_irreducible(std::uint32_t p, const std::vector<std::uint32_t>& coeffs) {
    if (coeffs.size() < 2 || coeffs.back() % p != 1) return false;
    const std::uint32_t deg = static_cast<std::uint32_t>(coeffs.size() - 1);
    if (deg == 1) return true;
    for (std::uint32_t d = 1; d <= deg / 2; ++d) {
        const std::uint64_t count = checked_pow(p, d);
        for (std::uint64_t code = 0; code < count; ++code) {
            auto trial = digits(static_cast<Scalar>(code), p, d);
            trial.push_back(1);
            const auto rem = poly_mod(coeffs, trial, p);
            if (std::all_of(rem.begin(), rem.end(), [](std::uint32_t c) { return c == 0; })) {
                return false;
            }
        }
    }
    return true;
}

std::optional<std::vector<std::uint32_t>> builtin_modulus(std::uint32_t p, std::uint32_t k) {
    static const std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::uint32_t>>
        table = {
            {{2, 2}, {1, 1, 1}},           // t^2 + t + 1
            {{2, 3}, {1, 1, 0, 1}},        // t^3 + t + 1
            {{2, 4}, {1, 1, 0, 0, 1}},     // t^4 + t + 1
            {{2, 5}, {1, 0, 1, 0, 0, 1}},  // t^5 + t^2 + 1
            {{3, 2}, {2, 2, 1}},           // t^2 + 2t + 2
            {{3, 3}, {1, 2, 0, 1}},        // t^3 + 2t + 1
            {{5, 2}, {2, 1, 1}},           // t^2 + t + 2
        };
    auto it = table.find({p, k});
    if (it == table.end()) return std::nullopt;
    return it->second;
}

Domain::Domain(const DomainSpec& spec)
    : kind_(spec.kind), p_(spec.p), exponent_(spec.exponent) {
    if (!is_prime(p_)) throw std::invalid_argument("p = " + std::to_string(p_) + " is not prime");
    if (exponent_ < 1) throw std::invalid_argument("exponent must be at least 1");
    size_ = static_cast<std::uint32_t>(checked_pow(p_, exponent_));

    if (kind_ == DomainKind::Field && exponent_ > 1) {
        extension_ = true;
        // Irreducibility is only checked up to degree 5.
        if (exponent_ > 5) throw std::invalid_argument("unsupported extension degree");
        if (!spec.modulus.empty()) {
            modulus_ = spec.modulus;
        } else if (auto builtin = builtin_modulus(p_, exponent_)) {
            modulus_ = *builtin;
        } else {
            throw std::invalid_argument("no built-in defining polynomial for GF(" +
                                        std::to_string(size_) + "); supply one");
        }
        if (modulus_.size() != exponent_ + 1) {
            throw std::invalid_argument("defining polynomial must have degree " +
                                        std::to_string(exponent_));
        }
        for (auto c : modulus_) {
            if (c >= p_) throw std::invalid_argument("defining polynomial coefficient out of range");
        }
        if (!is_irreducible(p_, modulus_)) {
            throw std::invalid_argument("defining polynomial is reducible over F_" +
                                        std::to_string(p_));
        }
    }

    if (size_ <= kTableLimit) {
        add_table_.resize(static_cast<std::size_t>(size_) * size_);
        mul_table_.resize(static_cast<std::size_t>(size_) * size_);
        neg_table_.resize(size_);
        inv_table_.assign(size_, size_);
        for (Scalar a = 0; a < size_; ++a) {
            neg_table_[a] = neg_raw(a);
            for (Scalar b = 0; b < size_; ++b) {
                add_table_[a * size_ + b] = add_raw(a, b);
                const Scalar prod = mul_raw(a, b);
                mul_table_[a * size_ + b] = prod;
                if (prod == 1) inv_table_[a] = b;
            }
        }
    }
}

Scalar Domain::add_raw(Scalar a, Scalar b) const {
    if (!extension_) return static_cast<Scalar>((static_cast<std::uint64_t>(a) + b) % size_);
    auto da = digits(a, p_, exponent_);
    const auto db = digits(b, p_, exponent_);
    for (std::uint32_t i = 0; i < exponent_; ++i) da[i] = (da[i] + db[i]) % p_;
    return undigits(da, p_);
}

Scalar Domain::neg_raw(Scalar a) const {
    if (!extension_) return a == 0 ? 0 : size_ - a;
    auto da = digits(a, p_, exponent_);
    for (auto& d : da) d = (p_ - d) % p_;
    return undigits(da, p_);
}

Scalar Domain::mul_raw(Scalar a, Scalar b) const {
    if (!extension_) return static_cast<Scalar>((static_cast<std::uint64_t>(a) * b) % size_);
    const auto da = digits(a, p_, exponent_);
    const auto db = digits(b, p_, exponent_);
    std::vector<std::uint32_t> prod(2 * exponent_ - 1, 0);
    for (std::uint32_t i = 0; i < exponent_; ++i) {
        for (std::uint32_t j = 0; j < exponent_; ++j) {
            prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
        }
    }
    auto rem = poly_mod(std::move(prod), modulus_, p_);
    rem.resize(exponent_, 0);
    return undigits(rem, p_);
}

Scalar Domain::add(Scalar a, Scalar b) const {
    return add_table_.empty() ? add_raw(a, b) : add_table_[a * size_ + b];
}

Scalar Domain::neg(Scalar a) const {
    return neg_table_.empty() ? neg_raw(a) : neg_table_[a];
}

Scalar Domain::mul(Scalar a, Scalar b) const {
    return mul_table_.empty() ? mul_raw(a, b) : mul_table_[a * size_ + b];
}

Scalar Domain::pow(Scalar a, std::uint64_t e) const {
    Scalar result = one();
    Scalar base = a;
    while (e > 0) {
        if (e & 1) result = mul(result, base);
        base = mul(base, base);
        e >>= 1;
    }
    return result;
}

bool Domain::is_unit(Scalar a) const {
    if (a == 0) return false;
    if (extension_) return true;
    return a % p_ != 0;
}

Scalar Domain::inv(Scalar a) const {
    if (!is_unit(a)) throw std::domain_error("element " + std::to_string(a) + " is not a unit");
    if (!inv_table_.empty()) return inv_table_[a];
    if (extension_) return pow(a, size_ - 2);
    // Extended Euclid on residues.
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = size_, new_r = a;
    while (new_r != 0) {
        const std::int64_t quotient = r / new_r;
        t = std::exchange(new_t, t - quotient * new_t);
        r = std::exchange(new_r, r - quotient * new_r);
    }
    if (t < 0) t += size_;
    return static_cast<Scalar>(t);
}

Scalar Domain::from_integer(std::int64_t n) const {
    const std::int64_t mod = extension_ ? p_ : size_;
    std::int64_t r = n % mod;
    if (r < 0) r += mod;
    return static_cast<Scalar>(r);
}

std::string Domain::name() const {
    if (kind_ == DomainKind::Modular) return "Z_" + std::to_string(size_);
    if (extension_) return "GF(" + std::to_string(size_) + ")";
    return "F_" + std::to_string(size_);
}

DomainPtr make_domain(const DomainSpec& spec) { return std::make_shared<const Domain>(spec); }

DomainPtr make_field(std::uint32_t p, std::uint32_t k) {
    return make_domain(DomainSpec{p, k, DomainKind::Field, {}});
}

DomainPtr make_modular(std::uint32_t p, std::uint32_t alpha) {
    return make_domain(DomainSpec{p, alpha, DomainKind::Modular, {}});
}

bool same_domain(const DomainPtr& a, const DomainPtr& b) noexcept {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

std::uint64_t element_order(const Domain& domain, Scalar x) {
    if (!domain.is_unit(x)) {
        throw std::domain_error("element_order: " + std::to_string(x) + " is not a unit");
    }
    std::uint64_t e = 1;
    Scalar power = x;
    while (power != domain.one()) {
        power = domain.mul(power, x);
        ++e;
    }
    return e;
}

MultSubgroup::MultSubgroup(DomainPtr domain, std::uint32_t order, std::vector<Scalar> elements)
    : domain_(std::move(domain)), order_(order), elements_(std::move(elements)) {
    std::sort(elements_.begin(), elements_.end());
    position_.assign(domain_->cardinality(), -1);
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        position_[elements_[i]] = static_cast<std::int32_t>(i);
    }
}

bool MultSubgroup::contains(Scalar x) const noexcept {
    return x < position_.size() && position_[x] >= 0;
}

std::uint32_t MultSubgroup::index_of(Scalar x) const {
    if (!contains(x)) throw std::out_of_range("element not in subgroup");
    return static_cast<std::uint32_t>(position_[x]);
}

MultSubgroup subgroup_of_order(const DomainPtr& domain, std::uint32_t d) {
    if (!domain->is_field()) {
        throw std::invalid_argument("multiplicative subgroups need a field domain");
    }
    const std::uint32_t units = domain->cardinality() - 1;
    if (d == 0 || units % d != 0) {
        throw std::invalid_argument("subgroup order " + std::to_string(d) + " does not divide " +
                                    std::to_string(units));
    }
    std::vector<Scalar> members;
    for (Scalar x = 1; x < domain->cardinality(); ++x) {
        if (domain->pow(x, d) == domain->one()) members.push_back(x);
    }
    return MultSubgroup(domain, d, std::move(members));
}

}  // namespace eqsolv
