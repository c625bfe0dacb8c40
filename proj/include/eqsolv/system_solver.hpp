// Solvability of polynomial systems {f_i = c_i} over a finite domain with a
// finite value set per variable.
//
// The reference backend is a complete backtracking search:
//   * variables ordered by descending occurrence count (ties by variable
//     order); singleton domains go first since they never branch;
//   * each monomial is indexed by its last-ordered variable, so constraint
//     sums are accumulated incrementally and a constraint is checked the
//     moment its last variable is assigned;
//   * over fields, once every remaining variable occurs at most linearly with
//     an already-assigned coefficient and has the full field as domain, the
//     rest of the search is an affine system and is finished by Gaussian
//     elimination (still producing the lexicographically first completion).
// The naive backend enumerates the full product of domains without pruning.

#ifndef EQSOLV_SYSTEM_SOLVER_HPP
#define EQSOLV_SYSTEM_SOLVER_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "eqsolv/polynomial.hpp"

namespace eqsolv {

struct Constraint {
    Polynomial lhs;
    Scalar rhs = 0;
};

struct PolySystem {
    DomainPtr domain;
    std::vector<Constraint> constraints;
    /// Allowed values per variable, ascending. Must cover every variable of
    /// every constraint; may list extra, unconstrained variables.
    VariableDomains domains;

    std::size_t total_length() const;
};

enum class Verdict { Sat, Unsat };

enum class Backend { Pruned, Naive };

struct SolveStats {
    std::uint64_t explored = 0;  // value assignments tried
    std::uint64_t prunes = 0;    // branches cut by a violated constraint
    std::uint64_t linear_completions = 0;
    double wall_ms = 0.0;

    bool operator==(const SolveStats& o) const {
        return explored == o.explored && prunes == o.prunes &&
               linear_completions == o.linear_completions;
    }
};

struct Solution {
    Verdict verdict = Verdict::Unsat;
    Assignment witness;
    SolveStats stats;
    /// Variable order the search used; the witness is lexicographically
    /// first with respect to it.
    std::vector<Variable> order;

    bool sat() const noexcept { return verdict == Verdict::Sat; }
};

struct SolveOptions {
    Backend backend = Backend::Pruned;
    /// Pruned backend: maximum value assignments explored. Naive backend:
    /// maximum size of the full search space.
    std::uint64_t guard = 100'000'000;
    /// Unused by the exhaustive backends; kept for pluggable solvers.
    std::uint64_t seed = 0;
};

class GuardExceeded : public std::runtime_error {
public:
    GuardExceeded(const std::string& what, long double space)
        : std::runtime_error(what), space_(space) {}
    /// Product of domain sizes of the request that tripped the guard.
    long double search_space() const noexcept { return space_; }

private:
    long double space_;
};

Solution solve(const PolySystem& system, const SolveOptions& options = {});

/// True iff every constraint holds exactly. Throws std::domain_error on a
/// value outside its variable's domain, std::out_of_range on a missing one.
bool verify_witness(const PolySystem& system, const Assignment& a);

/// Product of the domain sizes, as a floating estimate.
long double search_space(const PolySystem& system);

std::string backend_name(Backend b);
Backend parse_backend(const std::string& name);

/// Stable text rendering used by `--dump-system`.
std::string render_system(const PolySystem& system,
                          const std::vector<std::string>& letter_names = {});

}  // namespace eqsolv

#endif  // EQSOLV_SYSTEM_SOLVER_HPP
