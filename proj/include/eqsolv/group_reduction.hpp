// Reduction of equations over a semipattern group to polynomial systems over
// F_q.
//
// A word T_1 ... T_n is written letter by letter as an upper triangular
// matrix of slots: the diagonal slot i of a variable letter k is y_{i,k},
// ranging over S_i, and the off-diagonal slot (i,j) in P is x_{i,j,k}, ranging
// over F_q. Letters that denote the same variable share their slot variables.
// Multiplying the slot matrices gives
//
//   entry (i,i) = f_i     = prod_k y_{i,k}
//   entry (i,j) = g_{i,j} = sum over chains i = l_0 < l_1 < ... < l_{b+1} = j
//                           and positions k_1 < ... < k_{b+1} of
//                           (y_{i,.} run) x_{i,l_1,k_1} (y_{l_1,.} run) ... x_{l_b,j,k_{b+1}} (y_{j,.} run)
//
// so that F = c holds for a substitution iff f_i = c_ii and g_{i,j} = c_ij.
// Entry (i,j) of a product of n all-variable letters has C(n+j-i-1, j-i)
// monomials of n factors each.

#ifndef EQSOLV_GROUP_REDUCTION_HPP
#define EQSOLV_GROUP_REDUCTION_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "eqsolv/polynomial.hpp"
#include "eqsolv/semipattern_group.hpp"
#include "eqsolv/system_solver.hpp"

namespace eqsolv {

using SymbolicMatrix = Matrix<Polynomial>;

/// Slot matrix of one letter: constants for a constant letter, slot
/// variables for a variable letter, constant 0 outside P and below the
/// diagonal.
struct SymbolicLetter {
    SymbolicMatrix slots;
};

SymbolicLetter symbolic_letter(const SemipatternGroup& g, const Letter& letter);

/// Incremental product of the letters' slot matrices. Zero entries below
/// the diagonal are never formed; n = 0 gives the identity.
SymbolicMatrix symbolic_product(const std::vector<SymbolicLetter>& letters, int m,
                                const DomainPtr& domain);
SymbolicMatrix symbolic_product(const SemipatternGroup& g, const GroupWord& w);

/// C(n + j - i - 1, j - i) for i < j (1- or 0-based alike: only j - i matters).
std::uint64_t entry_monomial_count(std::uint64_t n, int i, int j);

/// Slot variables of a variable letter together with their value sets.
void add_letter_domains(const SemipatternGroup& g, VarId v, VariableDomains& domains);

/// Equations F = rhs as {f_i = c_ii, g_{i,j} = c_ij : i <= j} for a constant
/// rhs, or {lhs_ij - rhs_ij = 0 : i <= j} for a word rhs.
PolySystem build_system(const SemipatternGroup& g, const GroupWord& lhs, const GroupRhs& rhs);

/// Slot values of a system witness reassembled into group elements.
GroupAssignment reassemble_witness(const SemipatternGroup& g, const std::set<VarId>& vars,
                                   const Assignment& slots);

/// build_system + solve; on SAT the witness is re-verified with
/// evaluate_word before it is returned.
GroupDecision decide_equation(const SemipatternGroup& g, const GroupWord& lhs, const GroupRhs& rhs,
                              const SolveOptions& options = {});

struct EquivalenceResult {
    bool equivalent = true;
    /// A substitution under which f and g differ, when not equivalent.
    std::optional<GroupAssignment> separating;
    std::uint64_t equations_solved = 0;
};

/// f ~ g iff f = c * g is unsolvable for every c != I.
EquivalenceResult decide_equivalence(const SemipatternGroup& g, const GroupWord& f, const GroupWord& h,
                                     const SolveOptions& options = {});

}  // namespace eqsolv

#endif  // EQSOLV_GROUP_REDUCTION_HPP
