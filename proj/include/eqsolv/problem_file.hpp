// Line-oriented problem files.
//
//   # comment
//   [group]                      or   [ring]
//   q = 3                             p = 2
//   m = 3                             alpha = 2
//   pattern = [[1,2],[1,3],[2,3]]     m = 2
//   orders = [1,2,1]                  ideal = [[0,2,0,0]]
//
//   [equation]
//   vars = x y
//   const c = [1,0,1, 0,1,0, 0,0,1]
//   lhs = x y c x^-1
//   rhs = c
//
// Group words are whitespace-separated letters: a variable, a constant, or I,
// each optionally raised to a (negative) integer power with ^. Ring
// expressions use +, -, *, parentheses, integer coefficients and 0; adjacent
// factors multiply. Pattern positions are 1-based; matrices are row-major
// residues and may be nested by row.

#ifndef EQSOLV_PROBLEM_FILE_HPP
#define EQSOLV_PROBLEM_FILE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eqsolv/nilpotent_ring.hpp"
#include "eqsolv/semipattern_group.hpp"

namespace eqsolv {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, int line, int column);
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

struct GroupSection {
    std::uint64_t q = 2;
    int m = 1;
    std::vector<Position> pattern;  // 0-based
    std::vector<std::uint32_t> orders;
    std::vector<std::uint32_t> modulus;  // empty: built-in

    bool operator==(const GroupSection&) const = default;
};

struct RingSection {
    std::uint32_t p = 2;
    std::uint32_t alpha = 1;
    int m = 1;
    std::vector<std::vector<std::int64_t>> ideal;  // row-major generators

    bool operator==(const RingSection&) const = default;
};

struct Token {
    std::string text;
    int line = 0;
    int column = 0;

    bool operator==(const Token& o) const { return text == o.text; }
};

struct ConstantDef {
    std::string name;
    std::vector<std::int64_t> values;  // row-major
    int line = 0;

    bool operator==(const ConstantDef& o) const { return name == o.name && values == o.values; }
};

struct ProblemFile {
    std::optional<GroupSection> group;
    std::optional<RingSection> ring;
    std::vector<std::string> vars;
    std::vector<ConstantDef> constants;
    std::vector<Token> lhs;
    std::vector<Token> rhs;

    bool operator==(const ProblemFile&) const = default;
};

/// Throws ParseError with the 1-based line and column of the offending text.
ProblemFile parse_problem(const std::string& text);
ProblemFile load_problem(const std::string& path);

/// Canonical text; parse_problem(render_problem(f)) == f.
std::string render_problem(const ProblemFile& f);

struct GroupProblem {
    SemipatternGroup group;
    GroupWord lhs;
    GroupRhs rhs;
    std::vector<std::string> var_names;  // indexed by VarId
};

struct RingProblem {
    NilpotentRing ring;
    /// lhs - rhs when the right-hand side has variables, lhs otherwise.
    RingExpr expr;
    RingElement rhs;
    std::optional<Ideal> ideal;
    std::vector<std::string> var_names;
};

/// Builds the structure and the equation; constants are checked for
/// membership. Errors carry the position of the offending token.
GroupProblem resolve_group(const ProblemFile& f);
RingProblem resolve_ring(const ProblemFile& f, std::uint64_t ideal_guard = 10'000'000);

/// Parses a group word over the declared names (used by tests and bench).
GroupWord parse_word(const SemipatternGroup& g, const std::vector<Token>& tokens,
                     const std::vector<std::string>& vars, const std::vector<ConstantDef>& constants);

std::string format_element(const Matrix<Scalar>& x);

}  // namespace eqsolv

#endif  // EQSOLV_PROBLEM_FILE_HPP
