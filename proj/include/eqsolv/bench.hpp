// Scaling harness: random group equations per family, timed through the
// reduction, the solver and (when feasible) the exhaustive oracle.

#ifndef EQSOLV_BENCH_HPP
#define EQSOLV_BENCH_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "eqsolv/semipattern_group.hpp"
#include "eqsolv/system_solver.hpp"

namespace eqsolv {

struct BenchFamily {
    std::string name;
    std::uint64_t q = 2;
    int m = 3;
    std::vector<Position> pattern;  // 0-based
    std::vector<std::uint32_t> orders;
    std::vector<std::uint32_t> lengths;
    /// Empty means one distinct variable per letter.
    std::vector<std::uint32_t> variables;
    double constant_prob = 0.0;
    std::uint32_t repetitions = 1;
};

struct BenchConfig {
    std::uint64_t seed = 1;
    std::uint64_t oracle_guard = 100'000'000;
    std::vector<BenchFamily> families;
};

/// JSON: {"seed": N, "oracle_guard": N, "families": [{"name", "q", "m",
/// "pattern": "full" | [[i,j],...], "orders", "lengths", "variables": "all" |
/// [v,...], "constant_prob", "repetitions"}]}. Throws std::invalid_argument.
BenchConfig parse_bench_config(const std::string& text);

struct BenchRow {
    std::string family;
    std::uint32_t n = 0;
    int m = 0;
    std::uint64_t q = 0;
    std::uint32_t vars = 0;
    std::uint32_t rep = 0;
    /// Variable occurrences in the symbolic entry (1, m) of the lhs.
    std::size_t corner_factors = 0;
    std::size_t system_length = 0;
    double reduction_ms = 0;
    double solver_ms = 0;
    double oracle_ms = -1;  // < 0: skipped
    Verdict verdict = Verdict::Unsat;
    std::optional<Verdict> oracle_verdict;
};

std::string bench_csv_header();
std::string to_csv(const BenchRow& row);

/// Rows are written to `out` as they complete (header first).
std::vector<BenchRow> run_bench(const BenchConfig& config, const SolveOptions& options, std::ostream& out);

GroupElement random_element(const SemipatternGroup& g, std::mt19937_64& rng);

/// n letters; each is a random constant with probability constant_prob,
/// otherwise one of `vars` variables chosen uniformly.
GroupWord random_word(const SemipatternGroup& g, std::uint32_t n, std::uint32_t vars, double constant_prob,
                      std::mt19937_64& rng);

}  // namespace eqsolv

#endif  // EQSOLV_BENCH_HPP
