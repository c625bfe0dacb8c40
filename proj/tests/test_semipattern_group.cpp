#include <gtest/gtest.h>

#include <random>
#include <set>

#include "eqsolv/bench.hpp"
#include "eqsolv/semipattern_group.hpp"

using namespace eqsolv;

namespace {

SemipatternGroup ut(std::uint32_t q, int m) {
    return SemipatternGroup(make_field(q), m, full_pattern(m), std::vector<std::uint32_t>(m, 1));
}

SemipatternGroup order54() { return SemipatternGroup(make_field(3), 3, full_pattern(3), {1, 2, 1}); }

SemipatternGroup sparse18() { return SemipatternGroup(make_field(3), 3, {{0, 1}, {0, 2}}, {2, 1, 1}); }

GroupElement unit_plus(int m, std::vector<Position> ones) {
    GroupElement g(m, m, Scalar{0});
    for (int i = 0; i < m; ++i) g(i, i) = 1;
    for (auto [i, j] : ones) g(i, j) = 1;
    return g;
}

std::vector<SemipatternGroup> small_groups() {
    std::vector<SemipatternGroup> out;
    out.push_back(ut(2, 3));
    out.push_back(order54());
    out.push_back(sparse18());
    out.push_back(ut(2, 4));
    out.push_back(SemipatternGroup(make_field(5), 2, full_pattern(2), {4, 2}));
    out.push_back(SemipatternGroup(make_field(2, 2), 2, full_pattern(2), {3, 1}));
    return out;
}

// Plain matrix product mod q for prime q; independent of the group code.
std::vector<int> mat_mul(const std::vector<int>& a, const std::vector<int>& b, int m, int q) {
    std::vector<int> c(m * m, 0);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k)
            for (int j = 0; j < m; ++j) c[i * m + j] = (c[i * m + j] + a[i * m + k] * b[k * m + j]) % q;
    return c;
}

}  // namespace

TEST(SemipatternGroup, Orders) {
    EXPECT_EQ(order54().order(), 54u);
    EXPECT_EQ(ut(2, 3).order(), 8u);
    EXPECT_EQ(sparse18().order(), 18u);
    EXPECT_EQ(ut(2, 4).order(), 64u);
}

TEST(SemipatternGroup, OrderMatchesEnumeration) {
    for (const auto& g : small_groups()) {
        const auto elems = g.elements();
        ASSERT_EQ(elems.size(), g.order());
        std::set<GroupElement> distinct(elems.begin(), elems.end());
        EXPECT_EQ(distinct.size(), g.order());
        for (std::uint64_t k = 0; k < elems.size(); ++k) {
            EXPECT_TRUE(g.contains(elems[k]));
            EXPECT_EQ(g.index_of(elems[k]), k);
        }
    }
}

TEST(SemipatternGroup, RejectsUnclosedPattern) {
    try {
        SemipatternGroup(make_field(3), 3, {{0, 1}, {1, 2}}, {1, 1, 1});
        FAIL() << "expected PatternClosureError";
    } catch (const PatternClosureError& e) {
        EXPECT_EQ(e.first(), Position(0, 1));
        EXPECT_EQ(e.second(), Position(1, 2));
    }
}

TEST(SemipatternGroup, RejectsMalformedInput) {
    EXPECT_THROW(SemipatternGroup(make_field(3), 3, {{1, 0}}, {1, 1, 1}), std::invalid_argument);
    EXPECT_THROW(SemipatternGroup(make_field(3), 3, {{0, 3}}, {1, 1, 1}), std::invalid_argument);
    EXPECT_THROW(SemipatternGroup(make_field(3), 3, {}, {1, 4, 1}), std::invalid_argument);
    EXPECT_THROW(SemipatternGroup(make_field(3), 3, {}, {1, 1}), std::invalid_argument);
    EXPECT_THROW(SemipatternGroup(make_modular(2, 2), 2, {}, {1, 1}), std::invalid_argument);
}

TEST(SemipatternGroup, ClosureCriterionMatchesSubgroupTest) {
    for (int q : {2, 3}) {
        for (int m = 2; m <= 4; ++m) {
            const std::vector<Position> all = full_pattern(m);
            for (unsigned mask = 0; mask < (1u << all.size()); ++mask) {
                std::vector<Position> pattern;
                for (std::size_t b = 0; b < all.size(); ++b)
                    if (mask >> b & 1u) pattern.push_back(all[b]);
                // enumerate N_P directly
                std::vector<std::vector<int>> elems;
                std::size_t count = 1;
                for (std::size_t b = 0; b < pattern.size(); ++b) count *= q;
                for (std::size_t code = 0; code < count; ++code) {
                    std::vector<int> e(m * m, 0);
                    for (int i = 0; i < m; ++i) e[i * m + i] = 1;
                    std::size_t c = code;
                    for (auto [i, j] : pattern) {
                        e[i * m + j] = static_cast<int>(c % q);
                        c /= q;
                    }
                    elems.push_back(std::move(e));
                }
                std::set<std::vector<int>> members(elems.begin(), elems.end());
                bool closed = true;
                for (const auto& a : elems) {
                    for (const auto& b : elems) {
                        if (!members.count(mat_mul(a, b, m, q))) {
                            closed = false;
                            break;
                        }
                    }
                    if (!closed) break;
                }
                bool accepted = true;
                try {
                    SemipatternGroup(make_field(q), m, pattern, std::vector<std::uint32_t>(m, 1));
                } catch (const PatternClosureError&) {
                    accepted = false;
                }
                EXPECT_EQ(accepted, closed) << "q=" << q << " m=" << m << " mask=" << mask;
            }
        }
    }
}

TEST(SemipatternGroup, MultiplyExamples) {
    const SemipatternGroup g = ut(2, 3);
    const GroupElement a = unit_plus(3, {{0, 1}});
    const GroupElement b = unit_plus(3, {{1, 2}});
    EXPECT_EQ(g.multiply(a, g.identity()), a);
    EXPECT_EQ(g.multiply(g.identity(), a), a);
    EXPECT_EQ(g.multiply(a, b), unit_plus(3, {{0, 1}, {1, 2}, {0, 2}}));
}

TEST(SemipatternGroup, RandomProductsStayInGroup) {
    const SemipatternGroup g = order54();
    std::mt19937_64 rng(1);
    for (int t = 0; t < 1000; ++t) {
        const GroupElement a = random_element(g, rng);
        const GroupElement b = random_element(g, rng);
        const GroupElement c = g.multiply(a, b);
        ASSERT_TRUE(g.contains(c));
        for (int i = 0; i < 3; ++i) EXPECT_TRUE(g.subgroup(i).contains(c(i, i)));
    }
}

TEST(SemipatternGroup, GroupAxioms) {
    for (const auto& g : small_groups()) {
        std::mt19937_64 rng(2);
        for (int t = 0; t < 300; ++t) {
            const GroupElement a = random_element(g, rng);
            const GroupElement b = random_element(g, rng);
            const GroupElement c = random_element(g, rng);
            EXPECT_EQ(g.multiply(g.multiply(a, b), c), g.multiply(a, g.multiply(b, c)));
            const GroupElement inv = g.inverse(a);
            EXPECT_TRUE(g.contains(inv));
            EXPECT_EQ(g.multiply(a, inv), g.identity());
            EXPECT_EQ(g.multiply(inv, a), g.identity());
        }
    }
}

TEST(SemipatternGroup, DiagonalConjugationPreservesPatternGroup) {
    for (const auto& g : small_groups()) {
        if (g.order() > 100) continue;
        std::vector<GroupElement> diagonal, unipotent;
        for (const auto& e : g.elements()) {
            bool is_diag = true, is_uni = true;
            for (int i = 0; i < g.dim(); ++i) {
                if (e(i, i) != 1) is_uni = false;
                for (int j = i + 1; j < g.dim(); ++j)
                    if (e(i, j) != 0) is_diag = false;
            }
            if (is_diag) diagonal.push_back(e);
            if (is_uni) unipotent.push_back(e);
        }
        for (const auto& d : diagonal) {
            for (const auto& u : unipotent) {
                const GroupElement c = g.multiply(g.multiply(d, u), g.inverse(d));
                for (int i = 0; i < g.dim(); ++i) ASSERT_EQ(c(i, i), 1u);
                ASSERT_TRUE(g.contains(c));
            }
        }
    }
}

TEST(SemipatternGroup, ExponentBound) {
    EXPECT_EQ(exponent_bound(ut(2, 3)), 4u);
    EXPECT_EQ(exponent_bound(order54()), 6u);
    EXPECT_EQ(exponent_bound(SemipatternGroup(make_field(2), 1, {}, {1})), 1u);
    std::vector<SemipatternGroup> groups = small_groups();
    groups.push_back(ut(3, 4));
    for (const auto& g : groups) {
        const std::uint64_t e = exponent_bound(g);
        for (const auto& x : g.elements()) ASSERT_EQ(g.power(x, e), g.identity());
    }
}

TEST(SemipatternGroup, EvaluateWord) {
    const SemipatternGroup g = order54();
    EXPECT_EQ(evaluate_word(g, GroupWord{}, {}), g.identity());
    const GroupElement c = g.element_at(17);
    GroupWord x{{Letter::variable(0)}};
    EXPECT_EQ(evaluate_word(g, x, {{0, c}}), c);
    EXPECT_THROW(evaluate_word(g, x, {}), std::out_of_range);
    GroupElement bad = g.identity();
    bad(1, 0) = 1;
    EXPECT_THROW(evaluate_word(g, x, {{0, bad}}), std::invalid_argument);

    std::mt19937_64 rng(4);
    for (int t = 0; t < 200; ++t) {
        const GroupWord w = random_word(g, 6, 3, 0.4, rng);
        GroupAssignment a;
        for (VarId v = 0; v < 3; ++v) a[v] = random_element(g, rng);
        GroupElement fold = g.identity();
        for (const auto& l : w.letters) fold = g.multiply(fold, l.is_variable() ? a.at(l.var()) : l.element());
        EXPECT_EQ(evaluate_word(g, w, a), fold);
    }
}

TEST(SemipatternGroup, InvertWord) {
    const SemipatternGroup g = ut(2, 3);
    EXPECT_EQ(invert_word(GroupWord{}, g), GroupWord{});
    const GroupElement c = unit_plus(3, {{0, 1}, {1, 2}});
    EXPECT_EQ(invert_word(GroupWord{{Letter::constant(c)}}, g), GroupWord{{Letter::constant(g.inverse(c))}});
    const GroupWord x{{Letter::variable(0)}};
    const GroupWord xxx{{Letter::variable(0), Letter::variable(0), Letter::variable(0)}};
    EXPECT_EQ(invert_word(x, g), xxx);
    for (const auto& e : g.elements()) EXPECT_EQ(g.multiply(e, evaluate_word(g, xxx, {{0, e}})), g.identity());

    const SemipatternGroup h = order54();
    std::mt19937_64 rng(8);
    for (int t = 0; t < 100; ++t) {
        const GroupWord w = random_word(h, 5, 2, 0.5, rng);
        const GroupAssignment a{{0, random_element(h, rng)}, {1, random_element(h, rng)}};
        EXPECT_EQ(evaluate_word(h, invert_word(w, h), a), h.inverse(evaluate_word(h, w, a)));
    }
}

TEST(SemipatternGroup, BruteForceExamples) {
    const SemipatternGroup g = ut(2, 3);
    const GroupElement c = unit_plus(3, {{0, 2}});
    const GroupWord x{{Letter::variable(0)}};
    const GroupDecision single = brute_force_solve(g, x, c);
    ASSERT_TRUE(single.sat());
    EXPECT_EQ(single.witness.at(0), c);

    const GroupWord xx{{Letter::variable(0), Letter::variable(0)}};
    const GroupDecision sq = brute_force_solve(g, xx, c);
    ASSERT_TRUE(sq.sat());
    EXPECT_EQ(g.multiply(sq.witness.at(0), sq.witness.at(0)), c);
    EXPECT_FALSE(brute_force_solve(g, xx, unit_plus(3, {{0, 1}})).sat());
}

TEST(SemipatternGroup, CommutatorOutsideDerivedSubgroupIsUnsat) {
    const SemipatternGroup g = order54();
    const auto elems = g.elements();
    std::set<GroupElement> commutators;
    for (const auto& a : elems)
        for (const auto& b : elems)
            commutators.insert(g.multiply(g.multiply(a, b), g.multiply(g.inverse(a), g.inverse(b))));
    // the derived subgroup is generated by the commutators
    std::set<GroupElement> derived = commutators;
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& a : std::vector<GroupElement>(derived.begin(), derived.end()))
            for (const auto& b : commutators) grew |= derived.insert(g.multiply(a, b)).second;
    }
    GroupElement outside;
    for (const auto& e : elems)
        if (!derived.count(e)) {
            outside = e;
            break;
        }
    ASSERT_FALSE(outside.data().empty());
    const GroupWord x{{Letter::variable(0)}}, y{{Letter::variable(1)}};
    const GroupWord comm = x * y * invert_word(x, g) * invert_word(y, g);
    EXPECT_FALSE(brute_force_solve(g, comm, outside).sat());
    EXPECT_TRUE(brute_force_solve(g, comm, g.identity()).sat());
}

TEST(SemipatternGroup, BruteForceGuard) {
    const SemipatternGroup g = order54();
    GroupWord w;
    for (VarId v = 0; v < 6; ++v) w.letters.push_back(Letter::variable(v));
    EXPECT_THROW(brute_force_solve(g, w, g.identity()), GuardExceeded);
}
