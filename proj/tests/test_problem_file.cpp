#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "eqsolv/group_reduction.hpp"
#include "eqsolv/problem_file.hpp"

using namespace eqsolv;

namespace {

const char* kGroup = R"(# square root of a central element
[group]
q = 2
m = 3
pattern = [[1,2],[1,3],[2,3]]
orders = [1,1,1]

[equation]
vars = x y
const c = [[1,0,1],[0,1,0],[0,0,1]]
lhs = x x y^-1 c^2
rhs = c y^-1
)";

const char* kRing = R"([ring]
p = 2
alpha = 2
m = 2
ideal = [[0,2,0,0]]

[equation]
vars = x
const a = [2,1,0,0]
lhs = 3 x (x + a) - 2*a
rhs = 0
)";

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void expect_error_at(const std::string& text, int line, int column) {
    try {
        parse_problem(text);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), line) << e.what();
        EXPECT_EQ(e.column(), column) << e.what();
    }
}

}  // namespace

TEST(ProblemFile, ParsesGroupProblem) {
    const ProblemFile f = parse_problem(kGroup);
    ASSERT_TRUE(f.group.has_value());
    EXPECT_EQ(f.group->q, 2u);
    EXPECT_EQ(f.group->pattern, full_pattern(3));
    EXPECT_EQ(f.vars, (std::vector<std::string>{"x", "y"}));
    ASSERT_EQ(f.constants.size(), 1u);
    EXPECT_EQ(f.constants[0].values, (std::vector<std::int64_t>{1, 0, 1, 0, 1, 0, 0, 0, 1}));

    const GroupProblem gp = resolve_group(f);
    // y^-1 expands to E - 1 = 3 copies, c^2 to two constant letters
    EXPECT_EQ(gp.lhs.size(), 2u + 3u + 2u);
    ASSERT_TRUE(std::holds_alternative<GroupWord>(gp.rhs));
    EXPECT_EQ(std::get<GroupWord>(gp.rhs).size(), 4u);
}

TEST(ProblemFile, ParsesRingProblem) {
    const ProblemFile f = parse_problem(kRing);
    ASSERT_TRUE(f.ring.has_value());
    const RingProblem rp = resolve_ring(f);
    ASSERT_TRUE(rp.ideal.has_value());
    EXPECT_EQ(rp.ideal->elements.size(), 2u);
    const RingElement a(2, 2, std::vector<Scalar>{2, 1, 0, 0});
    const RingElement x(2, 2, std::vector<Scalar>{0, 3, 2, 2});
    const RingElement expected =
        rp.ring.sub(rp.ring.scale(rp.ring.mul(x, rp.ring.add(x, a)), 3), rp.ring.scale(a, 2));
    EXPECT_EQ(evaluate(rp.ring, rp.expr, {{0, x}}), expected);
}

TEST(ProblemFile, RoundTrip) {
    for (const char* text : {kGroup, kRing}) {
        const ProblemFile f = parse_problem(text);
        const std::string rendered = render_problem(f);
        EXPECT_EQ(parse_problem(rendered), f) << rendered;
        EXPECT_EQ(render_problem(parse_problem(rendered)), rendered);
    }
}

TEST(ProblemFile, SampleFilesRoundTrip) {
    for (const char* name : {"ut54_trivial.eq", "ut3f2_square.eq", "ut3f2_commute.eq", "ut54_commutator.eq",
                             "ut54_power.eq", "ring_m2z4.eq", "factor_m2z4.eq"}) {
        const ProblemFile f = load_problem(std::string(EQSOLV_PROBLEM_DIR) + "/" + name);
        EXPECT_EQ(parse_problem(render_problem(f)), f) << name;
    }
}

TEST(ProblemFile, ErrorsCarryPositions) {
    expect_error_at("[group]\nq = 2\nm = 3\ncolour = red\n", 4, 1);
    expect_error_at("[group]\nq = 2\nm = 3\npattern = [[1,2],\norders=[1,1,1]\n", 4, 18);
    expect_error_at("[group]\nq = 2\nm = 2\npattern = full\norders = [1,1]\n[equation]\nlhs = x $\nrhs = I\n", 7, 9);
    expect_error_at("[group]\n  q = 2\n  q = 3\n", 3, 3);
    expect_error_at("[widgets]\n", 1, 1);
    expect_error_at("q = 2\n", 1, 1);
}

TEST(ProblemFile, ResolveErrorsCarryPositions) {
    const std::string head = "[group]\nq = 2\nm = 2\npattern = full\norders = [1,1]\n[equation]\nvars = x\n";
    try {
        resolve_group(parse_problem(head + "lhs = x z\nrhs = I\n"));
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 8);
        EXPECT_EQ(e.column(), 9);
    }
    // (2,1) entry set: not upper triangular
    EXPECT_THROW(resolve_group(parse_problem(head + "const c = [1,0,1,1]\nlhs = x c\nrhs = I\n")), ParseError);
    EXPECT_THROW(resolve_group(parse_problem(head + "const c = [1,0,1]\nlhs = x c\nrhs = I\n")), ParseError);
    const std::string ring = "[ring]\np = 2\nalpha = 2\nm = 2\n[equation]\nvars = x\n";
    EXPECT_THROW(resolve_ring(parse_problem(ring + "const a = [1,0,0,0]\nlhs = a x\nrhs = 0\n")), ParseError);
    EXPECT_THROW(resolve_ring(parse_problem(ring + "lhs = x + 1\nrhs = 0\n")), ParseError);
    EXPECT_THROW(resolve_ring(parse_problem(ring + "lhs = (x + x\nrhs = 0\n")), ParseError);
}

TEST(ProblemFile, PatternClosureErrorSurfaces) {
    const std::string text =
        "[group]\nq = 3\nm = 3\npattern = [[1,2],[2,3]]\norders = [1,1,1]\n[equation]\nvars = x\nlhs = x\nrhs = I\n";
    EXPECT_THROW(resolve_group(parse_problem(text)), PatternClosureError);
}

TEST(ProblemFile, GoldenDump) {
    const GroupProblem gp = resolve_group(load_problem(std::string(EQSOLV_PROBLEM_DIR) + "/ut3f2_square.eq"));
    const std::string dump = render_system(build_system(gp.group, gp.lhs, gp.rhs), gp.var_names);
    EXPECT_EQ(dump, read_file(std::string(EQSOLV_GOLDEN_DIR) + "/ut3f2_square.dump"));
}
