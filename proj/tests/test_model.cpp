#include "doctest.h"

#include <cmath>
#include <vector>

#include "meso/milp.hpp"
#include "meso/model.hpp"

using namespace meso;

namespace {

// checks a candidate point against every row of a built problem
bool point_ok(const MilpProblem& p, const std::vector<double>& x, double tol = 1e-9) {
    for (const auto& r : p.rows) {
        double a = 0.0;
        for (auto [col, coeff] : r.terms) a += coeff * x[col];
        switch (r.sense) {
            case Sense::le: if (a > r.rhs + tol) return false; break;
            case Sense::ge: if (a < r.rhs - tol) return false; break;
            case Sense::eq: if (std::abs(a - r.rhs) > tol) return false; break;
        }
    }
    return true;
}

} // namespace

TEST_CASE("variable declaration and bound management") {
    ModelBuilder mb;
    VarRef x = mb.add_continuous(0.0, 10.0, "x");
    VarRef f = mb.add_binary("f");
    CHECK(mb.num_vars() == 2);
    CHECK(mb.lower(x.index) == 0.0);
    CHECK(mb.upper(f.index) == 1.0);
    CHECK(mb.kind(f.index) == VarKind::binary);

    mb.set_bounds(x, 1.0, 5.0);
    CHECK(mb.lower(x.index) == 1.0);
    mb.tighten_upper(x, 4.0);
    CHECK(mb.upper(x.index) == 4.0);
    // loosening through the tightening API is ignored
    mb.tighten_upper(x, 9.0);
    CHECK(mb.upper(x.index) == 4.0);
    mb.tighten_lower(x, 2.0);
    CHECK(mb.lower(x.index) == 2.0);
    // tightening into an empty interval is an assembly bug
    CHECK_THROWS_AS(mb.tighten_lower(x, 4.5), AssemblyError);

    mb.fix(f, 1.0);
    CHECK(mb.lower(f.index) == 1.0);

    CHECK_THROWS_AS(mb.add_continuous(3.0, 2.0, "bad"), AssemblyError);
}

TEST_CASE("rows vacuous over the box are dropped, impossible rows throw") {
    ModelBuilder mb;
    VarRef x = mb.add_continuous(0.0, 10.0, "x");
    int before = mb.num_constraints();
    mb.add(le(LinExpr(x), 20.0, "slack_row")); // always true on [0,10]
    CHECK(mb.num_constraints() == before);
    mb.add(le(LinExpr(x), 5.0, "real_row"));
    CHECK(mb.num_constraints() == before + 1);
    CHECK_THROWS_AS(mb.add(ge(LinExpr(x), 20.0, "impossible")), AssemblyError);
}

TEST_CASE("implication rewrites to the tightest big-M row") {
    ModelBuilder mb;
    VarRef x = mb.add_continuous(0.0, 10.0, "x");
    VarRef f = mb.add_binary("f");
    // f = 1 forces x <= 5. Over [0,10] the slack is M = 10 - 5 = 5, so the
    // lifted row must be x + 5 f <= 10.
    mb.add_implication(f, le(LinExpr(x), 5.0, "cap"));
    MilpProblem p = mb.build();
    REQUIRE(p.rows.size() == 1);
    const auto& r = p.rows[0];
    REQUIRE(r.terms.size() == 2);
    CHECK(r.terms[0].first == x.index);
    CHECK(r.terms[0].second == doctest::Approx(1.0));
    CHECK(r.terms[1].first == f.index);
    CHECK(r.terms[1].second == doctest::Approx(5.0));
    CHECK(r.rhs == doctest::Approx(10.0));
    CHECK(r.sense == Sense::le);

    // behavioural check on all four corners
    CHECK(point_ok(p, {10.0, 0.0}));
    CHECK(point_ok(p, {5.0, 1.0}));
    CHECK_FALSE(point_ok(p, {6.0, 1.0}));
}

TEST_CASE("implication of an equality splits into two guarded rows") {
    ModelBuilder mb;
    VarRef x = mb.add_continuous(-2.0, 8.0, "x");
    VarRef f = mb.add_binary("f");
    mb.add_implication(f, eq(LinExpr(x), 3.0, "pin"));
    MilpProblem p = mb.build();
    REQUIRE(p.rows.size() == 2);
    CHECK(point_ok(p, {-2.0, 0.0}));
    CHECK(point_ok(p, {8.0, 0.0}));
    CHECK(point_ok(p, {3.0, 1.0}));
    CHECK_FALSE(point_ok(p, {2.0, 1.0}));
    CHECK_FALSE(point_ok(p, {4.0, 1.0}));
}

TEST_CASE("implication already satisfied by the box is a no-op") {
    ModelBuilder mb;
    VarRef x = mb.add_continuous(0.0, 4.0, "x");
    VarRef f = mb.add_binary("f");
    mb.add_implication(f, le(LinExpr(x), 4.0, "redundant"));
    CHECK(mb.num_constraints() == 0);
}

TEST_CASE("implication over an unbounded expression cannot be lifted") {
    ModelBuilder mb;
    VarRef x = mb.add_continuous(0.0, kInf, "x");
    VarRef f = mb.add_binary("f");
    CHECK_THROWS_AS(mb.add_implication(f, le(LinExpr(x), 5.0, "cap")), BigMError);
    // guard must be binary
    VarRef y = mb.add_continuous(0.0, 1.0, "y");
    VarRef z = mb.add_continuous(0.0, 2.0, "z");
    CHECK_THROWS_AS(mb.add_implication(y, le(LinExpr(z), 1.0, "c")), AssemblyError);
}

TEST_CASE("product gadget pins y = flag * x over the whole box") {
    ModelBuilder mb;
    const double L = -3.0, U = 7.0;
    VarRef f = mb.add_binary("f");
    VarRef x = mb.add_continuous(L, U, "x");
    VarRef y = mb.add_product(f, x, "y");
    CHECK(mb.lower(y.index) == doctest::Approx(std::min(0.0, L)));
    CHECK(mb.upper(y.index) == doctest::Approx(std::max(0.0, U)));
    MilpProblem p = mb.build();
    REQUIRE(p.rows.size() == 4);

    for (double flag : {0.0, 1.0}) {
        for (double xv : {L, 0.0, 2.5, U}) {
            double want = flag * xv;
            CHECK(point_ok(p, {flag, xv, want}));
            CHECK_FALSE(point_ok(p, {flag, xv, want + 0.5}));
            CHECK_FALSE(point_ok(p, {flag, xv, want - 0.5}));
        }
    }
}

TEST_CASE("product requires a boxed operand and a binary flag") {
    ModelBuilder mb;
    VarRef f = mb.add_binary("f");
    VarRef x = mb.add_continuous(0.0, kInf, "x");
    CHECK_THROWS_AS(mb.add_product(f, x, "y"), BigMError);
    VarRef g = mb.add_continuous(0.0, 1.0, "g");
    VarRef z = mb.add_continuous(0.0, 2.0, "z");
    CHECK_THROWS_AS(mb.add_product(g, z, "w"), AssemblyError);
}

TEST_CASE("expression ranges use interval arithmetic over the box") {
    ModelBuilder mb;
    VarRef x = mb.add_continuous(-1.0, 2.0, "x");
    VarRef y = mb.add_continuous(0.0, kInf, "y");
    auto [lo, hi] = mb.expr_range(2.0 * LinExpr(x) - LinExpr(y) + 1.0);
    CHECK(lo == -kInf);
    CHECK(hi == doctest::Approx(5.0));
}

TEST_CASE("build emits columns in declaration order with the objective") {
    ModelBuilder mb;
    VarRef x = mb.add_continuous(0.0, 2.0, "x");
    VarRef f = mb.add_binary("f");
    mb.add(le(LinExpr(x) + LinExpr(f), 2.5, "row"));
    mb.add_objective(3.0 * LinExpr(x) + 11.0);
    mb.add_objective(LinExpr(f));
    MilpProblem p = mb.build();
    p.validate();
    REQUIRE(p.vars.size() == 2);
    CHECK(p.vars[0].name == "x");
    CHECK_FALSE(p.vars[0].integer);
    CHECK(p.vars[1].integer);
    CHECK(p.obj[0] == doctest::Approx(3.0));
    CHECK(p.obj[1] == doctest::Approx(1.0));
    CHECK(p.obj_offset == doctest::Approx(11.0));
}
