#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "meso/milp.hpp"
#include "meso/mps.hpp"

using namespace meso;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

bool same_problem(const MilpProblem& a, const MilpProblem& b) {
    if (a.vars.size() != b.vars.size() || a.rows.size() != b.rows.size()) return false;
    for (size_t j = 0; j < a.vars.size(); ++j) {
        const auto &u = a.vars[j], &v = b.vars[j];
        if (u.name != v.name || u.integer != v.integer || u.lb != v.lb || u.ub != v.ub)
            return false;
        if (a.obj[j] != b.obj[j]) return false;
    }
    for (size_t i = 0; i < a.rows.size(); ++i) {
        const auto &u = a.rows[i], &v = b.rows[i];
        if (u.name != v.name || u.sense != v.sense || u.rhs != v.rhs || u.terms != v.terms)
            return false;
    }
    return a.obj_offset == b.obj_offset;
}

MilpProblem sample(bool long_names) {
    auto nm = [&](const std::string& s) {
        return long_names ? "unit_block_" + s + "_commitment_flag" : s;
    };
    MilpProblem p;
    p.vars.push_back({0.0, 1.0, true, nm("b1")});
    p.vars.push_back({0.0, 7.0, true, nm("i1")});
    p.vars.push_back({-2.5, 4.0, false, nm("x1")});
    p.vars.push_back({-kInf, kInf, false, nm("f1")});
    p.vars.push_back({-kInf, 3.0, false, nm("u1")});
    p.vars.push_back({1.5, 1.5, false, nm("c1")});
    p.obj = {1.0, -2.0, 0.1, 0.0, 3.0, -1.0 / 3.0};
    p.obj_offset = 11.25;
    MilpProblem::Row r1, r2, r3;
    r1.terms = {{0, 2.0}, {2, 1.0}};
    r1.sense = Sense::le;
    r1.rhs = 5.5;
    r1.name = nm("rle");
    r2.terms = {{1, 1.0}, {3, -1.0}};
    r2.sense = Sense::ge;
    r2.rhs = 0.1;
    r2.name = nm("rge");
    r3.terms = {{2, 1.0}, {4, 1.0}, {5, 1.0}};
    r3.sense = Sense::eq;
    r3.rhs = 2.0;
    r3.name = nm("req");
    p.rows = {r1, r2, r3};
    return p;
}

} // namespace

TEST_CASE("short-name problems round-trip exactly and rewrite byte-identically") {
    MilpProblem p = sample(false);
    const char* f1 = "mps_rt1.mps";
    const char* f2 = "mps_rt2.mps";
    mps::write(p, f1);
    MilpProblem back = mps::read(f1);
    CHECK(same_problem(p, back));
    mps::write(back, f2);
    CHECK(slurp(f1) == slurp(f2));
    // no sidecar for names that fit the fixed fields
    std::ifstream map(std::string(f1) + ".map");
    CHECK_FALSE(map.good());
    std::remove(f1);
    std::remove(f2);
}

TEST_CASE("long names are mangled with a sidecar that restores them") {
    MilpProblem p = sample(true);
    const char* f = "mps_mangle.mps";
    mps::write(p, f);
    std::string body = slurp(f);
    CHECK(body.find("C0000000") != std::string::npos);
    CHECK(body.find("R0000000") != std::string::npos);
    CHECK(body.find("commitment_flag") == std::string::npos); // long names only in the sidecar
    MilpProblem back = mps::read(f);
    CHECK(same_problem(p, back));
    std::remove(f);
    std::remove((std::string(f) + ".map").c_str());
}

TEST_CASE("a solved reload gives the same optimum") {
    MilpProblem p = sample(false);
    const char* f = "mps_solve.mps";
    mps::write(p, f);
    MilpProblem back = mps::read(f);
    Solution s1 = solve_milp(p, {});
    Solution s2 = solve_milp(back, {});
    REQUIRE(s1.status == s2.status);
    if (s1.status == SolveStatus::optimal)
        CHECK(s1.objective == doctest::Approx(s2.objective).epsilon(1e-12));
    std::remove(f);
}

TEST_CASE("ranges widen rows into a companion pair") {
    spit("mps_rng.mps",
         "NAME          T\n"
         "ROWS\n"
         " N  OBJ\n"
         " L  CAP\n"
         " E  BAL\n"
         "COLUMNS\n"
         "    X         OBJ       1\n"
         "    X         CAP       1\n"
         "    X         BAL       1\n"
         "RHS\n"
         "    RHS       CAP       10\n"
         "    RHS       BAL       4\n"
         "RANGES\n"
         "    RNG       CAP       3\n"
         "    RNG       BAL       2\n"
         "BOUNDS\n"
         " FR BND       X\n"
         "ENDATA\n");
    MilpProblem p = mps::read("mps_rng.mps");
    REQUIRE(p.rows.size() == 4);
    // CAP: 7 <= x <= 10 ; BAL: 4 <= x <= 6
    CHECK(p.rows[0].sense == Sense::le);
    CHECK(p.rows[0].rhs == 10.0);
    CHECK(p.rows[1].sense == Sense::ge);
    CHECK(p.rows[1].rhs == 4.0);
    bool saw_cap_lo = false, saw_bal_hi = false;
    for (const auto& r : p.rows) {
        if (r.name == "CAP__rng") { saw_cap_lo = r.sense == Sense::ge && r.rhs == 7.0; }
        if (r.name == "BAL__rng") { saw_bal_hi = r.sense == Sense::le && r.rhs == 6.0; }
    }
    CHECK(saw_cap_lo);
    CHECK(saw_bal_hi);
    std::remove("mps_rng.mps");
}

TEST_CASE("strict parse errors") {
    spit("mps_bad.mps", "NAME T\nROWS\n N  OBJ\n N  OBJ2\nENDATA\n");
    CHECK_THROWS_AS(mps::read("mps_bad.mps"), ParseError); // two objective rows

    spit("mps_bad.mps",
         "NAME T\nROWS\n N  OBJ\n L  R1\nCOLUMNS\n    X  OBJ  1\n    Y  OBJ  1\n    X  R1  "
         "1\nRHS\nENDATA\n");
    CHECK_THROWS_AS(mps::read("mps_bad.mps"), ParseError); // X entries not contiguous

    spit("mps_bad.mps", "NAME T\nROWS\n N  OBJ\nCOLUMNS\n    X  OBJ  1\nRHS\n");
    CHECK_THROWS_AS(mps::read("mps_bad.mps"), ParseError); // missing ENDATA

    spit("mps_bad.mps", "NAME T\nOBJSENSE\n    MAX\nROWS\n N  OBJ\nENDATA\n");
    CHECK_THROWS_AS(mps::read("mps_bad.mps"), ParseError); // maximization unsupported

    spit("mps_bad.mps", "NAME T\nROWS\n N  OBJ\n L  R1\nCOLUMNS\n    X  R2  1\nENDATA\n");
    CHECK_THROWS_AS(mps::read("mps_bad.mps"), ParseError); // unknown row

    std::remove("mps_bad.mps");
}

TEST_CASE("solution import maps names and defaults to zero") {
    MilpProblem p = sample(false);
    spit("mps_sol.txt", "# comment line\nx1 2.5\nb1 1\n\ni1 3 \n");
    auto x = mps::import_solution("mps_sol.txt", p);
    REQUIRE(x.size() == p.vars.size());
    CHECK(x[0] == 1.0);
    CHECK(x[1] == 3.0);
    CHECK(x[2] == 2.5);
    CHECK(x[3] == 0.0); // unlisted

    spit("mps_sol.txt", "nosuch 1\n");
    CHECK_THROWS_AS(mps::import_solution("mps_sol.txt", p), ParseError);
    spit("mps_sol.txt", "x1 1 2\n");
    CHECK_THROWS_AS(mps::import_solution("mps_sol.txt", p), ParseError);
    std::remove("mps_sol.txt");
}

TEST_CASE("awkward numbers survive the trip") {
    MilpProblem p;
    p.vars.push_back({0.1, 1.0 / 3.0, false, "a"});
    p.vars.push_back({-1e-17, 9.007199254740993e15, false, "b"});
    p.obj = {2.2250738585072014e-308, 0.30000000000000004};
    MilpProblem::Row r;
    r.terms = {{0, 1.0000000000000002}, {1, -3.141592653589793}};
    r.sense = Sense::le;
    r.rhs = 1e-9;
    r.name = "r";
    p.rows = {r};
    const char* f = "mps_num.mps";
    mps::write(p, f);
    MilpProblem back = mps::read(f);
    CHECK(same_problem(p, back));
    std::remove(f);
}
