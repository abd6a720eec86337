#pragma once

#include <cstdint>
#include <vector>

#include "meso/linexpr.hpp"

namespace meso::lp {

// Computational-form LP:
//   min cost'x + offset
//   row_lb <= A x <= row_ub        (equalities: row_lb == row_ub)
//   col_lb <= x <= col_ub
// A is column-compressed. Senses are encoded purely through row bounds.
struct Problem {
    int ncol = 0, nrow = 0;
    std::vector<int> a_start;   // ncol + 1
    std::vector<int> a_row;     // nnz
    std::vector<double> a_val;  // nnz
    std::vector<double> cost, col_lb, col_ub;
    std::vector<double> row_lb, row_ub;
    double offset = 0.0;
};

enum class Status { optimal, infeasible, unbounded, iter_limit, cutoff, numerics };

// Variable status: applies to structural columns first, then row logicals.
enum VStat : int8_t { kAtLower = 0, kAtUpper = 1, kBasic = 2 };

struct Basis {
    std::vector<int8_t> stat; // ncol + nrow entries, exactly nrow basic
    bool empty() const { return stat.empty(); }
};

struct Options {
    double feas_tol = 1e-7;   // primal feasibility (scaled space)
    double dual_tol = 1e-7;   // reduced-cost sign tolerance
    double pivot_tol = 1e-8;  // smallest acceptable pivot magnitude
    long max_iters = -1;      // -1: 200*(nrow+ncol) + 2000
    double objective_cutoff = kInf; // early exit once the dual bound passes this
    bool scale = true;
};

struct Outcome {
    Status status = Status::numerics;
    double objective = 0.0;
    std::vector<double> col_value, row_value;
    std::vector<double> col_dual;  // reduced costs
    std::vector<double> row_dual;  // y
    Basis basis;
    long iterations = 0;
    std::vector<double> ray;       // improving direction (columns) when unbounded
};

// Bounded-variable dual simplex. Cold starts use the all-logical basis with
// nonbasic columns parked on their cost-preferred bound, which is always dual
// feasible because every column is boxed (infinite bounds get a deterministic
// artificial box; a solution pinned to that box is reported unbounded).
Outcome solve(const Problem& p, const Basis* warm, const Options& opt);

} // namespace meso::lp
