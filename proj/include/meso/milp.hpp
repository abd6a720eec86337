#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "meso/linexpr.hpp"
#include "meso/simplex.hpp"

namespace meso {

// Row/column form of a mixed-integer program, produced by ModelBuilder and
// consumed by the branch-and-bound driver and the MPS writer.
struct MilpProblem {
    struct Var {
        double lb = 0.0, ub = 0.0;
        bool integer = false;
        std::string name;
    };
    struct Row {
        std::vector<std::pair<int, double>> terms; // sorted by column, merged
        Sense sense = Sense::le;
        double rhs = 0.0;
        std::string name;
    };

    std::vector<Var> vars;
    std::vector<Row> rows;
    std::vector<double> obj; // one coefficient per variable
    double obj_offset = 0.0;
    // Optional branching guidance, one entry per variable when present. Among
    // fractional integers the search branches on the highest priority first
    // (ties fall back to fractionality). Solver metadata only: ignored by the
    // LP relaxation and not part of any exchange format.
    std::vector<int> branch_priority;

    int num_vars() const { return static_cast<int>(vars.size()); }
    int num_rows() const { return static_cast<int>(rows.size()); }
    int num_integers() const;
    void validate() const; // throws AssemblyError on structural defects
};

enum class SolveStatus { optimal, infeasible, unbounded, gap_limit };

struct Solution {
    SolveStatus status = SolveStatus::infeasible;
    std::vector<double> values;  // one per variable; empty if no point found
    double objective = kInf;     // incumbent objective (includes offset)
    double bound = -kInf;        // best proven lower bound
    double gap = kInf;           // relative, (objective-bound)/max(1,|objective|)
    long nodes = 0;
    long lp_iterations = 0;
};

struct MilpOptions {
    double gap_tol = 1e-9;
    double int_tol = 1e-6;
    long node_limit = 200000;
    bool enable_dive = true;     // rounding dive for an initial incumbent
    long dive_period = 256;      // re-dive from an open node every this many
                                 // nodes (0 disables periodic dives)
    lp::Options lp;              // tolerances forwarded to every LP solve
    // Known-good starting point, keyed by variable name. Integer variables
    // found here are fixed and completed into an incumbent before the search;
    // unknown names are ignored so one scenario can seed a larger one.
    std::map<std::string, double> seed_solution;
};

// Continuous relaxation of p (integrality dropped).
lp::Outcome solve_lp(const MilpProblem& p, const lp::Basis* warm = nullptr,
                     const lp::Options& opt = {});

Solution solve_milp(const MilpProblem& p, const MilpOptions& opt = {});

// Piecewise-linear approximation of a convex quadratic f(p)=c2 p^2 + c1 p + c0
// on [0, p_max], built from equal-width secants. Each segment contributes a cut
//   z >= slope * p + intercept * u
// where u is the commitment variable scaling the constant term. The pointwise
// maximum of the cuts interpolates f at the breakpoints and runs above it in
// between (chords of a convex function), so z slightly over-counts interior
// operating points.
struct PwlSegment {
    double slope = 0.0;
    double intercept = 0.0;
};

struct PwlCurve {
    std::vector<PwlSegment> segments;
    std::vector<double> breaks;  // segments.size() + 1 points spanning [0, p_max]
    double error_bound = 0.0;    // max gap above the quadratic: c2*(p_max/n)^2/4
    double eval(double p) const; // value of the piecewise maximum at p
};

PwlCurve linearize_convex_quadratic(double c2, double c1, double c0, double p_max,
                                    int segments);

} // namespace meso
