#pragma once

#include <string>
#include <utility>
#include <vector>

#include "meso/linexpr.hpp"

namespace meso {

struct MilpProblem; // milp.hpp

// Flat registry of decision variables plus the constraint/objective store the
// optimizer consumes. Insertion order is the canonical column/row order, which
// keeps every downstream artifact (MPS files, reports) deterministic.
class ModelBuilder {
public:
    VarRef add_continuous(double lower, double upper, std::string name);
    VarRef add_binary(std::string name);

    int num_vars() const { return static_cast<int>(vars_.size()); }
    int num_constraints() const { return static_cast<int>(constraints_.size()); }

    double lower(int index) const { return vars_.at(static_cast<size_t>(index)).lower; }
    double upper(int index) const { return vars_.at(static_cast<size_t>(index)).upper; }
    const std::string& name(int index) const { return vars_.at(static_cast<size_t>(index)).name; }
    VarKind kind(int index) const { return vars_.at(static_cast<size_t>(index)).kind; }

    void set_bounds(const VarRef& v, double lower, double upper);
    void fix(const VarRef& v, double value) { set_bounds(v, value, value); }
    // Tightening-only variants used by presolve-style fixings.
    void tighten_upper(const VarRef& v, double upper);
    void tighten_lower(const VarRef& v, double lower);

    // Adds a row. Rows that are satisfied for every point in the variable box
    // are dropped; rows unsatisfiable over the box throw AssemblyError.
    void add(LinConstraint c);

    // flag == 1 must imply `when_on`. Rewritten with the tightest big-M the
    // variable box supports; throws BigMError when that box is unbounded the
    // wrong way. Equalities split into a <= / >= pair. A constraint already
    // implied by the box becomes a no-op (M <= 0).
    void add_implication(const VarRef& flag, const LinConstraint& when_on);

    // Declares y = flag * x exactly (flag binary, x boxed) via the four-row
    // McCormick gadget; returns y.
    VarRef add_product(const VarRef& flag, const VarRef& x, std::string name);

    void add_objective(const LinExpr& term) { objective_ += term; }
    const LinExpr& objective() const { return objective_; }

    // Interval of an expression over the current variable box (may be +-inf).
    std::pair<double, double> expr_range(const LinExpr& e) const;

    const std::vector<LinConstraint>& constraints() const { return constraints_; }

    MilpProblem build() const;

private:
    struct VarInfo {
        std::string name;
        VarKind kind;
        double lower, upper;
    };
    std::vector<VarInfo> vars_;
    std::vector<LinConstraint> constraints_;
    LinExpr objective_;
};

} // namespace meso
