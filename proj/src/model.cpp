#include "meso/model.hpp"

#include <algorithm>
#include <cmath>

#include "meso/milp.hpp"

namespace meso {

VarRef ModelBuilder::add_continuous(double lower, double upper, std::string name) {
    if (std::isnan(lower) || std::isnan(upper) || lower > upper)
        throw AssemblyError("invalid bounds [" + std::to_string(lower) + ", " + std::to_string(upper) +
                            "] for variable '" + name + "'");
    VarRef v{num_vars(), VarKind::continuous, lower, upper, name};
    vars_.push_back({std::move(name), VarKind::continuous, lower, upper});
    return v;
}

VarRef ModelBuilder::add_binary(std::string name) {
    VarRef v{num_vars(), VarKind::binary, 0.0, 1.0, name};
    vars_.push_back({std::move(name), VarKind::binary, 0.0, 1.0});
    return v;
}

void ModelBuilder::set_bounds(const VarRef& v, double lower, double upper) {
    auto& info = vars_.at(static_cast<size_t>(v.index));
    if (std::isnan(lower) || std::isnan(upper) || lower > upper)
        throw AssemblyError("invalid bounds for variable '" + info.name + "'");
    if (info.kind == VarKind::binary && (lower < 0.0 || upper > 1.0))
        throw AssemblyError("binary variable '" + info.name + "' cannot have bounds outside [0,1]");
    info.lower = lower;
    info.upper = upper;
}

void ModelBuilder::tighten_upper(const VarRef& v, double upper) {
    auto& info = vars_.at(static_cast<size_t>(v.index));
    if (upper < info.upper) {
        if (upper < info.lower)
            throw AssemblyError("tightening makes variable '" + info.name + "' empty");
        info.upper = upper;
    }
}

void ModelBuilder::tighten_lower(const VarRef& v, double lower) {
    auto& info = vars_.at(static_cast<size_t>(v.index));
    if (lower > info.lower) {
        if (lower > info.upper)
            throw AssemblyError("tightening makes variable '" + info.name + "' empty");
        info.lower = lower;
    }
}

std::pair<double, double> ModelBuilder::expr_range(const LinExpr& e) const {
    double lo = e.constant(), hi = e.constant();
    for (const auto& [idx, c] : e.terms()) {
        const auto& info = vars_.at(static_cast<size_t>(idx));
        double a = c * info.lower, b = c * info.upper;
        lo += std::min(a, b);
        hi += std::max(a, b);
    }
    return {lo, hi};
}

void ModelBuilder::add(LinConstraint c) {
    for (const auto& [idx, coeff] : c.lhs.terms()) {
        (void)coeff;
        if (idx < 0 || idx >= num_vars())
            throw AssemblyError("constraint '" + c.name + "' references unknown column " + std::to_string(idx));
    }
    auto [lo, hi] = expr_range(c.lhs);
    switch (c.sense) {
        case Sense::le:
            if (hi <= c.rhs) return; // vacuous over the box
            if (lo > c.rhs) throw AssemblyError("constraint '" + c.name + "' is unsatisfiable over the variable box");
            break;
        case Sense::ge:
            if (lo >= c.rhs) return;
            if (hi < c.rhs) throw AssemblyError("constraint '" + c.name + "' is unsatisfiable over the variable box");
            break;
        case Sense::eq:
            if (lo > c.rhs || hi < c.rhs)
                throw AssemblyError("constraint '" + c.name + "' is unsatisfiable over the variable box");
            if (lo == hi && lo == c.rhs) return;
            break;
    }
    constraints_.push_back(std::move(c));
}

void ModelBuilder::add_implication(const VarRef& flag, const LinConstraint& when_on) {
    if (kind(flag.index) != VarKind::binary)
        throw AssemblyError("implication guard '" + name(flag.index) + "' must be binary");
    if (when_on.sense == Sense::eq) {
        LinConstraint as_le = when_on;
        as_le.sense = Sense::le;
        LinConstraint as_ge = when_on;
        as_ge.sense = Sense::ge;
        add_implication(flag, as_le);
        add_implication(flag, as_ge);
        return;
    }
    // Normalize to lhs <= rhs.
    LinExpr lhs = when_on.lhs;
    double rhs = when_on.rhs;
    if (when_on.sense == Sense::ge) { lhs *= -1.0; rhs = -rhs; }

    auto [lo, hi] = expr_range(lhs);
    (void)lo;
    if (!std::isfinite(hi))
        throw BigMError("cannot derive a finite big-M for constraint '" + when_on.name +
                        "': expression is unbounded above over the variable box");
    double big_m = hi - rhs;
    if (big_m <= 0.0) return; // already implied by the box, nothing to emit
    // lhs <= rhs + M * (1 - flag)
    add(le(lhs + LinExpr::term(flag, big_m), rhs + big_m, when_on.name));
}

VarRef ModelBuilder::add_product(const VarRef& flag, const VarRef& x, std::string prod_name) {
    if (kind(flag.index) != VarKind::binary)
        throw AssemblyError("product factor '" + name(flag.index) + "' must be binary");
    double L = lower(x.index), U = upper(x.index);
    if (!std::isfinite(L) || !std::isfinite(U))
        throw BigMError("product with '" + name(x.index) + "' needs finite bounds on both sides");
    VarRef y = add_continuous(std::min(0.0, L), std::max(0.0, U), prod_name);
    add(le(LinExpr(y), LinExpr::term(flag, U), prod_name + "_cap"));
    add(ge(LinExpr(y), LinExpr::term(flag, L), prod_name + "_floor"));
    // y <= x - L(1-flag);  y >= x - U(1-flag)
    add(le(LinExpr(y) - LinExpr(x) - LinExpr::term(flag, L), -L, prod_name + "_track_hi"));
    add(ge(LinExpr(y) - LinExpr(x) - LinExpr::term(flag, U), -U, prod_name + "_track_lo"));
    return y;
}

MilpProblem ModelBuilder::build() const {
    MilpProblem p;
    p.vars.reserve(vars_.size());
    for (const auto& v : vars_)
        p.vars.push_back({v.lower, v.upper, v.kind == VarKind::binary, v.name});
    p.rows.reserve(constraints_.size());
    for (const auto& c : constraints_) {
        MilpProblem::Row r;
        r.terms = c.lhs.terms();
        r.sense = c.sense;
        r.rhs = c.rhs;
        r.name = c.name;
        p.rows.push_back(std::move(r));
    }
    p.obj.assign(vars_.size(), 0.0);
    for (const auto& [idx, c] : objective_.terms()) p.obj[static_cast<size_t>(idx)] = c;
    p.obj_offset = objective_.constant();
    return p;
}

} // namespace meso
