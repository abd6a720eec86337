#include "meso/mld.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

namespace meso {

void SparseMatrix::multiply_add(const std::vector<double>& x, std::vector<double>& out) const {
    for (const auto& e : entries)
        out[static_cast<size_t>(e.row)] += e.value * x[static_cast<size_t>(e.col)];
}

std::vector<double> MldModel::simulate_step(const std::vector<double>& x,
                                            const std::vector<double>& u,
                                            const std::vector<double>& w,
                                            double tol) const {
    if (static_cast<int>(x.size()) != num_states() || static_cast<int>(u.size()) != num_inputs() ||
        static_cast<int>(w.size()) != num_aux())
        throw AssemblyError("simulate_step: point dimensions do not match the model partitions");

    std::vector<double> act(E_aff.size(), 0.0);
    E_x.multiply_add(x, act);
    E_u.multiply_add(u, act);
    E_aux.multiply_add(w, act);
    double worst = 0.0;
    size_t worst_row = 0;
    for (size_t i = 0; i < act.size(); ++i) {
        double v = act[i] - E_aff[i];
        if (v > worst) { worst = v; worst_row = i; }
    }
    if (worst > tol) {
        const std::string& rn = worst_row < inequality_names.size() ? inequality_names[worst_row]
                                                                    : std::to_string(worst_row);
        throw InfeasiblePointError("point violates inequality '" + rn + "' by " + std::to_string(worst));
    }

    std::vector<double> next = B_aff;
    A.multiply_add(x, next);
    B_u.multiply_add(u, next);
    B_aux.multiply_add(w, next);
    return next;
}

namespace {
void dump_matrix(std::ostream& os, const char* tag, const SparseMatrix& m) {
    for (const auto& e : m.entries) {
        char buf[32];
        auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), e.value);
        (void)ec;
        os << tag << ' ' << e.row << ' ' << e.col << ' ' << std::string_view(buf, p) << '\n';
    }
}
void dump_vector(std::ostream& os, const char* tag, const std::vector<double>& v) {
    for (size_t i = 0; i < v.size(); ++i) {
        char buf[32];
        auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v[i]);
        (void)ec;
        os << tag << ' ' << i << ' ' << std::string_view(buf, p) << '\n';
    }
}
} // namespace

void MldModel::dump(std::ostream& os) const {
    os << "mld " << num_states() << ' ' << num_inputs() << ' ' << num_aux() << ' '
       << E_aff.size() << '\n';
    dump_matrix(os, "A", A);
    dump_matrix(os, "Bu", B_u);
    dump_matrix(os, "Baux", B_aux);
    dump_vector(os, "Baff", B_aff);
    dump_matrix(os, "Ex", E_x);
    dump_matrix(os, "Eu", E_u);
    dump_matrix(os, "Eaux", E_aux);
    dump_vector(os, "Eaff", E_aff);
}

VarRef MldBuilder::add_state(std::string name, double lower, double upper, VarKind kind) {
    int global = static_cast<int>(decls_.size());
    decls_.push_back({name, Part::state, n_state_++, lower, upper, kind, false, {}});
    return VarRef{global, kind, lower, upper, std::move(name)};
}

VarRef MldBuilder::add_input(std::string name, double lower, double upper, VarKind kind) {
    int global = static_cast<int>(decls_.size());
    decls_.push_back({name, Part::input, n_input_++, lower, upper, kind, false, {}});
    return VarRef{global, kind, lower, upper, std::move(name)};
}

VarRef MldBuilder::add_aux(std::string name, double lower, double upper, VarKind kind) {
    int global = static_cast<int>(decls_.size());
    decls_.push_back({name, Part::aux, n_aux_++, lower, upper, kind, false, {}});
    return VarRef{global, kind, lower, upper, std::move(name)};
}

const MldBuilder::Decl& MldBuilder::decl_of(int global_index, const std::string& ctx) const {
    if (global_index < 0 || global_index >= static_cast<int>(decls_.size()))
        throw AssemblyError(ctx + " references undeclared variable index " + std::to_string(global_index));
    return decls_[static_cast<size_t>(global_index)];
}

void MldBuilder::set_dynamics(const VarRef& state, LinExpr rhs) {
    auto& d = decls_.at(static_cast<size_t>(state.index));
    if (d.part != Part::state)
        throw AssemblyError("dynamics assigned to non-state variable '" + d.name + "'");
    rhs.check_finite();
    for (const auto& [idx, c] : rhs.terms()) {
        (void)c;
        decl_of(idx, "dynamics of '" + d.name + "'");
    }
    d.has_dynamics = true;
    d.dynamics = std::move(rhs);
}

void MldBuilder::add_inequality(LinConstraint c) {
    for (const auto& [idx, coeff] : c.lhs.terms()) {
        (void)coeff;
        decl_of(idx, "inequality '" + c.name + "'");
    }
    inequalities_.push_back(std::move(c));
}

void MldBuilder::add_bound_rows() {
    for (const auto& d : decls_) {
        int global = static_cast<int>(&d - decls_.data());
        VarRef v{global, d.kind, d.lower, d.upper, d.name};
        if (std::isfinite(d.upper)) add_inequality(le(LinExpr(v), d.upper, d.name + "_ub"));
        if (std::isfinite(d.lower)) add_inequality(ge(LinExpr(v), d.lower, d.name + "_lb"));
    }
}

MldModel MldBuilder::assemble() const {
    MldModel m;
    for (const auto& d : decls_) {
        switch (d.part) {
            case Part::state: m.state_names.push_back(d.name); break;
            case Part::input: m.input_names.push_back(d.name); break;
            case Part::aux: m.aux_names.push_back(d.name); break;
        }
    }
    const int ns = n_state_, ni = n_input_, na = n_aux_;
    m.A.rows = m.B_u.rows = m.B_aux.rows = ns;
    m.A.cols = ns; m.B_u.cols = ni; m.B_aux.cols = na;
    m.B_aff.assign(static_cast<size_t>(ns), 0.0);

    for (const auto& d : decls_) {
        if (d.part != Part::state) continue;
        if (!d.has_dynamics)
            throw AssemblyError("state '" + d.name + "' has no dynamics row");
        m.B_aff[static_cast<size_t>(d.local)] = d.dynamics.constant();
        for (const auto& [idx, c] : d.dynamics.terms()) {
            const Decl& src = decls_[static_cast<size_t>(idx)];
            SparseMatrix::Entry e{d.local, src.local, c};
            switch (src.part) {
                case Part::state: m.A.entries.push_back(e); break;
                case Part::input: m.B_u.entries.push_back(e); break;
                case Part::aux: m.B_aux.entries.push_back(e); break;
            }
        }
    }

    const int nrow = static_cast<int>(inequalities_.size()) +
                     static_cast<int>(std::count_if(inequalities_.begin(), inequalities_.end(),
                                                    [](const LinConstraint& c) { return c.sense == Sense::eq; }));
    m.E_x.rows = m.E_u.rows = m.E_aux.rows = nrow;
    m.E_x.cols = ns; m.E_u.cols = ni; m.E_aux.cols = na;
    m.E_aff.reserve(static_cast<size_t>(nrow));

    auto emit = [&](const LinConstraint& c, double sign, const std::string& suffix) {
        int row = static_cast<int>(m.E_aff.size());
        m.E_aff.push_back(sign * c.rhs);
        m.inequality_names.push_back(c.name + suffix);
        for (const auto& [idx, coeff] : c.lhs.terms()) {
            const Decl& src = decls_[static_cast<size_t>(idx)];
            SparseMatrix::Entry e{row, src.local, sign * coeff};
            switch (src.part) {
                case Part::state: m.E_x.entries.push_back(e); break;
                case Part::input: m.E_u.entries.push_back(e); break;
                case Part::aux: m.E_aux.entries.push_back(e); break;
            }
        }
    };
    for (const auto& c : inequalities_) {
        switch (c.sense) {
            case Sense::le: emit(c, 1.0, ""); break;
            case Sense::ge: emit(c, -1.0, ""); break;
            case Sense::eq: emit(c, 1.0, "_le"); emit(c, -1.0, "_ge"); break;
        }
    }

    auto sort_entries = [](SparseMatrix& sm) {
        std::stable_sort(sm.entries.begin(), sm.entries.end(),
                         [](const SparseMatrix::Entry& a, const SparseMatrix::Entry& b) {
                             return a.row != b.row ? a.row < b.row : a.col < b.col;
                         });
    };
    sort_entries(m.A); sort_entries(m.B_u); sort_entries(m.B_aux);
    sort_entries(m.E_x); sort_entries(m.E_u); sort_entries(m.E_aux);
    return m;
}

} // namespace meso
