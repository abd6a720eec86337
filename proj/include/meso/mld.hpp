#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "meso/linexpr.hpp"

namespace meso {

// Row-major sorted triplet matrix; insertion order of the builder fixes row and
// column numbering, so assembly is bit-reproducible.
struct SparseMatrix {
    int rows = 0;
    int cols = 0;
    struct Entry { int row, col; double value; };
    std::vector<Entry> entries; // sorted (row, col), unique

    void multiply_add(const std::vector<double>& x, std::vector<double>& out) const;
};

// Mixed-logical-dynamical model in the canonical pair
//   x(k+1) = A x + B_u u + B_aux w + B_aff
//   E_x x + E_u u + E_aux w <= E_aff
// Variable partitions (state/input/aux) are fixed at build time.
struct MldModel {
    SparseMatrix A, B_u, B_aux;
    std::vector<double> B_aff;
    SparseMatrix E_x, E_u, E_aux;
    std::vector<double> E_aff;
    std::vector<std::string> state_names, input_names, aux_names;
    std::vector<std::string> inequality_names;

    int num_states() const { return static_cast<int>(state_names.size()); }
    int num_inputs() const { return static_cast<int>(input_names.size()); }
    int num_aux() const { return static_cast<int>(aux_names.size()); }

    // Applies the update map after checking every inequality at (x,u,w).
    // A violation beyond tol raises InfeasiblePointError naming the worst row.
    std::vector<double> simulate_step(const std::vector<double>& x,
                                      const std::vector<double>& u,
                                      const std::vector<double>& w,
                                      double tol = 1e-6) const;

    // Sparse-triplet text dump: one "<matrix> <row> <col> <value>" line per
    // entry, affine vectors as "<vector> <row> <value>", prefixed by a header
    // with partition sizes. Stable ordering.
    void dump(std::ostream& os) const;
};

// Declares partitioned variables, per-state dynamics rows and inequality rows,
// then assembles the canonical matrices. Numbering follows declaration order.
class MldBuilder {
public:
    VarRef add_state(std::string name, double lower, double upper,
                     VarKind kind = VarKind::continuous);
    VarRef add_input(std::string name, double lower, double upper,
                     VarKind kind = VarKind::continuous);
    VarRef add_aux(std::string name, double lower, double upper,
                   VarKind kind = VarKind::binary);

    // Right-hand side of x_state(k+1); may reference any declared variable.
    void set_dynamics(const VarRef& state, LinExpr rhs);

    // Any-sense row over declared variables; normalized to <= rows on assembly.
    void add_inequality(LinConstraint c);

    // Adds box rows for every declared variable whose bound is finite, so the
    // canonical inequalities imply the declared ranges.
    void add_bound_rows();

    MldModel assemble() const;

private:
    enum class Part { state, input, aux };
    struct Decl {
        std::string name;
        Part part;
        int local;          // index within its partition
        double lower, upper;
        VarKind kind;
        bool has_dynamics = false;
        LinExpr dynamics;
    };
    std::vector<Decl> decls_;
    std::vector<LinConstraint> inequalities_;
    int n_state_ = 0, n_input_ = 0, n_aux_ = 0;

    const Decl& decl_of(int global_index, const std::string& ctx) const;
};

} // namespace meso
