#include "meso/milp.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>
#include <unordered_map>

#include "meso/errors.hpp"

namespace meso {

int MilpProblem::num_integers() const {
    int n = 0;
    for (const Var& v : vars) n += v.integer;
    return n;
}

void MilpProblem::validate() const {
    if (obj.size() != vars.size())
        throw AssemblyError("milp: objective length disagrees with variable count");
    for (size_t j = 0; j < vars.size(); ++j) {
        const Var& v = vars[j];
        if (std::isnan(v.lb) || std::isnan(v.ub))
            throw AssemblyError("milp: NaN bound on variable '" + v.name + "'");
        if (v.lb > v.ub)
            throw AssemblyError("milp: empty bound interval on variable '" + v.name + "'");
        if (!std::isfinite(obj[j]))
            throw AssemblyError("milp: nonfinite objective coefficient on '" + v.name + "'");
    }
    for (const Row& r : rows) {
        int prev = -1;
        for (auto [col, val] : r.terms) {
            if (col < 0 || col >= static_cast<int>(vars.size()))
                throw AssemblyError("milp: row '" + r.name + "' references unknown column");
            if (col <= prev)
                throw AssemblyError("milp: row '" + r.name + "' has unsorted or duplicate terms");
            if (!std::isfinite(val))
                throw AssemblyError("milp: nonfinite coefficient in row '" + r.name + "'");
            prev = col;
        }
        if (!std::isfinite(r.rhs))
            throw AssemblyError("milp: nonfinite rhs in row '" + r.name + "'");
    }
    if (!std::isfinite(obj_offset))
        throw AssemblyError("milp: nonfinite objective offset");
    if (!branch_priority.empty() && branch_priority.size() != vars.size())
        throw AssemblyError("milp: branch_priority length disagrees with variable count");
}

namespace {

lp::Problem to_lp(const MilpProblem& p) {
    lp::Problem q;
    q.ncol = p.num_vars();
    q.nrow = p.num_rows();
    q.offset = p.obj_offset;
    q.cost = p.obj;
    q.col_lb.resize(q.ncol);
    q.col_ub.resize(q.ncol);
    for (int j = 0; j < q.ncol; ++j) {
        q.col_lb[j] = p.vars[j].lb;
        q.col_ub[j] = p.vars[j].ub;
    }
    q.row_lb.resize(q.nrow);
    q.row_ub.resize(q.nrow);
    for (int i = 0; i < q.nrow; ++i) {
        const auto& r = p.rows[i];
        switch (r.sense) {
            case Sense::le: q.row_lb[i] = -kInf; q.row_ub[i] = r.rhs; break;
            case Sense::ge: q.row_lb[i] = r.rhs; q.row_ub[i] = kInf; break;
            case Sense::eq: q.row_lb[i] = r.rhs; q.row_ub[i] = r.rhs; break;
        }
    }
    // transpose row-wise terms into compressed columns
    std::vector<int> count(q.ncol, 0);
    size_t nnz = 0;
    for (const auto& r : p.rows)
        for (auto [col, val] : r.terms) {
            if (val != 0.0) { ++count[col]; ++nnz; }
        }
    q.a_start.assign(q.ncol + 1, 0);
    for (int j = 0; j < q.ncol; ++j) q.a_start[j + 1] = q.a_start[j] + count[j];
    q.a_row.resize(nnz);
    q.a_val.resize(nnz);
    std::vector<int> cursor(q.a_start.begin(), q.a_start.end() - 1);
    for (int i = 0; i < q.nrow; ++i)
        for (auto [col, val] : p.rows[i].terms) {
            if (val == 0.0) continue;
            int k = cursor[col]++;
            q.a_row[k] = i;
            q.a_val[k] = val;
        }
    return q;
}

struct BoundFix {
    int col;
    double lb, ub;
};

struct Node {
    double est = -kInf; // valid lower bound inherited from the parent LP
    long id = 0;
    int depth = 0;
    std::vector<BoundFix> fixes;
    lp::Basis basis;
};

struct NodeWorse {
    bool operator()(const Node& a, const Node& b) const {
        if (a.est != b.est) return a.est > b.est;
        if (a.depth != b.depth) return a.depth < b.depth; // deeper first
        return a.id > b.id;
    }
};

class BranchAndBound {
public:
    BranchAndBound(const MilpProblem& p, const MilpOptions& opt)
        : p_(p), opt_(opt), base_(to_lp(p)) {
        for (int j = 0; j < p.num_vars(); ++j)
            if (p.vars[j].integer) ints_.push_back(j);
    }

    Solution run() {
        Solution sol;
        lp::Outcome root = solve_node({}, nullptr, kInf);
        sol.nodes = 1;
        sol.lp_iterations = lp_iters_;
        if (root.status == lp::Status::infeasible) {
            sol.status = SolveStatus::infeasible;
            sol.bound = kInf;
            return sol;
        }
        if (root.status == lp::Status::unbounded) {
            sol.status = SolveStatus::unbounded;
            sol.bound = -kInf;
            return sol;
        }
        if (root.status != lp::Status::optimal)
            throw NumericsError("milp: root relaxation did not converge");

        seed_incumbent();
        if (opt_.enable_dive) dive(root, {});

        std::priority_queue<Node, std::vector<Node>, NodeWorse> open;
        Node rootn;
        rootn.est = root.objective;
        rootn.id = next_id_++;
        rootn.basis = root.basis;
        open.push(std::move(rootn));

        double lb_final = root.objective;
        bool limit_hit = false;
        while (!open.empty()) {
            if (sol.nodes >= opt_.node_limit) { limit_hit = true; break; }
            double lb_open = open.top().est;
            if (inc_obj_ < kInf &&
                inc_obj_ - lb_open <= opt_.gap_tol * std::max(1.0, std::abs(inc_obj_)))
                break;
            Node node = open.top();
            open.pop();
            if (node.est >= inc_obj_ - prune_eps()) continue;

            lp::Outcome out = solve_node(node.fixes, node.basis.empty() ? nullptr : &node.basis,
                                         inc_obj_ == kInf ? kInf : inc_obj_ - prune_eps());
            ++sol.nodes;
            if (out.status == lp::Status::infeasible || out.status == lp::Status::cutoff)
                continue;
            if (out.status != lp::Status::optimal)
                throw NumericsError("milp: node relaxation did not converge");
            if (out.objective >= inc_obj_ - prune_eps()) continue;

            int j = most_fractional(out.col_value);
            if (j < 0) {
                accept_incumbent(out.col_value, out.objective);
                continue;
            }
            branch(open, node, out, j);
            if (opt_.dive_period > 0 && sol.nodes % opt_.dive_period == 0)
                dive(out, node.fixes);
        }
        if (open.empty()) lb_final = inc_obj_;
        else lb_final = std::min(inc_obj_, open.top().est);

        sol.lp_iterations = lp_iters_;
        sol.bound = lb_final;
        if (inc_obj_ < kInf) {
            polish(sol);
            sol.gap = (sol.objective - sol.bound) / std::max(1.0, std::abs(sol.objective));
            if (sol.gap < 0.0) sol.gap = 0.0;
            sol.status = (limit_hit && sol.gap > opt_.gap_tol) ? SolveStatus::gap_limit
                                                               : SolveStatus::optimal;
        } else {
            sol.status = limit_hit ? SolveStatus::gap_limit : SolveStatus::infeasible;
            if (!limit_hit) sol.bound = kInf;
        }
        return sol;
    }

private:
    const MilpProblem& p_;
    const MilpOptions& opt_;
    lp::Problem base_;
    std::vector<int> ints_;
    long next_id_ = 0;
    long lp_iters_ = 0;
    double inc_obj_ = kInf;
    std::vector<double> inc_x_;

    double prune_eps() const { return 1e-9 * std::max(1.0, std::abs(inc_obj_)); }

    lp::Outcome solve_node(const std::vector<BoundFix>& fixes, const lp::Basis* warm,
                           double cutoff) {
        std::vector<double> save_lb, save_ub;
        apply(fixes, save_lb, save_ub);
        lp::Options o = opt_.lp;
        o.objective_cutoff = cutoff;
        lp::Outcome out = lp::solve(base_, warm, o);
        if (out.status == lp::Status::numerics || out.status == lp::Status::iter_limit) {
            // retry cold without the early-exit cutoff before giving up
            o.objective_cutoff = kInf;
            o.max_iters = -1;
            lp::Outcome retry = lp::solve(base_, nullptr, o);
            lp_iters_ += out.iterations;
            out = std::move(retry);
        }
        restore(fixes, save_lb, save_ub);
        lp_iters_ += out.iterations;
        return out;
    }

    void apply(const std::vector<BoundFix>& fixes, std::vector<double>& save_lb,
               std::vector<double>& save_ub) {
        save_lb.reserve(fixes.size());
        save_ub.reserve(fixes.size());
        for (const BoundFix& f : fixes) {
            save_lb.push_back(base_.col_lb[f.col]);
            save_ub.push_back(base_.col_ub[f.col]);
            base_.col_lb[f.col] = f.lb;
            base_.col_ub[f.col] = f.ub;
        }
    }

    void restore(const std::vector<BoundFix>& fixes, const std::vector<double>& save_lb,
                 const std::vector<double>& save_ub) {
        for (size_t k = fixes.size(); k-- > 0;) {
            base_.col_lb[fixes[k].col] = save_lb[k];
            base_.col_ub[fixes[k].col] = save_ub[k];
        }
    }

    // Branch variable choice: the fractional integer with the highest branch
    // priority, falling back to plain most-fractional when the problem carries
    // no priorities (or among equal priorities). Returns -1 when integral.
    int most_fractional(const std::vector<double>& x) const {
        const auto& prio = p_.branch_priority;
        int best = -1, best_p = 0;
        double worst = opt_.int_tol;
        for (int j : ints_) {
            double f = std::abs(x[j] - std::round(x[j]));
            if (f <= opt_.int_tol) continue;
            int pj = prio.empty() ? 0 : prio[static_cast<size_t>(j)];
            if (best < 0 || pj > best_p || (pj == best_p && f > worst)) {
                best = j;
                best_p = pj;
                worst = f;
            }
        }
        return best;
    }

    void accept_incumbent(const std::vector<double>& x, double obj) {
        if (obj < inc_obj_ - 1e-12) {
            inc_obj_ = obj;
            inc_x_ = x;
        }
    }

    void branch(std::priority_queue<Node, std::vector<Node>, NodeWorse>& open,
                const Node& parent, const lp::Outcome& out, int j) {
        // effective bounds of j at this node
        double lo = base_.col_lb[j], hi = base_.col_ub[j];
        for (const BoundFix& f : parent.fixes)
            if (f.col == j) { lo = f.lb; hi = f.ub; }
        double x = out.col_value[j];
        double down = std::floor(x), up = std::ceil(x);
        if (down == up) { down -= 1.0; } // defensive; j was fractional
        bool keep_basis = open.size() < 4096;

        Node a;
        a.est = out.objective;
        a.id = next_id_++;
        a.depth = parent.depth + 1;
        a.fixes = parent.fixes;
        a.fixes.push_back({j, lo, down});
        if (keep_basis) a.basis = out.basis;
        open.push(std::move(a));

        Node b;
        b.est = out.objective;
        b.id = next_id_++;
        b.depth = parent.depth + 1;
        b.fixes = parent.fixes;
        b.fixes.push_back({j, up, hi});
        if (keep_basis) b.basis = out.basis;
        open.push(std::move(b));
    }

    void seed_incumbent() {
        if (opt_.seed_solution.empty()) return;
        std::unordered_map<std::string, int> index;
        index.reserve(p_.vars.size());
        for (int j = 0; j < p_.num_vars(); ++j)
            if (!p_.vars[j].name.empty()) index.emplace(p_.vars[j].name, j);
        std::vector<BoundFix> fixes;
        for (const auto& [name, val] : opt_.seed_solution) {
            auto it = index.find(name);
            if (it == index.end()) continue;
            int j = it->second;
            if (!p_.vars[j].integer) continue;
            double v = std::round(val);
            v = std::clamp(v, p_.vars[j].lb, p_.vars[j].ub);
            fixes.push_back({j, v, v});
        }
        if (fixes.empty()) return;
        std::sort(fixes.begin(), fixes.end(),
                  [](const BoundFix& a, const BoundFix& b) { return a.col < b.col; });
        lp::Outcome out = solve_node(fixes, nullptr, kInf);
        if (out.status != lp::Status::optimal) return;
        if (most_fractional(out.col_value) < 0)
            accept_incumbent(out.col_value, out.objective);
        else
            dive(out, fixes);
    }

    // Rounding dive: repeatedly pin every near-integral integer variable and the
    // most fractional one to rounded values, re-solving until integral or stuck.
    // When nearest-rounding the fractional variable kills the LP, the opposite
    // direction gets one try before the dive gives up.
    void dive(const lp::Outcome& start, std::vector<BoundFix> fixes) {
        lp::Outcome out = start;
        for (int round = 0; round < 100; ++round) {
            int frac = most_fractional(out.col_value);
            if (frac < 0) {
                accept_incumbent(out.col_value, out.objective);
                return;
            }
            for (int j : ints_) {
                double x = out.col_value[j];
                double r = std::round(x);
                if (j != frac && std::abs(x - r) <= opt_.int_tol) {
                    r = std::clamp(r, p_.vars[j].lb, p_.vars[j].ub);
                    fixes.push_back({j, r, r});
                }
            }
            double x = out.col_value[frac];
            double near = std::clamp(std::round(x), p_.vars[frac].lb, p_.vars[frac].ub);
            double far = near > x ? near - 1.0 : near + 1.0;
            fixes.push_back({frac, near, near});
            lp::Basis warm = out.basis;
            double cutoff = inc_obj_ == kInf ? kInf : inc_obj_ - prune_eps();
            out = solve_node(fixes, &warm, cutoff);
            if (out.status != lp::Status::optimal &&
                far >= p_.vars[frac].lb && far <= p_.vars[frac].ub) {
                fixes.back() = {frac, far, far};
                out = solve_node(fixes, &warm, cutoff);
            }
            if (out.status != lp::Status::optimal) return;
        }
    }

    // Fix integers at the incumbent point and re-solve the continuous part so
    // the reported vector satisfies every row at machine precision.
    void polish(Solution& sol) {
        std::vector<BoundFix> fixes;
        fixes.reserve(ints_.size());
        for (int j : ints_) {
            double v = std::round(inc_x_[j]);
            v = std::clamp(v, p_.vars[j].lb, p_.vars[j].ub);
            fixes.push_back({j, v, v});
        }
        lp::Outcome out = solve_node(fixes, nullptr, kInf);
        if (out.status == lp::Status::optimal && out.objective <= inc_obj_ + 1e-6 * std::max(1.0, std::abs(inc_obj_))) {
            sol.values = out.col_value;
            for (int j : ints_) sol.values[j] = std::round(sol.values[j]);
            sol.objective = out.objective;
        } else {
            sol.values = inc_x_;
            for (int j : ints_) sol.values[j] = std::round(sol.values[j]);
            double obj = p_.obj_offset;
            for (int j = 0; j < p_.num_vars(); ++j) obj += p_.obj[j] * sol.values[j];
            sol.objective = obj;
        }
        if (sol.objective < sol.bound) sol.bound = sol.objective;
    }
};

} // namespace

lp::Outcome solve_lp(const MilpProblem& p, const lp::Basis* warm, const lp::Options& opt) {
    p.validate();
    lp::Problem q = to_lp(p);
    return lp::solve(q, warm, opt);
}

Solution solve_milp(const MilpProblem& p, const MilpOptions& opt) {
    p.validate();
    if (opt.node_limit < 1) throw DomainError("milp: node_limit must be positive");
    if (opt.int_tol <= 0 || opt.int_tol >= 0.5)
        throw DomainError("milp: int_tol must lie in (0, 0.5)");
    BranchAndBound bb(p, opt);
    return bb.run();
}

double PwlCurve::eval(double p) const {
    if (segments.empty()) throw DomainError("pwl: empty curve");
    double best = -kInf;
    for (const PwlSegment& s : segments) best = std::max(best, s.slope * p + s.intercept);
    return best;
}

PwlCurve linearize_convex_quadratic(double c2, double c1, double c0, double p_max,
                                    int segments) {
    if (!std::isfinite(c2) || !std::isfinite(c1) || !std::isfinite(c0))
        throw DomainError("pwl: nonfinite coefficient");
    if (c2 < 0.0) throw NonconvexError("pwl: negative curvature cannot be underestimated");
    if (!(p_max > 0.0) || !std::isfinite(p_max)) throw DomainError("pwl: p_max must be positive");
    if (segments < 1) throw DomainError("pwl: need at least one segment");

    PwlCurve c;
    c.breaks.resize(segments + 1);
    for (int i = 0; i <= segments; ++i)
        c.breaks[i] = p_max * static_cast<double>(i) / segments;
    auto f = [&](double x) { return (c2 * x + c1) * x + c0; };
    c.segments.resize(segments);
    for (int i = 0; i < segments; ++i) {
        double xl = c.breaks[i], xr = c.breaks[i + 1];
        double slope = c2 * (xl + xr) + c1;
        c.segments[i] = {slope, f(xl) - slope * xl};
    }
    double h = p_max / segments;
    c.error_bound = c2 * h * h / 4.0;
    return c;
}

} // namespace meso
