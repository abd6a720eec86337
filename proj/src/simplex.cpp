#include "meso/simplex.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "meso/errors.hpp"

namespace meso::lp {

namespace {

constexpr double kArtificialBox = 1e8;

double pow2_near(double v) {
    if (!(v > 0.0) || !std::isfinite(v)) return 1.0;
    int e = 0;
    std::frexp(v, &e);          // v = f * 2^e, f in [0.5, 1)
    return std::ldexp(1.0, -e); // ~1/v rounded to a power of two
}

struct Eta {
    int row;
    double pivot;
    std::vector<std::pair<int, double>> nz; // entries of the spike, pivot row excluded
};

class DualSimplex {
public:
    DualSimplex(const Problem& p, const Options& opt) : p_(p), opt_(opt) {
        n_ = p.ncol;
        m_ = p.nrow;
        N_ = n_ + m_;
        scale_problem();
        max_iters_ = opt.max_iters >= 0 ? opt.max_iters : 200L * (n_ + m_) + 2000L;
    }

    Outcome run(const Basis* warm) {
        load_basis(warm);
        if (!refactorize()) reset_to_logical_basis();
        compute_primal();
        compute_duals();
        restore_dual_feasibility();

        Outcome out;
        out.status = iterate();
        if (out.status == Status::optimal) out.status = detect_unbounded(out);
        finalize(out);
        return out;
    }

private:
    const Problem& p_;
    Options opt_;
    int n_, m_, N_;
    long max_iters_ = 0;

    // scaled combined data; column j < n_ structural, n_ + i logical of row i
    std::vector<double> lb_, ub_, c_, x_, d_;
    std::vector<double> aval_;               // scaled structural values
    std::vector<double> rscale_, cscale_;
    std::vector<uint8_t> art_lb_, art_ub_;
    std::vector<int8_t> stat_;
    std::vector<int> basic_;                 // m_: column in each basis slot
    std::vector<int> bpos_;                  // N_: slot of column, -1 if nonbasic

    // mutable: Eigen's transpose() view accessor is non-const even though the
    // solve it feeds is logically read-only
    mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
    std::vector<Eta> etas_;
    long eta_nnz_ = 0;
    long lu_nnz_ = 0;
    long iters_ = 0;
    long stalled_ = 0;
    bool bland_ = false;
    double last_obj_ = -kInf;
    bool box_inflated_ = false;

    // workspace
    std::vector<double> work_, rho_, alpha_;

    // --- setup -----------------------------------------------------------

    void scale_problem() {
        rscale_.assign(m_, 1.0);
        cscale_.assign(n_, 1.0);
        aval_ = p_.a_val;
        if (opt_.scale && !aval_.empty()) {
            for (int pass = 0; pass < 2; ++pass) {
                std::vector<double> rmin(m_, kInf), rmax(m_, 0.0);
                for (int j = 0; j < n_; ++j)
                    for (int k = p_.a_start[j]; k < p_.a_start[j + 1]; ++k) {
                        double a = std::abs(p_.a_val[k]) * cscale_[j];
                        if (a == 0.0) continue;
                        int i = p_.a_row[k];
                        rmin[i] = std::min(rmin[i], a);
                        rmax[i] = std::max(rmax[i], a);
                    }
                for (int i = 0; i < m_; ++i)
                    if (rmax[i] > 0.0) rscale_[i] = pow2_near(std::sqrt(rmin[i] * rmax[i]));
                std::vector<double> cmin(n_, kInf), cmax(n_, 0.0);
                for (int j = 0; j < n_; ++j)
                    for (int k = p_.a_start[j]; k < p_.a_start[j + 1]; ++k) {
                        double a = std::abs(p_.a_val[k]) * rscale_[p_.a_row[k]];
                        if (a == 0.0) continue;
                        cmin[j] = std::min(cmin[j], a);
                        cmax[j] = std::max(cmax[j], a);
                    }
                for (int j = 0; j < n_; ++j)
                    if (cmax[j] > 0.0) cscale_[j] = pow2_near(std::sqrt(cmin[j] * cmax[j]));
            }
            for (int j = 0; j < n_; ++j)
                for (int k = p_.a_start[j]; k < p_.a_start[j + 1]; ++k)
                    aval_[k] = p_.a_val[k] * rscale_[p_.a_row[k]] * cscale_[j];
        }

        lb_.resize(N_);
        ub_.resize(N_);
        c_.assign(N_, 0.0);
        art_lb_.assign(N_, 0);
        art_ub_.assign(N_, 0);
        for (int j = 0; j < n_; ++j) {
            // x = cscale * x'  =>  bounds divide by the column scale
            lb_[j] = p_.col_lb[j] / cscale_[j];
            ub_[j] = p_.col_ub[j] / cscale_[j];
            c_[j] = p_.cost[j] * cscale_[j];
        }
        for (int i = 0; i < m_; ++i) {
            // logical carries the row activity in the scaled row
            lb_[n_ + i] = p_.row_lb[i] * rscale_[i];
            ub_[n_ + i] = p_.row_ub[i] * rscale_[i];
        }
        for (int j = 0; j < N_; ++j) {
            if (lb_[j] == -kInf) { lb_[j] = -kArtificialBox; art_lb_[j] = 1; }
            if (ub_[j] == kInf) { ub_[j] = kArtificialBox; art_ub_[j] = 1; }
            if (lb_[j] > ub_[j] + 1e-12)
                throw NumericsError("lp: empty column/row bound interval");
        }
    }

    void reset_to_logical_basis() {
        stat_.assign(N_, kAtLower);
        for (int j = 0; j < n_; ++j)
            stat_[j] = preferred_bound(j);
        basic_.resize(m_);
        bpos_.assign(N_, -1);
        for (int i = 0; i < m_; ++i) {
            basic_[i] = n_ + i;
            stat_[n_ + i] = kBasic;
            bpos_[n_ + i] = i;
        }
        if (!refactorize())
            throw NumericsError("lp: logical basis failed to factorize");
    }

    int8_t preferred_bound(int j) const {
        if (c_[j] > 0.0) return kAtLower;
        if (c_[j] < 0.0) return kAtUpper;
        // break ties away from artificial bounds
        if (art_lb_[j] && !art_ub_[j]) return kAtUpper;
        return kAtLower;
    }

    void load_basis(const Basis* warm) {
        if (warm && static_cast<int>(warm->stat.size()) == N_) {
            int nb = 0;
            for (int8_t s : warm->stat) nb += (s == kBasic);
            if (nb == m_) {
                stat_.assign(warm->stat.begin(), warm->stat.end());
                basic_.clear();
                bpos_.assign(N_, -1);
                for (int j = 0; j < N_; ++j)
                    if (stat_[j] == kBasic) {
                        bpos_[j] = static_cast<int>(basic_.size());
                        basic_.push_back(j);
                    } else if (stat_[j] == kAtUpper && art_ub_[j] && !art_lb_[j]) {
                        stat_[j] = kAtLower;
                    } else if (stat_[j] == kAtLower && art_lb_[j] && !art_ub_[j]) {
                        stat_[j] = kAtUpper;
                    }
                return;
            }
        }
        reset_to_logical_basis();
    }

    // --- factorization ---------------------------------------------------

    void basis_column(int j, std::vector<Eigen::Triplet<double>>& trip, int slot) const {
        if (j < n_) {
            for (int k = p_.a_start[j]; k < p_.a_start[j + 1]; ++k)
                trip.emplace_back(p_.a_row[k], slot, aval_[k]);
        } else {
            trip.emplace_back(j - n_, slot, -1.0);
        }
    }

    bool refactorize() {
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(static_cast<size_t>(m_) * 4);
        for (int slot = 0; slot < m_; ++slot)
            basis_column(basic_[slot], trip, slot);
        Eigen::SparseMatrix<double> B(m_, m_);
        B.setFromTriplets(trip.begin(), trip.end());
        B.makeCompressed();
        lu_.compute(B);
        etas_.clear();
        eta_nnz_ = 0;
        if (lu_.info() != Eigen::Success) return false;
        lu_nnz_ = lu_.nnzL() + lu_.nnzU();
        return true;
    }

    void ftran(std::vector<double>& v) const {
        Eigen::Map<Eigen::VectorXd> mv(const_cast<double*>(v.data()), m_);
        Eigen::VectorXd sol = lu_.solve(mv);
        std::copy(sol.data(), sol.data() + m_, v.begin());
        for (const Eta& e : etas_) {
            double t = v[e.row] / e.pivot;
            if (t != 0.0) {
                for (auto [i, a] : e.nz) v[i] -= a * t;
            }
            v[e.row] = t;
        }
    }

    void btran(std::vector<double>& v) const {
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            double acc = v[it->row];
            for (auto [i, a] : it->nz) acc -= a * v[i];
            v[it->row] = acc / it->pivot;
        }
        Eigen::Map<Eigen::VectorXd> mv(v.data(), m_);
        Eigen::VectorXd sol = lu_.transpose().solve(mv);
        std::copy(sol.data(), sol.data() + m_, v.begin());
    }

    // --- state recomputation ----------------------------------------------

    void compute_primal() {
        x_.resize(N_);
        for (int j = 0; j < N_; ++j)
            if (stat_[j] != kBasic) x_[j] = (stat_[j] == kAtUpper) ? ub_[j] : lb_[j];
        std::vector<double> rhs(m_, 0.0);
        for (int j = 0; j < N_; ++j) {
            if (stat_[j] == kBasic || x_[j] == 0.0) continue;
            add_column(j, -x_[j], rhs);
        }
        ftran(rhs);
        for (int i = 0; i < m_; ++i) x_[basic_[i]] = rhs[i];
    }

    void add_column(int j, double mult, std::vector<double>& out) const {
        if (j < n_) {
            for (int k = p_.a_start[j]; k < p_.a_start[j + 1]; ++k)
                out[p_.a_row[k]] += mult * aval_[k];
        } else {
            out[j - n_] -= mult;
        }
    }

    double col_dot(int j, const std::vector<double>& v) const {
        if (j < n_) {
            double s = 0.0;
            for (int k = p_.a_start[j]; k < p_.a_start[j + 1]; ++k)
                s += aval_[k] * v[p_.a_row[k]];
            return s;
        }
        return -v[j - n_];
    }

    void compute_duals() {
        std::vector<double> y(m_);
        for (int i = 0; i < m_; ++i) y[i] = c_[basic_[i]];
        btran(y);
        d_.resize(N_);
        for (int j = 0; j < N_; ++j)
            d_[j] = (stat_[j] == kBasic) ? 0.0 : c_[j] - col_dot(j, y);
        rho_ = std::move(y); // scratch reuse; resized on demand
    }

    // Nonbasic columns whose reduced cost disagrees with their bound get
    // flipped to the other (finite, thanks to the box) bound.
    void restore_dual_feasibility() {
        bool moved = false;
        for (int j = 0; j < N_; ++j) {
            if (stat_[j] == kBasic || lb_[j] == ub_[j]) continue;
            if (stat_[j] == kAtLower && d_[j] < -opt_.dual_tol) { stat_[j] = kAtUpper; moved = true; }
            else if (stat_[j] == kAtUpper && d_[j] > opt_.dual_tol) { stat_[j] = kAtLower; moved = true; }
        }
        if (moved) compute_primal();
    }

    double objective_now() const {
        double s = 0.0;
        for (int j = 0; j < n_; ++j) s += c_[j] * x_[j];
        return s + p_.offset;
    }

    // --- main loop ---------------------------------------------------------

    Status iterate() {
        int refact_guard = 0;
        while (true) {
            // leaving variable: largest bound violation among basics
            int r = -1;
            double worst = opt_.feas_tol;
            bool to_lower = false;
            for (int i = 0; i < m_; ++i) {
                int j = basic_[i];
                double v_lo = lb_[j] - x_[j];
                double v_hi = x_[j] - ub_[j];
                double v = std::max(v_lo, v_hi);
                if (bland_) {
                    if (v > opt_.feas_tol && (r == -1 || j < basic_[r])) { r = i; to_lower = v_hi > v_lo; }
                } else if (v > worst) {
                    worst = v;
                    r = i;
                    to_lower = v_hi > v_lo; // above upper bound: must decrease
                }
            }
            if (r == -1) return Status::optimal;
            if (iters_ >= max_iters_) return Status::iter_limit;

            if (opt_.objective_cutoff < kInf && objective_now() > opt_.objective_cutoff + 1e-9)
                return Status::cutoff;

            // BTRAN: rho = B^-T e_r, then price the pivot row
            rho_.assign(m_, 0.0);
            rho_[r] = 1.0;
            btran(rho_);

            alpha_.assign(N_, 0.0);
            for (int j = 0; j < n_; ++j) {
                if (stat_[j] == kBasic) continue;
                for (int k = p_.a_start[j]; k < p_.a_start[j + 1]; ++k)
                    alpha_[j] += aval_[k] * rho_[p_.a_row[k]];
            }
            for (int i = 0; i < m_; ++i)
                if (stat_[n_ + i] != kBasic) alpha_[n_ + i] = -rho_[i];

            // ratio test; atilde flips sign so eligibility/ratios read uniformly
            double dir = to_lower ? 1.0 : -1.0; // sign applied to alpha
            int q = -1;
            double best_ratio = kInf, best_mag = 0.0;
            for (int j = 0; j < N_; ++j) {
                if (stat_[j] == kBasic || lb_[j] == ub_[j]) continue;
                double at = dir * alpha_[j];
                bool ok = (stat_[j] == kAtLower) ? (at > opt_.pivot_tol) : (at < -opt_.pivot_tol);
                if (!ok) continue;
                double ratio = d_[j] / at;
                if (ratio < -1e-9) ratio = 0.0; // clamp tiny dual infeasibilities
                if (bland_) {
                    if (ratio < best_ratio - 1e-12 || (ratio < best_ratio + 1e-12 && (q == -1 || j < q))) {
                        best_ratio = std::min(ratio, best_ratio);
                        q = j;
                    }
                } else if (ratio < best_ratio - 1e-9 ||
                           (ratio < best_ratio + 1e-9 && std::abs(at) > best_mag)) {
                    best_ratio = std::min(ratio, best_ratio);
                    best_mag = std::abs(at);
                    q = j;
                }
            }
            if (q == -1) {
                // no column can repair the violated row
                if (!etas_.empty()) { // make sure it is not factorization drift
                    if (!refactorize()) return Status::numerics;
                    compute_primal();
                    compute_duals();
                    if (++refact_guard > 3) return Status::infeasible;
                    continue;
                }
                return Status::infeasible;
            }
            refact_guard = 0;

            // FTRAN the entering column
            int jl = basic_[r];
            work_.assign(m_, 0.0);
            add_column(q, 1.0, work_);
            ftran(work_);
            double piv = work_[r];
            if (std::abs(piv) < opt_.pivot_tol ||
                std::abs(piv - alpha_[q]) > 1e-6 * std::max(1.0, std::abs(alpha_[q]))) {
                if (!etas_.empty()) {
                    if (!refactorize()) return Status::numerics;
                    compute_primal();
                    compute_duals();
                    continue;
                }
                if (std::abs(piv) < 1e-11) return Status::numerics;
            }

            double target = to_lower ? ub_[jl] : lb_[jl];
            double theta_p = (x_[jl] - target) / piv;
            double theta_d = d_[q] / alpha_[q];

            // primal update
            for (int i = 0; i < m_; ++i)
                if (work_[i] != 0.0) x_[basic_[i]] -= theta_p * work_[i];
            x_[q] += theta_p;
            x_[jl] = target;

            // dual update
            for (int j = 0; j < N_; ++j)
                if (stat_[j] != kBasic && alpha_[j] != 0.0) d_[j] -= theta_d * alpha_[j];
            d_[q] = 0.0;
            d_[jl] = -theta_d;

            // swap
            stat_[jl] = to_lower ? kAtUpper : kAtLower;
            bpos_[jl] = -1;
            stat_[q] = kBasic;
            bpos_[q] = r;
            basic_[r] = q;

            // eta for the new basis
            Eta e;
            e.row = r;
            e.pivot = piv;
            for (int i = 0; i < m_; ++i)
                if (i != r && work_[i] != 0.0) e.nz.emplace_back(i, work_[i]);
            eta_nnz_ += static_cast<long>(e.nz.size()) + 1;
            etas_.push_back(std::move(e));

            ++iters_;
            if (static_cast<long>(etas_.size()) >= 64 ||
                eta_nnz_ > std::max(2 * lu_nnz_, 4L * m_)) {
                if (!refactorize()) return Status::numerics;
                compute_primal();
                compute_duals();
            }

            // stall detection drives the Bland fallback
            double obj = objective_now();
            if (obj > last_obj_ + 1e-10 * std::max(1.0, std::abs(obj))) {
                stalled_ = 0;
                bland_ = false;
            } else if (++stalled_ > 800) {
                bland_ = true;
            }
            last_obj_ = std::max(last_obj_, obj);
        }
    }

    // --- unboundedness via box inflation ------------------------------------

    bool pinned_to_box() const {
        for (int j = 0; j < N_; ++j) {
            if (lb_[j] == ub_[j]) continue;
            if (art_lb_[j] && x_[j] < -kArtificialBox * 0.999) return true;
            if (art_ub_[j] && x_[j] > kArtificialBox * 0.999) return true;
        }
        return false;
    }

    Status detect_unbounded(Outcome& out) {
        if (box_inflated_ || !pinned_to_box()) return Status::optimal;
        double obj_before = objective_now();
        std::vector<double> x_before = x_;
        box_inflated_ = true;
        for (int j = 0; j < N_; ++j) {
            if (art_lb_[j]) lb_[j] *= 1024.0;
            if (art_ub_[j]) ub_[j] *= 1024.0;
        }
        compute_primal();
        Status s = iterate();
        if (s != Status::optimal) return s;
        double obj_after = objective_now();
        if (obj_after < obj_before - 1e-5 * std::max(1.0, std::abs(obj_before))) {
            out.ray.assign(n_, 0.0);
            double norm = 0.0;
            for (int j = 0; j < n_; ++j) {
                out.ray[j] = (x_[j] - x_before[j]) * cscale_[j];
                norm = std::max(norm, std::abs(out.ray[j]));
            }
            if (norm > 0.0)
                for (double& v : out.ray) v /= norm;
            return Status::unbounded;
        }
        return Status::optimal;
    }

    // --- wrap-up -------------------------------------------------------------

    void finalize(Outcome& out) {
        out.iterations = iters_;
        if (out.status != Status::optimal && out.status != Status::cutoff &&
            out.status != Status::iter_limit) {
            if (out.status == Status::infeasible || out.status == Status::unbounded) {
                out.basis.stat.assign(stat_.begin(), stat_.end());
            }
            return;
        }
        refine();
        out.objective = objective_scaled_back();
        out.col_value.resize(n_);
        for (int j = 0; j < n_; ++j) out.col_value[j] = x_[j] * cscale_[j];
        out.row_value.resize(m_);
        for (int i = 0; i < m_; ++i) out.row_value[i] = x_[n_ + i] / rscale_[i];
        // duals: recompute y once more after refinement
        std::vector<double> y(m_);
        for (int i = 0; i < m_; ++i) y[i] = c_[basic_[i]];
        btran(y);
        out.row_dual.resize(m_);
        for (int i = 0; i < m_; ++i) out.row_dual[i] = y[i] * rscale_[i];
        out.col_dual.resize(n_);
        for (int j = 0; j < n_; ++j)
            out.col_dual[j] = (stat_[j] == kBasic) ? 0.0 : (c_[j] - col_dot(j, y)) / cscale_[j];
        out.basis.stat.assign(stat_.begin(), stat_.end());
    }

    double objective_scaled_back() const {
        double s = 0.0;
        for (int j = 0; j < n_; ++j) s += p_.cost[j] * x_[j] * cscale_[j];
        return s + p_.offset;
    }

    // One round of iterative refinement on the basic components: recompute the
    // residual of B x_B = rhs in the original scaled system and correct.
    void refine() {
        if (!refactorize()) return;
        std::vector<double> rhs(m_, 0.0);
        for (int j = 0; j < N_; ++j) {
            if (stat_[j] == kBasic) continue;
            double v = (stat_[j] == kAtUpper) ? ub_[j] : lb_[j];
            x_[j] = v;
            if (v != 0.0) add_column(j, -v, rhs);
        }
        // residual = rhs - B x_B
        std::vector<double> res = rhs;
        std::vector<double> bx(m_, 0.0);
        for (int i = 0; i < m_; ++i) add_column(basic_[i], x_[basic_[i]], bx);
        for (int i = 0; i < m_; ++i) res[i] -= bx[i];
        double rnorm = 0.0;
        for (double v : res) rnorm = std::max(rnorm, std::abs(v));
        if (rnorm == 0.0) return;
        ftran(res);
        for (int i = 0; i < m_; ++i) x_[basic_[i]] += res[i];
    }
};

void validate_problem(const Problem& p) {
    if (p.ncol < 0 || p.nrow < 0) throw AssemblyError("lp: negative dimensions");
    if (static_cast<int>(p.a_start.size()) != p.ncol + 1)
        throw AssemblyError("lp: a_start size mismatch");
    if (p.a_row.size() != p.a_val.size()) throw AssemblyError("lp: a_row/a_val size mismatch");
    size_t need = p.a_start.empty() ? 0 : static_cast<size_t>(p.a_start.back());
    if (p.a_row.size() != need) throw AssemblyError("lp: nnz disagrees with a_start");
    auto chk = [&](const std::vector<double>& v, size_t len, const char* what) {
        if (v.size() != len) throw AssemblyError(std::string("lp: bad length for ") + what);
    };
    chk(p.cost, p.ncol, "cost");
    chk(p.col_lb, p.ncol, "col_lb");
    chk(p.col_ub, p.ncol, "col_ub");
    chk(p.row_lb, p.nrow, "row_lb");
    chk(p.row_ub, p.nrow, "row_ub");
    for (int j = 0; j < p.ncol; ++j) {
        for (int k = p.a_start[j]; k < p.a_start[j + 1]; ++k) {
            if (p.a_row[k] < 0 || p.a_row[k] >= p.nrow)
                throw AssemblyError("lp: row index out of range");
            if (!std::isfinite(p.a_val[k]))
                throw AssemblyError("lp: nonfinite matrix entry");
        }
        if (p.col_lb[j] > p.col_ub[j])
            throw AssemblyError("lp: column lower bound above upper bound");
    }
    for (int i = 0; i < p.nrow; ++i)
        if (p.row_lb[i] > p.row_ub[i])
            throw AssemblyError("lp: row lower bound above upper bound");
}

} // namespace

Outcome solve(const Problem& p, const Basis* warm, const Options& opt) {
    validate_problem(p);
    if (p.nrow == 0) {
        // pure box problem: each column sits on its cost-preferred bound
        Outcome out;
        out.status = Status::optimal;
        out.col_value.resize(p.ncol);
        out.col_dual = p.cost;
        out.basis.stat.assign(p.ncol, kAtLower);
        double obj = p.offset;
        for (int j = 0; j < p.ncol; ++j) {
            double v;
            if (p.cost[j] > 0.0) v = p.col_lb[j];
            else if (p.cost[j] < 0.0) v = p.col_ub[j];
            else v = (p.col_lb[j] > -kInf) ? p.col_lb[j] : std::min(0.0, p.col_ub[j]);
            if (v == kInf || v == -kInf) {
                out.status = Status::unbounded;
                out.ray.assign(p.ncol, 0.0);
                out.ray[j] = (v == kInf) ? 1.0 : -1.0;
                return out;
            }
            out.col_value[j] = v;
            if (p.cost[j] < 0.0) out.basis.stat[j] = kAtUpper;
            obj += p.cost[j] * v;
        }
        out.objective = obj;
        return out;
    }
    DualSimplex solver(p, opt);
    return solver.run(warm);
}

} // namespace meso::lp
