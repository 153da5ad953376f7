#include "hbd/lp_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace hbd {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-7;

// How an original variable maps onto nonnegative internal columns.
struct VarMap {
    enum Kind { Shift, Mirror, Split } kind = Shift;
    double offset = 0.0; // Shift: x = offset + x', Mirror: x = offset - x'
    int col = -1;
    int col_neg = -1; // Split: x = col - col_neg
};

// Dense two-phase tableau. Rows are kept with nonnegative right-hand sides;
// column order is [structural | per-row slack/surplus/artificial].
class Tableau {
public:
    Tableau(const LinearProgram& lp) : lp_(lp) {
        build_columns();
        build_rows();
        build_tableau();
    }

    LpSolution run() {
        LpSolution out;

        // Phase 1: minimize the artificial sum.
        if (num_artificial_ > 0) {
            set_costs(phase1_costs_);
            pivot_loop(/*phase1=*/true);
            if (objective_value() > kFeasTol) {
                out.status = LpStatus::Infeasible;
                return out;
            }
            drive_out_artificials();
        } else {
            // Still need basic feasibility; all-slack basis is feasible since
            // every rhs is nonnegative.
            if (!all_le_) throw InternalError("tableau: basis bookkeeping broken");
        }

        // Phase 2: original costs, artificial columns barred.
        set_costs(phase2_costs_);
        bool bounded = pivot_loop(/*phase1=*/false);
        if (!bounded) {
            out.status = LpStatus::Unbounded;
            return out;
        }

        out.status = LpStatus::Optimal;
        out.primal = recover_primal();
        out.dual = recover_duals();
        out.objective = dot(lp_.objective, out.primal);
        return out;
    }

private:
    const LinearProgram& lp_;

    std::vector<VarMap> vmap_;
    int num_struct_ = 0;

    struct RowInfo {
        Vec coeffs;   // over structural columns
        Relation rel = Relation::Le;
        double rhs = 0.0;
        double sigma = 1.0; // -1 when the row was negated to make rhs >= 0
        bool is_bound_row = false;
        int slack_col = -1;
        int surplus_col = -1;
        int art_col = -1;
    };
    std::vector<RowInfo> rows_;

    int total_cols_ = 0;
    int num_artificial_ = 0;
    bool all_le_ = true;

    std::vector<Vec> t_;   // rows_ x (total_cols_ + 1), last column = rhs
    Vec zrow_;             // reduced costs + (-objective) in the last slot
    Vec costs_;            // active cost vector over columns
    Vec phase1_costs_;
    Vec phase2_costs_;
    std::vector<int> basis_;
    std::vector<bool> barred_;
    long pivots_ = 0;
    long pivot_cap_ = 0;

    void build_columns() {
        vmap_.resize(lp_.num_vars);
        for (int j = 0; j < lp_.num_vars; ++j) {
            double lo = lp_.lower[j], hi = lp_.upper[j];
            VarMap& m = vmap_[j];
            if (lo > -kInf && hi < kInf) {
                m.kind = VarMap::Shift;
                m.offset = lo;
                m.col = num_struct_++;
            } else if (lo > -kInf) {
                m.kind = VarMap::Shift;
                m.offset = lo;
                m.col = num_struct_++;
            } else if (hi < kInf) {
                m.kind = VarMap::Mirror;
                m.offset = hi;
                m.col = num_struct_++;
            } else {
                m.kind = VarMap::Split;
                m.col = num_struct_++;
                m.col_neg = num_struct_++;
            }
        }
    }

    // Adds the coefficient of original variable j into `row`, with the rhs
    // correction implied by the variable transform.
    void place_coeff(Vec& row, double& rhs, int j, double a) const {
        const VarMap& m = vmap_[j];
        switch (m.kind) {
        case VarMap::Shift:
            row[m.col] += a;
            rhs -= a * m.offset;
            break;
        case VarMap::Mirror:
            row[m.col] -= a;
            rhs -= a * m.offset;
            break;
        case VarMap::Split:
            row[m.col] += a;
            row[m.col_neg] -= a;
            break;
        }
    }

    void build_rows() {
        for (const LpRow& r : lp_.rows) {
            RowInfo info;
            info.coeffs.assign(num_struct_, 0.0);
            info.rel = r.rel;
            info.rhs = r.rhs;
            for (int j = 0; j < lp_.num_vars; ++j)
                if (r.coeffs[j] != 0.0) place_coeff(info.coeffs, info.rhs, j, r.coeffs[j]);
            rows_.push_back(std::move(info));
        }
        // Finite two-sided bounds become explicit upper-bound rows on the
        // shifted column: x' <= hi - lo.
        for (int j = 0; j < lp_.num_vars; ++j) {
            double lo = lp_.lower[j], hi = lp_.upper[j];
            if (lo > -kInf && hi < kInf) {
                RowInfo info;
                info.coeffs.assign(num_struct_, 0.0);
                info.coeffs[vmap_[j].col] = 1.0;
                info.rel = Relation::Le;
                info.rhs = hi - lo;
                info.is_bound_row = true;
                rows_.push_back(std::move(info));
            }
        }
        for (RowInfo& info : rows_) {
            if (info.rhs < 0.0) {
                for (double& v : info.coeffs) v = -v;
                info.rhs = -info.rhs;
                info.sigma = -1.0;
                if (info.rel == Relation::Le) info.rel = Relation::Ge;
                else if (info.rel == Relation::Ge) info.rel = Relation::Le;
            }
        }
    }

    void build_tableau() {
        total_cols_ = num_struct_;
        for (RowInfo& info : rows_) {
            switch (info.rel) {
            case Relation::Le:
                info.slack_col = total_cols_++;
                break;
            case Relation::Ge:
                info.surplus_col = total_cols_++;
                info.art_col = total_cols_++;
                ++num_artificial_;
                all_le_ = false;
                break;
            case Relation::Eq:
                info.art_col = total_cols_++;
                ++num_artificial_;
                all_le_ = false;
                break;
            }
        }

        const int m = static_cast<int>(rows_.size());
        t_.assign(m, Vec(total_cols_ + 1, 0.0));
        basis_.assign(m, -1);
        barred_.assign(total_cols_, false);
        for (int i = 0; i < m; ++i) {
            const RowInfo& info = rows_[i];
            std::copy(info.coeffs.begin(), info.coeffs.end(), t_[i].begin());
            if (info.slack_col >= 0) t_[i][info.slack_col] = 1.0;
            if (info.surplus_col >= 0) t_[i][info.surplus_col] = -1.0;
            if (info.art_col >= 0) t_[i][info.art_col] = 1.0;
            t_[i][total_cols_] = info.rhs;
            basis_[i] = info.art_col >= 0 ? info.art_col : info.slack_col;
        }

        phase1_costs_.assign(total_cols_, 0.0);
        phase2_costs_.assign(total_cols_, 0.0);
        for (const RowInfo& info : rows_)
            if (info.art_col >= 0) phase1_costs_[info.art_col] = 1.0;

        // Internal sense is always minimize.
        const double flip = lp_.sense == Sense::Max ? -1.0 : 1.0;
        for (int j = 0; j < lp_.num_vars; ++j) {
            const VarMap& m2 = vmap_[j];
            const double cj = flip * lp_.objective[j];
            switch (m2.kind) {
            case VarMap::Shift: phase2_costs_[m2.col] += cj; break;
            case VarMap::Mirror: phase2_costs_[m2.col] -= cj; break;
            case VarMap::Split:
                phase2_costs_[m2.col] += cj;
                phase2_costs_[m2.col_neg] -= cj;
                break;
            }
        }

        pivot_cap_ = 50L * (total_cols_ + m);
    }

    // Rebuilds the reduced-cost row for the given costs under the current basis.
    void set_costs(const Vec& costs) {
        costs_ = costs;
        zrow_.assign(total_cols_ + 1, 0.0);
        for (int j = 0; j <= total_cols_; ++j) {
            double v = j < total_cols_ ? costs[j] : 0.0;
            for (size_t i = 0; i < rows_.size(); ++i) v -= costs[basis_[i]] * t_[i][j];
            zrow_[j] = v;
        }
    }

    double objective_value() const { return -zrow_[total_cols_]; }

    void pivot(int row, int col) {
        Vec& pr = t_[row];
        const double piv = pr[col];
        for (double& v : pr) v /= piv;
        pr[col] = 1.0;
        for (size_t i = 0; i < rows_.size(); ++i) {
            if (static_cast<int>(i) == row) continue;
            const double f = t_[i][col];
            if (f == 0.0) continue;
            Vec& ri = t_[i];
            for (int j = 0; j <= total_cols_; ++j) ri[j] -= f * pr[j];
            ri[col] = 0.0;
        }
        const double fz = zrow_[col];
        if (fz != 0.0) {
            for (int j = 0; j <= total_cols_; ++j) zrow_[j] -= fz * pr[j];
            zrow_[col] = 0.0;
        }
        basis_[row] = col;
        if (++pivots_ > pivot_cap_)
            throw SimplexError("simplex: pivot cap exceeded, aborting as numerically unstable");
    }

    // Returns false when the problem is unbounded (phase 2 only).
    bool pivot_loop(bool phase1) {
        const int m = static_cast<int>(rows_.size());
        for (;;) {
            int enter = -1;
            for (int j = 0; j < total_cols_; ++j) {
                if (barred_[j]) continue;
                if (zrow_[j] < -kPivotTol) { enter = j; break; } // Bland: smallest index
            }
            if (enter < 0) return true;

            int leave = -1;
            double best_ratio = 0.0;
            for (int i = 0; i < m; ++i) {
                const double a = t_[i][enter];
                if (a <= kPivotTol) continue;
                const double ratio = t_[i][total_cols_] / a;
                if (leave < 0 || ratio < best_ratio - kPivotTol ||
                    (ratio < best_ratio + kPivotTol && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave < 0) {
                if (phase1) throw InternalError("simplex: phase 1 unbounded");
                return false;
            }
            pivot(leave, enter);
        }
    }

    // After phase 1, swap basic artificials for structural columns where
    // possible; rows with no nonzero non-artificial entry are redundant and
    // keep their zero-valued artificial (no pivot can ever move them).
    void drive_out_artificials() {
        const int m = static_cast<int>(rows_.size());
        for (int i = 0; i < m; ++i) {
            const RowInfo& info = rows_[i];
            if (info.art_col < 0 || basis_[i] != info.art_col) continue;
            int col = -1;
            for (int j = 0; j < total_cols_; ++j) {
                if (rowinfo_is_artificial(j)) continue;
                if (std::fabs(t_[i][j]) > kPivotTol) { col = j; break; }
            }
            if (col >= 0) pivot(i, col);
        }
        for (int j = 0; j < total_cols_; ++j)
            if (rowinfo_is_artificial(j)) barred_[j] = true;
    }

    bool rowinfo_is_artificial(int col) const {
        for (const RowInfo& info : rows_)
            if (info.art_col == col) return true;
        return false;
    }

    Vec recover_primal() const {
        Vec internal(total_cols_, 0.0);
        for (size_t i = 0; i < rows_.size(); ++i) internal[basis_[i]] = t_[i][total_cols_];
        Vec x(lp_.num_vars, 0.0);
        for (int j = 0; j < lp_.num_vars; ++j) {
            const VarMap& m = vmap_[j];
            switch (m.kind) {
            case VarMap::Shift: x[j] = m.offset + internal[m.col]; break;
            case VarMap::Mirror: x[j] = m.offset - internal[m.col]; break;
            case VarMap::Split: x[j] = internal[m.col] - internal[m.col_neg]; break;
            }
        }
        return x;
    }

    // Row duals for the original rows, read from the reduced costs of each
    // row's unit column (slack, or artificial for >=/= rows).
    Vec recover_duals() const {
        const size_t m_orig = lp_.rows.size();
        Vec dual(m_orig, 0.0);
        const double flip = lp_.sense == Sense::Max ? -1.0 : 1.0;
        for (size_t i = 0; i < m_orig; ++i) {
            const RowInfo& info = rows_[i];
            double y_min = 0.0;
            if (info.art_col >= 0) y_min = -zrow_[info.art_col];
            else if (info.slack_col >= 0) y_min = -zrow_[info.slack_col];
            else y_min = zrow_[info.surplus_col];
            dual[i] = flip * info.sigma * y_min;
        }
        return dual;
    }
};

} // namespace

LinearProgram LinearProgram::make(int num_vars, Sense sense) {
    LinearProgram lp;
    lp.num_vars = num_vars;
    lp.sense = sense;
    lp.objective.assign(num_vars, 0.0);
    lp.lower.assign(num_vars, 0.0);
    lp.upper.assign(num_vars, kInf);
    return lp;
}

void LinearProgram::add_row(Vec coeffs, Relation rel, double rhs) {
    rows.push_back(LpRow{std::move(coeffs), rel, rhs});
}

void LinearProgram::validate() const {
    if (num_vars < 0) throw DimensionError("lp: negative num_vars");
    if (static_cast<int>(objective.size()) != num_vars)
        throw DimensionError("lp: objective length != num_vars");
    if (static_cast<int>(lower.size()) != num_vars || static_cast<int>(upper.size()) != num_vars)
        throw DimensionError("lp: bound vector length != num_vars");
    for (const LpRow& r : rows)
        if (static_cast<int>(r.coeffs.size()) != num_vars)
            throw DimensionError("lp: row length != num_vars");
}

LpSolution solve_lp(const LinearProgram& lp) {
    lp.validate();
    for (int j = 0; j < lp.num_vars; ++j)
        if (lp.lower[j] > lp.upper[j]) return LpSolution{LpStatus::Infeasible, {}, {}, 0.0};
    Tableau tab(lp);
    return tab.run();
}

double dual_objective(const LinearProgram& lp, const LpSolution& sol) {
    if (sol.status != LpStatus::Optimal) throw InternalError("dual_objective: LP not optimal");
    double val = 0.0;
    for (size_t i = 0; i < lp.rows.size(); ++i) val += sol.dual[i] * lp.rows[i].rhs;
    for (int j = 0; j < lp.num_vars; ++j) {
        double d = lp.objective[j];
        for (size_t i = 0; i < lp.rows.size(); ++i) d -= sol.dual[i] * lp.rows[i].coeffs[j];
        if (std::fabs(d) <= 1e-8) continue;
        // Max: positive reduced cost is supported at the upper bound.
        // Min: the sides swap.
        const bool at_upper = (lp.sense == Sense::Max) == (d > 0.0);
        const double bound = at_upper ? lp.upper[j] : lp.lower[j];
        if (!std::isfinite(bound))
            throw InternalError("dual_objective: nonzero reduced cost on an infinite bound");
        val += d * bound;
    }
    return val;
}

LinearProgram build_relaxation_lp(const MilpInstance& inst, const RelaxObjective& obj) {
    inst.validate();
    const bool with_phi = obj.goal == RelaxGoal::CutSlackBound && obj.cut != nullptr &&
                          obj.cut->kind == CutKind::Optimality;
    const int nv = inst.n + inst.p + (with_phi ? 1 : 0);
    LinearProgram lp = LinearProgram::make(nv, Sense::Max);

    for (int j = 0; j < inst.n; ++j) lp.upper[j] = 1.0; // x relaxed to [0,1]
    if (with_phi) {
        if (!obj.phi_range) throw InternalError("relaxation lp: missing phi range");
        lp.lower[nv - 1] = obj.phi_range->first;
        lp.upper[nv - 1] = obj.phi_range->second;
    }

    switch (obj.goal) {
    case RelaxGoal::PhiLower:
        lp.sense = Sense::Min;
        for (int j = 0; j < inst.p; ++j) lp.objective[inst.n + j] = inst.h[j];
        break;
    case RelaxGoal::PhiUpper:
        for (int j = 0; j < inst.p; ++j) lp.objective[inst.n + j] = inst.h[j];
        break;
    case RelaxGoal::CutSlackBound: {
        if (obj.cut == nullptr) throw InternalError("relaxation lp: missing cut");
        // Optimality: max  constant + coeffs.x - phi   (the slack of the cut)
        // Feasibility: max -(constant + coeffs.x)
        const double sign = obj.cut->kind == CutKind::Optimality ? 1.0 : -1.0;
        for (int j = 0; j < inst.n; ++j) lp.objective[j] = sign * obj.cut->coeffs[j];
        if (with_phi) lp.objective[nv - 1] = -1.0;
        break;
    }
    }

    for (int i = 0; i < inst.m1; ++i) {
        Vec row(nv, 0.0);
        for (int j = 0; j < inst.n; ++j) row[j] = inst.A[i][j];
        for (int j = 0; j < inst.p; ++j) row[inst.n + j] = inst.G[i][j];
        lp.add_row(std::move(row), Relation::Le, inst.b[i]);
    }
    for (int i = 0; i < inst.m2; ++i) {
        Vec row(nv, 0.0);
        for (int j = 0; j < inst.n; ++j) row[j] = inst.B[i][j];
        lp.add_row(std::move(row), Relation::Le, inst.bprime[i]);
    }
    return lp;
}

LpSolution solve_binary_relaxation(const MilpInstance& inst, const RelaxObjective& obj) {
    LinearProgram lp = build_relaxation_lp(inst, obj);
    LpSolution sol = solve_lp(lp);
    if (obj.goal == RelaxGoal::CutSlackBound && sol.status == LpStatus::Optimal) {
        // The LP objective omits the cut constant; fold it in here.
        const double sign = obj.cut->kind == CutKind::Optimality ? 1.0 : -1.0;
        sol.objective += sign * obj.cut->constant;
    }
    return sol;
}

} // namespace hbd
