#include "hbd/cuts.hpp"

#include <algorithm>
#include <cmath>

namespace hbd {

namespace {

Vec sp_rhs(const MilpInstance& inst, const Bits& x_hat) {
    if (static_cast<int>(x_hat.size()) != inst.n)
        throw DimensionError("subproblem: x_hat length mismatch");
    const Vec ax = mat_vec(inst.A, bits_to_vec(x_hat));
    Vec rhs(inst.m1);
    for (int i = 0; i < inst.m1; ++i) rhs[i] = inst.b[i] - ax[i];
    return rhs;
}

} // namespace

SpResult solve_subproblem(const MilpInstance& inst, const Bits& x_hat) {
    inst.validate();
    const Vec rhs = sp_rhs(inst, x_hat);
    LinearProgram lp = LinearProgram::make(inst.p, Sense::Max);
    lp.objective = inst.h;
    for (int i = 0; i < inst.m1; ++i) {
        Vec row(inst.p);
        for (int j = 0; j < inst.p; ++j) row[j] = inst.G[i][j];
        lp.add_row(std::move(row), Relation::Le, rhs[i]);
    }
    const LpSolution sol = solve_lp(lp);
    if (sol.status == LpStatus::Unbounded)
        throw UnboundedError("subproblem unbounded: no finite value estimate exists");
    SpResult out;
    if (sol.status == LpStatus::Infeasible) return out;
    out.feasible = true;
    out.objective = sol.objective;
    out.y = sol.primal;
    out.mu = sol.dual;
    return out;
}

BendersCut make_optimality_cut(const Vec& mu_o, const MilpInstance& inst, int iteration) {
    if (static_cast<int>(mu_o.size()) != inst.m1)
        throw DimensionError("optimality cut: dual length mismatch");
    BendersCut cut;
    cut.kind = CutKind::Optimality;
    cut.constant = dot(inst.b, mu_o);
    const Vec at_mu = mat_transpose_vec(inst.A, mu_o);
    cut.coeffs.resize(inst.n);
    for (int j = 0; j < inst.n; ++j) cut.coeffs[j] = -at_mu[j];
    cut.mu = mu_o;
    cut.iteration_created = iteration;
    return cut;
}

double solve_sp2(const MilpInstance& inst, const Bits& x_hat) {
    const Vec rhs = sp_rhs(inst, x_hat);
    // min e.s  s.t.  G y - s <= b - A x_hat,  y >= 0, s >= 0
    LinearProgram lp = LinearProgram::make(inst.p + inst.m1, Sense::Min);
    for (int i = 0; i < inst.m1; ++i) lp.objective[inst.p + i] = 1.0;
    for (int i = 0; i < inst.m1; ++i) {
        Vec row(inst.p + inst.m1, 0.0);
        for (int j = 0; j < inst.p; ++j) row[j] = inst.G[i][j];
        row[inst.p + i] = -1.0;
        lp.add_row(std::move(row), Relation::Le, rhs[i]);
    }
    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal)
        throw InternalError("sp2: the slack-augmented problem must be solvable");
    return sol.objective;
}

DSp2Result solve_dsp2(const MilpInstance& inst, const Bits& x_hat) {
    const Vec rhs = sp_rhs(inst, x_hat);
    // max (b - A x_hat).mu  s.t.  G^T mu <= 0,  -1 <= mu <= 0
    LinearProgram lp = LinearProgram::make(inst.m1, Sense::Max);
    lp.objective = rhs;
    for (int i = 0; i < inst.m1; ++i) {
        lp.lower[i] = -1.0;
        lp.upper[i] = 0.0;
    }
    for (int j = 0; j < inst.p; ++j) {
        Vec row(inst.m1);
        for (int i = 0; i < inst.m1; ++i) row[i] = inst.G[i][j];
        lp.add_row(std::move(row), Relation::Le, 0.0);
    }
    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal)
        throw InternalError("dsp2: box-bounded LP with mu=0 feasible must be solvable");
    return DSp2Result{sol.primal, sol.objective};
}

BendersCut make_feasibility_cut(const MilpInstance& inst, const Bits& x_hat, int iteration) {
    inst.validate();
    const DSp2Result d = solve_dsp2(inst, x_hat);
    if (d.objective <= 1e-9)
        throw InternalError("feasibility cut: dual measure is not positive, the subproblem "
                            "was not infeasible within tolerance");
    BendersCut cut;
    cut.kind = CutKind::Feasibility;
    cut.constant = dot(inst.b, d.mu);
    const Vec at_mu = mat_transpose_vec(inst.A, d.mu);
    cut.coeffs.resize(inst.n);
    for (int j = 0; j < inst.n; ++j) cut.coeffs[j] = -at_mu[j];
    cut.mu = d.mu;
    cut.iteration_created = iteration;
    return cut;
}

DensityMatrix build_density_matrix(const std::vector<BendersCut>& candidates, double threshold) {
    DensityMatrix d;
    d.rows = static_cast<int>(candidates.size());
    d.cols = candidates.empty() ? 0 : static_cast<int>(candidates.front().coeffs.size());
    d.entries.assign(d.rows, std::vector<std::uint8_t>(d.cols, 0));
    for (int r = 0; r < d.rows; ++r) {
        if (static_cast<int>(candidates[r].coeffs.size()) != d.cols)
            throw DimensionError("density matrix: candidate coefficient lengths differ");
        for (int j = 0; j < d.cols; ++j)
            d.entries[r][j] = std::fabs(candidates[r].coeffs[j]) > threshold ? 1 : 0;
    }
    return d;
}

namespace {

int coverage_of(const DensityMatrix& d, const std::vector<int>& rows) {
    int cov = 0;
    for (int j = 0; j < d.cols; ++j) {
        for (int r : rows) {
            if (d.entries[r][j]) {
                ++cov;
                break;
            }
        }
    }
    return cov;
}

// Lexicographic combinations of `size` rows out of d.rows; keeps the first
// strictly-better subset, so smaller sizes (tried first by the caller) and
// lexicographically earlier index sets win ties.
void enumerate_size(const DensityMatrix& d, int size, int force_include, std::vector<int>& comb,
                    int start, std::vector<int>& best, int& best_cov) {
    if (static_cast<int>(comb.size()) == size) {
        if (force_include >= 0 &&
            std::find(comb.begin(), comb.end(), force_include) == comb.end())
            return;
        const int cov = coverage_of(d, comb);
        if (cov > best_cov) {
            best_cov = cov;
            best = comb;
        }
        return;
    }
    for (int r = start; r < d.rows; ++r) {
        comb.push_back(r);
        enumerate_size(d, size, force_include, comb, r + 1, best, best_cov);
        comb.pop_back();
    }
}

} // namespace

std::vector<int> max_coverage_exact(const DensityMatrix& d, int M, int force_include) {
    if (d.rows == 0 || M < 1) return {};
    M = std::min(M, d.rows);
    std::vector<int> best;
    int best_cov = -1;
    for (int size = 1; size <= M; ++size) {
        std::vector<int> comb;
        enumerate_size(d, size, force_include, comb, 0, best, best_cov);
    }
    return best;
}

std::vector<int> max_coverage_greedy(const DensityMatrix& d, int M, int force_include) {
    if (d.rows == 0 || M < 1) return {};
    M = std::min(M, d.rows);
    std::vector<int> selected;
    std::vector<std::uint8_t> covered(d.cols, 0);
    std::vector<std::uint8_t> used(d.rows, 0);
    auto take = [&](int r) {
        selected.push_back(r);
        used[r] = 1;
        for (int j = 0; j < d.cols; ++j)
            if (d.entries[r][j]) covered[j] = 1;
    };
    if (force_include >= 0) take(force_include);
    while (static_cast<int>(selected.size()) < M) {
        int best_row = -1, best_gain = -1;
        for (int r = 0; r < d.rows; ++r) {
            if (used[r]) continue;
            int gain = 0;
            for (int j = 0; j < d.cols; ++j)
                if (d.entries[r][j] && !covered[j]) ++gain;
            if (gain > best_gain) {
                best_gain = gain;
                best_row = r;
            }
        }
        if (best_row < 0) break;
        if (best_gain == 0 && !selected.empty()) break; // a useless row never beats a smaller set
        take(best_row);
    }
    return selected;
}

std::vector<int> select_multicuts(const std::vector<BendersCut>& candidates, int M,
                                  int force_include) {
    if (candidates.empty() || M < 1) return {};
    const DensityMatrix d = build_density_matrix(candidates);
    const int k = d.rows;
    const int take = std::min(M, k);
    double comb = 1.0;
    for (int i = 1; i <= take; ++i) comb = comb * (k - i + 1) / i;
    if (comb <= 1e5) return max_coverage_exact(d, M, force_include);
    return max_coverage_greedy(d, M, force_include);
}

} // namespace hbd
