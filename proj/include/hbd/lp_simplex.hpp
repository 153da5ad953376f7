#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "hbd/model.hpp"

namespace hbd {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { Max, Min };
enum class Relation { Le, Eq, Ge };

struct LpRow {
    Vec coeffs;
    Relation rel = Relation::Le;
    double rhs = 0.0;
};

// Dense LP with per-variable bounds (use +-kInf for unbounded sides).
struct LinearProgram {
    int num_vars = 0;
    Sense sense = Sense::Max;
    Vec objective;
    std::vector<LpRow> rows;
    Vec lower; // length num_vars
    Vec upper; // length num_vars

    static LinearProgram make(int num_vars, Sense sense);
    void add_row(Vec coeffs, Relation rel, double rhs);
    void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

// Row duals follow the convention: for a Max problem the dual of a <= row is
// >= 0 and of a >= row is <= 0 (signs flip for Min); equality rows are free.
// Duals come from the final simplex basis, so they are a vertex of the dual
// polyhedron.
struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Vec primal;
    Vec dual;
    double objective = 0.0;
};

// Two-phase dense-tableau simplex with Bland's rule. Pivot tolerance 1e-9.
// Throws SimplexError when pivoting exceeds 50 * (num_vars + rows) steps.
LpSolution solve_lp(const LinearProgram& lp);

// Dual objective value implied by (lp, sol): rhs.dual plus the reduced-cost
// contribution of each variable at its active bound. Used by strong-duality
// checks; throws InternalError if a nonzero reduced cost sits on an infinite
// bound.
double dual_objective(const LinearProgram& lp, const LpSolution& sol);

// LPs over the relaxation x in [0,1]^n, y >= 0, Ax + Gy <= b, Bx <= bprime.
enum class RelaxGoal {
    PhiLower,      // min h.y   (value-estimate lower bound)
    PhiUpper,      // max h.y   (value-estimate upper bound)
    CutSlackBound, // max over the relaxation of the cut's slack expression
};

struct RelaxObjective {
    RelaxGoal goal = RelaxGoal::PhiUpper;
    const BendersCut* cut = nullptr;                    // CutSlackBound only
    std::optional<std::pair<double, double>> phi_range; // Optimality cuts add
                                                        // a bounded phi column
};

LinearProgram build_relaxation_lp(const MilpInstance& inst, const RelaxObjective& obj);
LpSolution solve_binary_relaxation(const MilpInstance& inst, const RelaxObjective& obj);

} // namespace hbd
