#pragma once

#include <initializer_list>
#include <utility>
#include <vector>

#include "hbd/lp_simplex.hpp"
#include "hbd/model.hpp"

namespace hbdtest {

// max 2x + 3y  s.t.  x + y <= 4,  x <= 1.  Optimum 12 at x=0, y=4.
// Every subproblem is feasible, so only optimality cuts appear.
inline hbd::MilpInstance tiny_optimality_instance() {
    hbd::MilpInstance inst;
    inst.n = 1;
    inst.p = 1;
    inst.m1 = 1;
    inst.m2 = 1;
    inst.c = {2};
    inst.h = {3};
    inst.A = {{1}};
    inst.G = {{1}};
    inst.b = {4};
    inst.B = {{1}};
    inst.bprime = {1};
    return inst;
}

// max x + y  s.t.  -x + y <= 1,  y >= 2,  x <= 1.  The subproblem at x=0 is
// infeasible (y <= 1 vs y >= 2), so a feasibility cut is required.
// Optimum 3 at x=1, y=2.
inline hbd::MilpInstance tiny_feasibility_instance() {
    hbd::MilpInstance inst;
    inst.n = 1;
    inst.p = 1;
    inst.m1 = 2;
    inst.m2 = 1;
    inst.c = {1};
    inst.h = {1};
    inst.A = {{-1}, {0}};
    inst.G = {{1}, {-1}};
    inst.b = {1, -2};
    inst.B = {{1}};
    inst.bprime = {1};
    return inst;
}

// Every binary x either violates B x <= b' or has an infeasible subproblem,
// yet the continuous relaxation is feasible (x = 0.45 works), so the solver
// has to discover infeasibility through the cut loop.
inline hbd::MilpInstance loop_infeasible_instance() {
    hbd::MilpInstance inst;
    inst.n = 1;
    inst.p = 1;
    inst.m1 = 2;
    inst.m2 = 1;
    inst.c = {1};
    inst.h = {1};
    inst.A = {{-2}, {0}};
    inst.G = {{1}, {-1}};
    inst.b = {1, -2};
    inst.B = {{1}};
    inst.bprime = {0.9};
    return inst;
}

// The continuous relaxation itself is empty: y <= 1 and y >= 2 for every x.
inline hbd::MilpInstance relaxation_infeasible_instance() {
    hbd::MilpInstance inst;
    inst.n = 1;
    inst.p = 1;
    inst.m1 = 2;
    inst.m2 = 1;
    inst.c = {1};
    inst.h = {1};
    inst.A = {{0}, {0}};
    inst.G = {{1}, {-1}};
    inst.b = {1, -2};
    inst.B = {{1}};
    inst.bprime = {1};
    return inst;
}

// Subproblem optimum 1/3 never lands on the phi grid for any epsilon of the
// form 2^-D, so the run must flag the miss instead of claiming convergence.
inline hbd::MilpInstance off_grid_instance() {
    hbd::MilpInstance inst;
    inst.n = 1;
    inst.p = 1;
    inst.m1 = 1;
    inst.m2 = 1;
    inst.c = {0};
    inst.h = {1};
    inst.A = {{0}};
    inst.G = {{3}};
    inst.b = {1};
    inst.B = {{1}};
    inst.bprime = {1};
    return inst;
}

inline hbd::Bits make_bits(std::initializer_list<int> vals) {
    hbd::Bits b;
    for (int v : vals) b.push_back(static_cast<std::uint8_t>(v));
    return b;
}

// Hand-built LP status library shared by the unit tests and the acceptance
// gate. Covers bounded/unbounded/infeasible across bound shapes, equality
// rows, redundant rows, and normalized negative right-hand sides.
inline std::vector<std::pair<hbd::LinearProgram, hbd::LpStatus>> lp_status_cases() {
    using hbd::kInf;
    using hbd::LinearProgram;
    using hbd::LpStatus;
    using hbd::Relation;
    using hbd::Sense;
    std::vector<std::pair<LinearProgram, LpStatus>> cases;
    auto add = [&](LinearProgram lp, LpStatus st) { cases.emplace_back(std::move(lp), st); };

    {
        auto lp = LinearProgram::make(1, Sense::Max);
        lp.objective = {3};
        lp.add_row({1}, Relation::Le, 4);
        add(lp, LpStatus::Optimal); // 1
    }
    {
        auto lp = LinearProgram::make(1, Sense::Max);
        lp.objective = {1};
        lp.add_row({-1}, Relation::Le, 0);
        add(lp, LpStatus::Unbounded); // 2
    }
    {
        auto lp = LinearProgram::make(1, Sense::Max);
        lp.objective = {1};
        lp.add_row({1}, Relation::Le, 1);
        lp.add_row({1}, Relation::Ge, 2);
        add(lp, LpStatus::Infeasible); // 3
    }
    {
        auto lp = LinearProgram::make(2, Sense::Min);
        lp.objective = {1, 1};
        lp.add_row({1, 1}, Relation::Ge, 2);
        add(lp, LpStatus::Optimal); // 4
    }
    {
        auto lp = LinearProgram::make(2, Sense::Max);
        lp.objective = {1, 1};
        lp.add_row({1, 1}, Relation::Le, 1);
        add(lp, LpStatus::Optimal); // 5
    }
    {
        auto lp = LinearProgram::make(1, Sense::Max);
        lp.objective = {1};
        lp.lower = {-kInf};
        lp.add_row({1}, Relation::Le, 5);
        add(lp, LpStatus::Optimal); // 6
    }
    {
        auto lp = LinearProgram::make(1, Sense::Min);
        lp.objective = {1};
        lp.lower = {-kInf};
        lp.add_row({1}, Relation::Ge, -3);
        add(lp, LpStatus::Optimal); // 7
    }
    {
        auto lp = LinearProgram::make(1, Sense::Min);
        lp.objective = {1};
        lp.lower = {-kInf};
        add(lp, LpStatus::Unbounded); // 8
    }
    {
        auto lp = LinearProgram::make(1, Sense::Max);
        lp.objective = {1};
        lp.add_row({-1}, Relation::Le, -1);
        lp.add_row({1}, Relation::Le, 0.5);
        add(lp, LpStatus::Infeasible); // 9
    }
    {
        auto lp = LinearProgram::make(2, Sense::Max);
        lp.objective = {1, 0};
        lp.add_row({1, 1}, Relation::Eq, 2);
        add(lp, LpStatus::Optimal); // 10
    }
    {
        auto lp = LinearProgram::make(2, Sense::Max);
        lp.objective = {1, 0};
        lp.add_row({1, 1}, Relation::Eq, -1);
        add(lp, LpStatus::Infeasible); // 11
    }
    {
        auto lp = LinearProgram::make(2, Sense::Max);
        lp.objective = {1, 0};
        lp.add_row({1, -1}, Relation::Eq, 0);
        add(lp, LpStatus::Unbounded); // 12
    }
    {
        auto lp = LinearProgram::make(2, Sense::Max);
        lp.objective = {1, 2};
        lp.add_row({1, 0}, Relation::Le, 1);
        lp.add_row({0, 1}, Relation::Le, 1);
        lp.add_row({1, 1}, Relation::Le, 2);
        add(lp, LpStatus::Optimal); // 13
    }
    {
        auto lp = LinearProgram::make(1, Sense::Max);
        lp.objective = {1};
        lp.add_row({1}, Relation::Eq, 1);
        lp.add_row({1}, Relation::Eq, 1);
        add(lp, LpStatus::Optimal); // 14, redundant equality
    }
    {
        auto lp = LinearProgram::make(1, Sense::Max);
        lp.objective = {1};
        lp.lower = {-kInf};
        lp.upper = {3};
        add(lp, LpStatus::Optimal); // 15
    }
    {
        auto lp = LinearProgram::make(1, Sense::Max);
        lp.objective = {1};
        lp.lower = {-2};
        lp.upper = {-1};
        add(lp, LpStatus::Optimal); // 16
    }
    {
        auto lp = LinearProgram::make(1, Sense::Max);
        lp.objective = {1};
        lp.lower = {2};
        lp.upper = {1};
        add(lp, LpStatus::Infeasible); // 17
    }
    {
        auto lp = LinearProgram::make(2, Sense::Min);
        lp.objective = {2, 3};
        lp.add_row({1, 1}, Relation::Ge, 4);
        lp.add_row({1, 0}, Relation::Le, 2);
        add(lp, LpStatus::Optimal); // 18
    }
    {
        auto lp = LinearProgram::make(2, Sense::Max);
        lp.objective = {1, 1};
        lp.add_row({1, -1}, Relation::Ge, 0);
        add(lp, LpStatus::Unbounded); // 19
    }
    {
        auto lp = LinearProgram::make(1, Sense::Max);
        lp.objective = {0};
        lp.add_row({1}, Relation::Le, 1);
        add(lp, LpStatus::Optimal); // 20
    }
    return cases;
}

} // namespace hbdtest
