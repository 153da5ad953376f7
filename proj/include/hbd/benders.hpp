#pragma once

#include <optional>
#include <vector>

#include "hbd/model.hpp"
#include "hbd/qubo_encode.hpp"

namespace hbd {

// Loop state of one decomposition run.
struct MasterState {
    MilpInstance inst;
    std::vector<BendersCut> cuts;
    PhiEncoding phi;
    PenaltySet penalties;

    struct Incumbent {
        Bits x;
        Vec y;
        double objective = 0.0;
    };
    std::optional<Incumbent> incumbent; // always OP-feasible when present
    int iteration = 0;
};

// B.x <= bprime + 1e-9 componentwise.
bool check_master_feasible(const Bits& x, const MilpInstance& inst);

// The decomposition driver: encode master -> minimize QUBO -> decode the
// best master-feasible sample -> solve the subproblem -> converge or add
// cut(s) -> repeat. See SolveReport for the outcome fields.
SolveReport hbd_solve(const MilpInstance& inst, const BendersConfig& config);

} // namespace hbd
