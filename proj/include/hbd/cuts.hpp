#pragma once

#include <cstdint>
#include <vector>

#include "hbd/lp_simplex.hpp"
#include "hbd/model.hpp"

namespace hbd {

// Outcome of the continuous subproblem max h.y s.t. Gy <= b - A x_hat, y >= 0.
struct SpResult {
    bool feasible = false;
    double objective = 0.0; // h.y at the optimum
    Vec y;                  // length p
    Vec mu;                 // dual vertex, length m1
};

// Throws UnboundedError when the subproblem is unbounded (no finite phi
// exists for any x, so the whole problem is unbounded).
SpResult solve_subproblem(const MilpInstance& inst, const Bits& x_hat);

// Optimality cut from a feasible subproblem's dual vertex:
// constant + coeffs.x >= phi with constant = b.mu, coeffs = -(A^T mu).
BendersCut make_optimality_cut(const Vec& mu_o, const MilpInstance& inst, int iteration = 0);

// Infeasibility measure: min e.s s.t. Gy - s <= b - A x_hat, y >= 0, s >= 0.
double solve_sp2(const MilpInstance& inst, const Bits& x_hat);

struct DSp2Result {
    Vec mu;             // length m1, entries in [-1, 0]
    double objective;   // equals solve_sp2 by strong duality
};

// max (b - A x_hat).mu s.t. G^T mu <= 0, -1 <= mu <= 0.
DSp2Result solve_dsp2(const MilpInstance& inst, const Bits& x_hat);

// Cut excluding an x_hat whose subproblem is infeasible:
// constant + coeffs.x <= 0, violated at x_hat by the infeasibility measure.
// Throws InternalError when the D-SP2 optimum is not positive (the
// subproblem was not actually infeasible within tolerance).
BendersCut make_feasibility_cut(const MilpInstance& inst, const Bits& x_hat, int iteration = 0);

// Row r marks which x_j candidate r's cut touches (|coefficient| > threshold).
struct DensityMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::vector<std::uint8_t>> entries;
};

DensityMatrix build_density_matrix(const std::vector<BendersCut>& candidates,
                                   double threshold = 1e-9);

// Indices of <= M rows maximizing the number of covered columns. Exact by
// subset enumeration when C(rows, M) <= 1e5, greedy otherwise. Ties prefer
// fewer rows, then lexicographically smaller index sets. `force_include`
// (when >= 0) pins that row into the selection.
std::vector<int> max_coverage_exact(const DensityMatrix& d, int M, int force_include = -1);
std::vector<int> max_coverage_greedy(const DensityMatrix& d, int M, int force_include = -1);

// Builds the density matrix over the candidates and applies the coverage
// rule above. Returns indices into `candidates`.
std::vector<int> select_multicuts(const std::vector<BendersCut>& candidates, int M,
                                  int force_include = -1);

} // namespace hbd
