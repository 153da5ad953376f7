#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hbd/errors.hpp"

namespace hbd {

using Vec = std::vector<double>;
using Mat = std::vector<std::vector<double>>; // row-major, rows of equal length
using Bits = std::vector<std::uint8_t>;       // one 0/1 entry per binary variable

// One problem of the fixed shape
//
//   max  c.x + h.y
//   s.t. A x + G y <= b        (m1 coupling rows)
//        B x       <= bprime   (m2 master-only rows)
//        x in {0,1}^n, y >= 0 (p continuous vars)
//
// The objective sense is always maximize.
struct MilpInstance {
    int n = 0;
    int p = 0;
    int m1 = 0;
    int m2 = 0;
    Vec c;      // length n
    Vec h;      // length p
    Vec b;      // length m1
    Vec bprime; // length m2
    Mat A;      // m1 x n
    Mat G;      // m1 x p
    Mat B;      // m2 x n

    // Throws DimensionError when any size disagrees with n/p/m1/m2.
    void validate() const;

    // True when every coefficient is an integer (within 1e-9).
    bool is_integer_data() const;
};

double dot(const Vec& a, const Vec& b);
Vec mat_vec(const Mat& m, const Vec& v);
Vec mat_transpose_vec(const Mat& m, const Vec& v);
Vec bits_to_vec(const Bits& x);

enum class CutKind { Optimality, Feasibility };

// Canonical cut forms over master variables x and the value estimate phi:
//   Optimality:  constant + coeffs.x >= phi
//   Feasibility: constant + coeffs.x <= 0
// with constant = b.mu and coeffs_j = -(A^T mu)_j for the generating dual mu.
struct BendersCut {
    CutKind kind = CutKind::Optimality;
    Vec coeffs;            // length n
    double constant = 0.0;
    Vec mu;                // length m1; Feasibility cuts have mu in [-1, 0]
    int iteration_created = 0;

    double lhs_at(const Bits& x) const; // constant + coeffs.x
    bool same_content(const BendersCut& other, double tol = 1e-9) const;
};

enum class Conversion { Slack, Exponential };
enum class PenaltyMode { Constructive, Manual };

struct ManualPenalties {
    double pi_obj_x = 1.0;
    double pi_obj_phi = 1.0;
    double pi_obj_cut = 1.0;
    double pi_cons_mp = 1.0;
};

struct MulticutConfig {
    int k = 5; // candidate decodes drawn from the sample set
    int m = 3; // cuts kept per iteration
};

struct BendersConfig {
    Conversion conversion = Conversion::Slack;
    PenaltyMode penalty_mode = PenaltyMode::Constructive;
    ManualPenalties manual; // used only in Manual mode
    std::optional<MulticutConfig> multicut;
    double epsilon = 0.25;        // phi grid resolution target, in (0, 1]
    double convergence_tol = 1e-6;
    int max_iterations = 30;
    std::string backend = "exact"; // "exact" or "sa"
    std::uint64_t rng_seed = 0;
    int sa_sweeps = 2000;
    int sa_restarts = 8;

    void validate() const;
};

enum class SolveStatus { Optimal, Feasible, Infeasible, IterationLimit };

std::string to_string(SolveStatus s);

struct PhaseTimes {
    double bounds_ms = 0.0;
    double encode_ms = 0.0;
    double qubo_ms = 0.0;
    double subproblem_ms = 0.0;
    double total_ms = 0.0;
};

struct SolveReport {
    SolveStatus status = SolveStatus::Infeasible;
    Bits x_best;  // empty when no solution was found
    Vec y_best;
    double objective = 0.0; // meaningful only when x_best is nonempty
    int iterations = 0;
    std::vector<BendersCut> cuts;
    std::vector<int> qubit_counts; // one entry per master solve
    Vec master_bounds;             // decoded c.x + phi per master solve with a usable decode
    std::pair<double, double> phi_bounds{0.0, 0.0};
    PhaseTimes wall_time_ms;
    bool phi_grid_miss = false;
    int master_infeasible_iterations = 0;

    bool has_solution() const { return !x_best.empty(); }
};

// Deterministic dataset-style instance generator. Draw order with a
// mt19937_64 stream seeded by `seed`: n, p, m1, A row-major, G row-major,
// b, c, h, bprime. B is a single all-ones row (m2 = 1). Instances whose
// value-estimate upper-bound LP is unbounded are rejected and redrawn from
// the continuing stream; more than 1000 rejections is an error.
MilpInstance generate_generic_instance(std::uint64_t seed);

// JSON round trip. Numeric entries are stored as shortest round-trip decimal
// strings so that save/load is bit-exact; load also accepts plain numbers.
std::string instance_to_json(const MilpInstance& inst);
MilpInstance instance_from_json(const std::string& text);
void save_instance(const MilpInstance& inst, const std::string& path);
MilpInstance load_instance(const std::string& path);

std::string report_to_json(const SolveReport& report);
void save_report(const SolveReport& report, const std::string& path);

} // namespace hbd
