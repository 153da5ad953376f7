#pragma once

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hbd/model.hpp"

namespace hbd {

// Fixed-point binary layout for the continuous master estimate phi:
// P integer bits with weights 2^i (i = 0..P-1), D fractional bits with
// weights 2^(-j) (j = 1..D), N negative bits with weights -2^(k-1)
// (k = 1..N). When -1 < lb < 0 there is no integer-negative bit to allocate;
// a single fallback bit of weight -(1 - 2^(-D)) keeps the range covered.
struct PhiEncoding {
    int P = 0;
    int D = 0;
    int N = 0;
    bool fallback = false;
    Vec bit_weights; // length P + D + N (+1 when fallback)

    int num_bits() const { return static_cast<int>(bit_weights.size()); }
    double grid_step() const { return std::ldexp(1.0, -D); }
    double min_value() const;
    double max_value() const;
    double value_of(const Bits& phi_bits) const; // phi_bits length num_bits()
    // True when v lies in [min_value, max_value] and on the 2^(-D) grid.
    bool representable(double v, double tol = 1e-9) const;
};

// P = floor(log2(floor(ub)))+1 when ub >= 1 else 0; D = floor(log2(1/eps))+1;
// N = floor(log2(|lb|))+1 when lb <= -1 else 0; fallback bit iff -1 < lb < 0.
PhiEncoding build_phi_encoding(double lb, double ub, double epsilon);

// Bounds for phi over the continuous relaxation (x in [0,1]^n, y >= 0):
// lb = min h.y, ub = max h.y subject to Ax + Gy <= b, Bx <= bprime.
// Throws EncodingError when either bound LP is unbounded and
// InstanceInfeasibleError when the relaxation is empty.
std::pair<double, double> tighten_phi_bounds(const MilpInstance& inst);

struct PenaltySet {
    double ub = 0.0; // scale constant the coefficients are built from
    double pi_obj_x = 1.0;
    double pi_obj_phi = 1.0;
    double pi_obj_cut = 1.0;
    double pi_cons_mp = 1.0;
};

// Constructive mode: ub = |sum c| + |phi_max| + 1 and the ledger
// (3*ub, ub, ub, ub^2). Manual mode passes the user's values through.
PenaltySet compute_penalties(const MilpInstance& inst, double phi_max, PenaltyMode mode,
                             const ManualPenalties& manual = ManualPenalties{});

// The weights the solve loop encodes with in Constructive mode: a single
// objective scale for x and phi (so penalty-free states rank by c.x + phi)
// and one constraint grade for every squared equality, large enough that a
// violation of one grid step 2^(-D) always costs more than the objective can
// recover: pi_cut = pi_mp = max(ub^2, 2^(D+1) * ub).
PenaltySet solver_penalties(const MilpInstance& inst, double phi_max, int phi_frac_bits);

enum class BitKind { X, Phi, Slack };

// Registry entry: every bit knows its role and decode weight, so decoding
// needs no context beyond the model. `constraint` identifies which equality
// a slack bit belongs to: master rows are 0..m2-1, cut i is m2+i.
struct BitTag {
    BitKind kind = BitKind::X;
    int index = 0;      // x index, phi bit position, or slack bit position
    int constraint = -1;
    double weight = 1.0;
};

// Minimization QUBO: energy(bits) = offset + sum_{i<=j} quadratic[(i,j)] * b_i * b_j.
struct QuboModel {
    int num_bits = 0;
    std::map<std::pair<int, int>, double> quadratic;
    double offset = 0.0;
    std::vector<BitTag> registry; // size num_bits

    void add_term(int i, int j, double v); // canonicalizes to i <= j, merges
    double energy(const Bits& bits) const; // fixed summation order (map order)
    double max_abs_coefficient() const;    // over quadratic entries, 0 if empty
};

// Builds the master-problem QUBO: objective terms -pi_obj_x*(c.x) -
// pi_obj_phi*phi, master rows and cuts as squared-equality penalties (Slack)
// or as pi*(g + g^2/2) expansions with g = lhs - rhs (Exponential).
// Slack bounds: master row k ranges over b'_k - min_x B_k x; cut slacks are
// bounded by an LP over the relaxation (optimality cuts include the encoded
// phi range). Throws MasterInfeasibleError when any bound is negative.
QuboModel encode_master(const MilpInstance& inst, const std::vector<BendersCut>& cuts,
                        const PhiEncoding& phi, const PenaltySet& pen, Conversion method);

struct DecodedSample {
    Bits x;
    double phi = 0.0;
    std::map<int, double> slacks; // constraint id -> decoded slack value
};

DecodedSample decode(const QuboModel& model, const Bits& bits);

// {"num_bits":., "offset":., "terms":[[i,j,value]...], "registry":[tags...]}
std::string qubo_to_json(const QuboModel& model);

} // namespace hbd
