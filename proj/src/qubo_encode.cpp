#include "hbd/qubo_encode.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>

#include <json.hpp>

#include "hbd/lp_simplex.hpp"

namespace hbd {

namespace {

// LP optima that sit within 1e-9 of an integer are snapped before flooring,
// so simplex noise cannot flip a bit count.
double snap(double v) {
    const double r = std::round(v);
    return std::fabs(v - r) <= 1e-9 ? r : v;
}

int bits_for(double bound) { // floor(log2(bound)) + 1 for bound >= 1, else 0
    const double s = snap(bound);
    if (s < 1.0) return 0;
    return std::bit_width(static_cast<std::uint64_t>(std::floor(s)));
}

bool all_integer(const Vec& v) {
    for (double x : v)
        if (std::fabs(x - std::round(x)) > 1e-9) return false;
    return true;
}

} // namespace

double PhiEncoding::min_value() const {
    double s = 0.0;
    for (double w : bit_weights)
        if (w < 0.0) s += w;
    return s;
}

double PhiEncoding::max_value() const {
    double s = 0.0;
    for (double w : bit_weights)
        if (w > 0.0) s += w;
    return s;
}

double PhiEncoding::value_of(const Bits& phi_bits) const {
    if (static_cast<int>(phi_bits.size()) != num_bits())
        throw DimensionError("phi encoding: bit vector length mismatch");
    double v = 0.0;
    for (int i = 0; i < num_bits(); ++i)
        if (phi_bits[i]) v += bit_weights[i];
    return v;
}

bool PhiEncoding::representable(double v, double tol) const {
    if (v < min_value() - tol || v > max_value() + tol) return false;
    const double step = grid_step();
    const double nearest = std::round(v / step) * step;
    return std::fabs(v - nearest) <= tol;
}

PhiEncoding build_phi_encoding(double lb, double ub, double epsilon) {
    if (!(epsilon > 0.0) || epsilon > 1.0)
        throw InternalError("build_phi_encoding: epsilon out of (0, 1]");
    if (lb > ub) throw InternalError("build_phi_encoding: lb > ub");

    PhiEncoding enc;
    enc.P = ub >= 1.0 ? bits_for(ub) : 0;
    enc.D = bits_for(1.0 / epsilon);
    enc.N = lb <= -1.0 ? bits_for(-lb) : 0;
    enc.fallback = lb < 0.0 && enc.N == 0;

    for (int i = 0; i < enc.P; ++i) enc.bit_weights.push_back(std::ldexp(1.0, i));
    for (int j = 1; j <= enc.D; ++j) enc.bit_weights.push_back(std::ldexp(1.0, -j));
    for (int k = 1; k <= enc.N; ++k) enc.bit_weights.push_back(-std::ldexp(1.0, k - 1));
    if (enc.fallback) enc.bit_weights.push_back(-(1.0 - std::ldexp(1.0, -enc.D)));
    return enc;
}

std::pair<double, double> tighten_phi_bounds(const MilpInstance& inst) {
    RelaxObjective lo;
    lo.goal = RelaxGoal::PhiLower;
    const LpSolution sol_lo = solve_binary_relaxation(inst, lo);
    if (sol_lo.status == LpStatus::Infeasible)
        throw InstanceInfeasibleError("phi bounds: continuous relaxation is empty");
    if (sol_lo.status == LpStatus::Unbounded)
        throw EncodingError("phi bounds: lower-bound LP is unbounded, phi cannot be encoded");

    RelaxObjective hi;
    hi.goal = RelaxGoal::PhiUpper;
    const LpSolution sol_hi = solve_binary_relaxation(inst, hi);
    if (sol_hi.status == LpStatus::Infeasible)
        throw InstanceInfeasibleError("phi bounds: continuous relaxation is empty");
    if (sol_hi.status == LpStatus::Unbounded)
        throw EncodingError("phi bounds: upper-bound LP is unbounded, phi cannot be encoded");

    return {sol_lo.objective, sol_hi.objective};
}

PenaltySet compute_penalties(const MilpInstance& inst, double phi_max, PenaltyMode mode,
                             const ManualPenalties& manual) {
    if (mode == PenaltyMode::Manual) {
        PenaltySet pen;
        pen.ub = 0.0;
        pen.pi_obj_x = manual.pi_obj_x;
        pen.pi_obj_phi = manual.pi_obj_phi;
        pen.pi_obj_cut = manual.pi_obj_cut;
        pen.pi_cons_mp = manual.pi_cons_mp;
        return pen;
    }
    double sum_c = 0.0;
    for (double v : inst.c) sum_c += v;
    PenaltySet pen;
    pen.ub = std::fabs(sum_c) + std::fabs(phi_max) + 1.0;
    pen.pi_obj_x = 3.0 * pen.ub;
    pen.pi_obj_phi = pen.ub;
    pen.pi_obj_cut = pen.ub;
    pen.pi_cons_mp = pen.ub * pen.ub;
    return pen;
}

PenaltySet solver_penalties(const MilpInstance& inst, double phi_max, int phi_frac_bits) {
    double sum_c = 0.0;
    for (double v : inst.c) sum_c += v;
    PenaltySet pen;
    pen.ub = std::fabs(sum_c) + std::fabs(phi_max) + 1.0;
    pen.pi_obj_x = pen.ub;
    pen.pi_obj_phi = pen.ub;
    const double guard = std::ldexp(1.0, phi_frac_bits + 1) * pen.ub;
    pen.pi_obj_cut = std::max(pen.ub * pen.ub, guard);
    pen.pi_cons_mp = pen.pi_obj_cut;
    return pen;
}

void QuboModel::add_term(int i, int j, double v) {
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= num_bits) throw InternalError("qubo: term index out of range");
    quadratic[{i, j}] += v;
}

double QuboModel::energy(const Bits& bits) const {
    if (static_cast<int>(bits.size()) != num_bits)
        throw DimensionError("qubo energy: bit vector length mismatch");
    double e = offset;
    for (const auto& [key, v] : quadratic)
        if (bits[key.first] && bits[key.second]) e += v;
    return e;
}

double QuboModel::max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& [key, v] : quadratic) m = std::max(m, std::fabs(v));
    return m;
}

namespace {

// One linear expression over already-placed bits: value = sum coeff_i b_i + constant.
struct LinearForm {
    std::vector<std::pair<int, double>> terms;
    double constant = 0.0;
};

// pi * (form)^2
void add_squared_penalty(QuboModel& q, const LinearForm& f, double pi) {
    q.offset += pi * f.constant * f.constant;
    for (size_t a = 0; a < f.terms.size(); ++a) {
        const auto [i, ai] = f.terms[a];
        q.add_term(i, i, pi * (ai * ai + 2.0 * f.constant * ai));
        for (size_t b = a + 1; b < f.terms.size(); ++b) {
            const auto [j, aj] = f.terms[b];
            q.add_term(i, j, 2.0 * pi * ai * aj);
        }
    }
}

// pi * (g + g^2/2), the slack-free relaxation of g <= 0
void add_exponential_penalty(QuboModel& q, const LinearForm& g, double pi) {
    q.offset += pi * g.constant;
    for (const auto& [i, ai] : g.terms) q.add_term(i, i, pi * ai);
    LinearForm half = g;
    add_squared_penalty(q, half, pi * 0.5);
}

// Appends slack bits covering [0, bound] on the given fractional grid and
// registers them against `constraint_id`. Returns the new bits as (index,
// weight) pairs. A negative bound means the constraint holds for no x.
std::vector<std::pair<int, double>> add_slack_bits(QuboModel& q, double bound, int frac_bits,
                                                   int constraint_id) {
    if (bound < -1e-9)
        throw MasterInfeasibleError("slack bound negative for constraint " +
                                    std::to_string(constraint_id));
    bound = std::max(0.0, snap(bound));
    std::vector<std::pair<int, double>> out;
    const int int_bits = bits_for(bound);
    if (bound == 0.0) return out;
    int pos = 0;
    for (int i = 0; i < int_bits; ++i, ++pos) {
        const int idx = q.num_bits++;
        const double w = std::ldexp(1.0, i);
        q.registry.push_back(BitTag{BitKind::Slack, pos, constraint_id, w});
        out.emplace_back(idx, w);
    }
    for (int j = 1; j <= frac_bits; ++j, ++pos) {
        const int idx = q.num_bits++;
        const double w = std::ldexp(1.0, -j);
        q.registry.push_back(BitTag{BitKind::Slack, pos, constraint_id, w});
        out.emplace_back(idx, w);
    }
    return out;
}

double cut_slack_bound(const MilpInstance& inst, const BendersCut& cut, const PhiEncoding& phi) {
    RelaxObjective obj;
    obj.goal = RelaxGoal::CutSlackBound;
    obj.cut = &cut;
    if (cut.kind == CutKind::Optimality)
        obj.phi_range = std::make_pair(phi.min_value(), phi.max_value());
    const LpSolution sol = solve_binary_relaxation(inst, obj);
    if (sol.status == LpStatus::Infeasible)
        throw MasterInfeasibleError("cut slack bound: relaxation is empty");
    if (sol.status == LpStatus::Unbounded)
        throw EncodingError("cut slack bound: LP unbounded");
    return sol.objective;
}

} // namespace

QuboModel encode_master(const MilpInstance& inst, const std::vector<BendersCut>& cuts,
                        const PhiEncoding& phi, const PenaltySet& pen, Conversion method) {
    inst.validate();
    QuboModel q;

    for (int j = 0; j < inst.n; ++j) {
        q.registry.push_back(BitTag{BitKind::X, j, -1, 1.0});
        ++q.num_bits;
    }
    std::vector<std::pair<int, double>> phi_terms;
    for (int k = 0; k < phi.num_bits(); ++k) {
        const int idx = q.num_bits++;
        q.registry.push_back(BitTag{BitKind::Phi, k, -1, phi.bit_weights[k]});
        phi_terms.emplace_back(idx, phi.bit_weights[k]);
    }

    for (int j = 0; j < inst.n; ++j)
        if (inst.c[j] != 0.0) q.add_term(j, j, -pen.pi_obj_x * inst.c[j]);
    for (const auto& [idx, w] : phi_terms) q.add_term(idx, idx, -pen.pi_obj_phi * w);

    const int master_frac = inst.is_integer_data() ? 0 : phi.D;

    // Master rows: B_k x <= b'_k, constraint ids 0..m2-1.
    for (int k = 0; k < inst.m2; ++k) {
        LinearForm f;
        for (int j = 0; j < inst.n; ++j)
            if (inst.B[k][j] != 0.0) f.terms.emplace_back(j, inst.B[k][j]);
        f.constant = -inst.bprime[k];
        if (method == Conversion::Exponential) {
            add_exponential_penalty(q, f, pen.pi_cons_mp);
            continue;
        }
        double min_lhs = 0.0;
        for (int j = 0; j < inst.n; ++j) min_lhs += std::min(inst.B[k][j], 0.0);
        const double bound = inst.bprime[k] - min_lhs;
        for (const auto& sb : add_slack_bits(q, bound, master_frac, k)) f.terms.push_back(sb);
        add_squared_penalty(q, f, pen.pi_cons_mp);
    }

    // Cuts, constraint ids m2 + i.
    for (size_t i = 0; i < cuts.size(); ++i) {
        const BendersCut& cut = cuts[i];
        const int cid = inst.m2 + static_cast<int>(i);
        if (method == Conversion::Exponential) {
            // Optimality: phi - constant - coeffs.x <= 0; Feasibility: constant + coeffs.x <= 0.
            LinearForm g;
            if (cut.kind == CutKind::Optimality) {
                for (const auto& [idx, w] : phi_terms) g.terms.emplace_back(idx, w);
                for (int j = 0; j < inst.n; ++j)
                    if (cut.coeffs[j] != 0.0) g.terms.emplace_back(j, -cut.coeffs[j]);
                g.constant = -cut.constant;
            } else {
                for (int j = 0; j < inst.n; ++j)
                    if (cut.coeffs[j] != 0.0) g.terms.emplace_back(j, cut.coeffs[j]);
                g.constant = cut.constant;
            }
            add_exponential_penalty(q, g, pen.pi_obj_cut);
            continue;
        }

        const double bound = cut_slack_bound(inst, cut, phi);
        const bool int_cut = all_integer(cut.coeffs) &&
                             std::fabs(cut.constant - std::round(cut.constant)) <= 1e-9;
        // An optimality cut's slack moves on phi's grid no matter how the
        // cut data looks; a feasibility cut's slack only needs the grid of
        // its own coefficients.
        const int frac = cut.kind == CutKind::Optimality ? phi.D : (int_cut ? 0 : phi.D);

        LinearForm f;
        if (cut.kind == CutKind::Optimality) {
            // constant + coeffs.x - phi - s = 0
            f.constant = cut.constant;
            for (int j = 0; j < inst.n; ++j)
                if (cut.coeffs[j] != 0.0) f.terms.emplace_back(j, cut.coeffs[j]);
            for (const auto& [idx, w] : phi_terms) f.terms.emplace_back(idx, -w);
            for (const auto& [idx, w] : add_slack_bits(q, bound, frac, cid))
                f.terms.emplace_back(idx, -w);
        } else {
            // constant + coeffs.x + s = 0
            f.constant = cut.constant;
            for (int j = 0; j < inst.n; ++j)
                if (cut.coeffs[j] != 0.0) f.terms.emplace_back(j, cut.coeffs[j]);
            for (const auto& sb : add_slack_bits(q, bound, frac, cid)) f.terms.push_back(sb);
        }
        add_squared_penalty(q, f, pen.pi_obj_cut);
    }

    return q;
}

DecodedSample decode(const QuboModel& model, const Bits& bits) {
    if (static_cast<int>(bits.size()) != model.num_bits)
        throw DimensionError("decode: bit vector length mismatch");
    DecodedSample out;
    int max_x = -1;
    for (const BitTag& tag : model.registry)
        if (tag.kind == BitKind::X) max_x = std::max(max_x, tag.index);
    out.x.assign(max_x + 1, 0);
    for (int i = 0; i < model.num_bits; ++i) {
        const BitTag& tag = model.registry[i];
        switch (tag.kind) {
        case BitKind::X:
            out.x[tag.index] = bits[i];
            break;
        case BitKind::Phi:
            if (bits[i]) out.phi += tag.weight;
            break;
        case BitKind::Slack:
            out.slacks.try_emplace(tag.constraint, 0.0);
            if (bits[i]) out.slacks[tag.constraint] += tag.weight;
            break;
        }
    }
    return out;
}

std::string qubo_to_json(const QuboModel& model) {
    using Json = nlohmann::ordered_json;
    auto num_str = [](double v) {
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, res.ptr);
    };
    Json j;
    j["num_bits"] = model.num_bits;
    j["offset"] = num_str(model.offset);
    Json terms = Json::array();
    for (const auto& [key, v] : model.quadratic)
        terms.push_back(Json::array({key.first, key.second, num_str(v)}));
    j["terms"] = terms;
    Json reg = Json::array();
    for (const BitTag& tag : model.registry) {
        Json t;
        switch (tag.kind) {
        case BitKind::X:
            t["kind"] = "x";
            t["index"] = tag.index;
            break;
        case BitKind::Phi:
            t["kind"] = "phi";
            t["index"] = tag.index;
            t["weight"] = num_str(tag.weight);
            break;
        case BitKind::Slack:
            t["kind"] = "slack";
            t["constraint"] = tag.constraint;
            t["index"] = tag.index;
            t["weight"] = num_str(tag.weight);
            break;
        }
        reg.push_back(t);
    }
    j["registry"] = reg;
    return j.dump(2) + "\n";
}

} // namespace hbd
