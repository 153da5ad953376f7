#include "hbd/benders.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <tuple>

#include "hbd/cuts.hpp"
#include "hbd/qubo_solve.hpp"

namespace hbd {

bool check_master_feasible(const Bits& x, const MilpInstance& inst) {
    if (static_cast<int>(x.size()) != inst.n)
        throw DimensionError("check_master_feasible: x length mismatch");
    const Vec bx = mat_vec(inst.B, bits_to_vec(x));
    for (int k = 0; k < inst.m2; ++k)
        if (bx[k] > inst.bprime[k] + 1e-9) return false;
    return true;
}

namespace {

using Clock = std::chrono::steady_clock;

// Sample depth requested from the backend. Deep enough that small exact
// enumerations keep their whole spectrum, which the decode screen needs
// when the penalty landscape ranks constraint-satisfying states poorly.
constexpr int kSampleRetention = 4096;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Sound certificate: true iff no master-feasible x admits a feasible
// subproblem. Enumeration-based, so it is only attempted for n <= 20.
bool certify_infeasible(const MilpInstance& inst) {
    if (inst.n > 20) return false;
    const std::uint32_t total = 1u << inst.n;
    for (std::uint32_t v = 0; v < total; ++v) {
        Bits x(inst.n);
        for (int j = 0; j < inst.n; ++j) x[j] = (v >> j) & 1u;
        if (!check_master_feasible(x, inst)) continue;
        if (solve_subproblem(inst, x).feasible) return false;
    }
    return true;
}

} // namespace

SolveReport hbd_solve(const MilpInstance& inst, const BendersConfig& config) {
    inst.validate();
    config.validate();
    const auto t_total = Clock::now();
    SolveReport rep;

    auto t0 = Clock::now();
    double lb = 0.0, ub = 0.0;
    try {
        std::tie(lb, ub) = tighten_phi_bounds(inst);
    } catch (const InstanceInfeasibleError&) {
        rep.status = SolveStatus::Infeasible;
        rep.wall_time_ms.bounds_ms = ms_since(t0);
        rep.wall_time_ms.total_ms = ms_since(t_total);
        return rep;
    }
    rep.phi_bounds = {lb, ub};
    const PhiEncoding phi = build_phi_encoding(lb, ub, config.epsilon);
    const PenaltySet pen = config.penalty_mode == PenaltyMode::Constructive
                               ? solver_penalties(inst, ub, phi.D)
                               : compute_penalties(inst, ub, PenaltyMode::Manual, config.manual);
    rep.wall_time_ms.bounds_ms = ms_since(t0);

    std::vector<BendersCut> cuts;
    std::optional<MasterState::Incumbent> incumbent;

    auto finish = [&](SolveStatus status) -> SolveReport {
        // A stalled run that never found any feasible point is usually an
        // infeasible instance; prove it before claiming so.
        if (status == SolveStatus::IterationLimit && !incumbent && certify_infeasible(inst))
            status = SolveStatus::Infeasible;
        rep.status = status;
        rep.cuts = cuts;
        if (status != SolveStatus::Infeasible && incumbent) {
            rep.x_best = incumbent->x;
            rep.y_best = incumbent->y;
            rep.objective = incumbent->objective;
        }
        if (status == SolveStatus::IterationLimit) rep.phi_grid_miss = true;
        rep.wall_time_ms.total_ms = ms_since(t_total);
        return rep;
    };

    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        rep.iterations = iter;

        t0 = Clock::now();
        QuboModel q;
        try {
            q = encode_master(inst, cuts, phi, pen, config.conversion);
        } catch (const MasterInfeasibleError&) {
            rep.wall_time_ms.encode_ms += ms_since(t0);
            return finish(certify_infeasible(inst) ? SolveStatus::Infeasible
                                                   : SolveStatus::IterationLimit);
        }
        rep.wall_time_ms.encode_ms += ms_since(t0);
        rep.qubit_counts.push_back(q.num_bits);

        t0 = Clock::now();
        const std::uint64_t iter_seed =
            config.rng_seed + 1000003ull * static_cast<std::uint64_t>(iter - 1);
        const SampleSet samples = solve_qubo(q, config.backend, iter_seed, config.sa_sweeps,
                                             config.sa_restarts, kSampleRetention);
        rep.wall_time_ms.qubo_ms += ms_since(t0);

        // The penalties make master violations expensive, not impossible, so
        // decodes are screened against the actual master constraints: the
        // B x <= b' rows plus every accumulated cut. The best screened decode
        // becomes x_hat; multicut mode keeps up to k distinct screened x.
        // When no retained sample passes the cut screen the best row-feasible
        // decode is used instead, which keeps the loop moving toward the
        // stall or certification exits.
        auto satisfies_cuts = [&](const Bits& x, double phi_val) {
            for (const BendersCut& c : cuts) {
                const double lhs = c.lhs_at(x);
                const bool ok = c.kind == CutKind::Feasibility ? lhs <= 1e-7
                                                               : phi_val <= lhs + 1e-7;
                if (!ok) return false;
            }
            return true;
        };
        std::vector<std::pair<Bits, double>> chosen;
        std::vector<std::pair<Bits, double>> row_only;
        const int want = config.multicut ? config.multicut->k : 1;
        std::set<Bits> seen_x;
        std::set<Bits> seen_row_x;
        bool top_infeasible = false;
        for (size_t si = 0; si < samples.samples.size(); ++si) {
            const DecodedSample dec = decode(q, samples.samples[si].bits);
            const bool rows_ok = check_master_feasible(dec.x, inst);
            const bool ok = rows_ok && satisfies_cuts(dec.x, dec.phi);
            if (si == 0 && !ok) top_infeasible = true;
            if (rows_ok && !ok && static_cast<int>(row_only.size()) < want &&
                seen_row_x.insert(dec.x).second)
                row_only.emplace_back(dec.x, dec.phi);
            if (!ok) continue;
            if (!seen_x.insert(dec.x).second) continue;
            chosen.emplace_back(dec.x, dec.phi);
            if (static_cast<int>(chosen.size()) >= want) break;
        }
        if (top_infeasible) ++rep.master_infeasible_iterations;
        if (chosen.empty()) chosen = std::move(row_only);
        if (chosen.empty()) {
            if (certify_infeasible(inst)) return finish(SolveStatus::Infeasible);
            continue;
        }

        const Bits& x_hat = chosen.front().first;
        const double phi_hat = chosen.front().second;
        rep.master_bounds.push_back(dot(inst.c, bits_to_vec(x_hat)) + phi_hat);

        t0 = Clock::now();
        const SpResult sp = solve_subproblem(inst, x_hat);
        rep.wall_time_ms.subproblem_ms += ms_since(t0);

        auto note_feasible_point = [&](const Bits& x, const SpResult& r) {
            const double obj = dot(inst.c, bits_to_vec(x)) + r.objective;
            if (!incumbent || obj > incumbent->objective + 1e-12)
                incumbent = MasterState::Incumbent{x, r.y, obj};
            return obj;
        };

        if (sp.feasible) {
            if (!phi.representable(sp.objective, 1e-7)) rep.phi_grid_miss = true;
            const double obj = note_feasible_point(x_hat, sp);
            if (sp.objective >= phi_hat - config.convergence_tol) {
                rep.cuts = cuts;
                if (incumbent->objective > obj + 1e-9) {
                    rep.status = SolveStatus::Feasible;
                    rep.x_best = incumbent->x;
                    rep.y_best = incumbent->y;
                    rep.objective = incumbent->objective;
                } else {
                    rep.status = SolveStatus::Optimal;
                    rep.x_best = x_hat;
                    rep.y_best = sp.y;
                    rep.objective = obj;
                }
                rep.wall_time_ms.total_ms = ms_since(t_total);
                return rep;
            }
        }

        t0 = Clock::now();
        std::vector<BendersCut> batch;
        if (config.multicut) {
            std::vector<BendersCut> candidates;
            for (size_t i = 0; i < chosen.size(); ++i) {
                const Bits& x = chosen[i].first;
                const SpResult r = i == 0 ? sp : solve_subproblem(inst, x);
                if (r.feasible) {
                    note_feasible_point(x, r);
                    candidates.push_back(make_optimality_cut(r.mu, inst, iter));
                } else {
                    candidates.push_back(make_feasibility_cut(inst, x, iter));
                }
            }
            // The primary decode's cut is pinned so every iteration makes
            // progress at its own x_hat.
            for (int idx : select_multicuts(candidates, config.multicut->m, 0))
                batch.push_back(candidates[idx]);
        } else {
            batch.push_back(sp.feasible ? make_optimality_cut(sp.mu, inst, iter)
                                        : make_feasibility_cut(inst, x_hat, iter));
        }
        rep.wall_time_ms.subproblem_ms += ms_since(t0);

        bool added = false;
        for (const BendersCut& cand : batch) {
            const bool dup = std::any_of(cuts.begin(), cuts.end(), [&](const BendersCut& c) {
                return c.same_content(cand);
            });
            if (!dup) {
                cuts.push_back(cand);
                added = true;
            }
        }
        if (!added) return finish(SolveStatus::IterationLimit); // stalled
    }
    return finish(SolveStatus::IterationLimit);
}

} // namespace hbd
