#include "hbd/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hbd/benders.hpp"
#include "hbd/cuts.hpp"

namespace hbd {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string num_str(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc()) throw InternalError("num_str: to_chars failed");
    return std::string(buf, res.ptr);
}

// Type-7 quantile (linear interpolation between order statistics).
double quantile(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw InternalError("quantile: empty data");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const size_t lo = static_cast<size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (h - std::floor(h)) * (sorted[lo + 1] - sorted[lo]);
}

Quartiles quartiles_of(std::vector<double> data) {
    Quartiles q;
    if (data.empty()) return q;
    std::sort(data.begin(), data.end());
    q.defined = true;
    q.q1 = quantile(data, 0.25);
    q.median = quantile(data, 0.5);
    q.q3 = quantile(data, 0.75);
    return q;
}

} // namespace

OracleResult oracle_solve(const MilpInstance& inst) {
    inst.validate();
    if (inst.n > 20) throw SizeCapError("oracle: n > 20 is not enumerable");
    OracleResult out;
    const std::uint32_t total = 1u << inst.n;
    for (std::uint32_t v = 0; v < total; ++v) {
        Bits x(inst.n);
        for (int j = 0; j < inst.n; ++j) x[j] = (v >> j) & 1u;
        if (!check_master_feasible(x, inst)) continue;
        const SpResult sp = solve_subproblem(inst, x); // throws on unbounded
        if (!sp.feasible) continue;
        const double obj = dot(inst.c, bits_to_vec(x)) + sp.objective;
        if (!out.feasible || obj > out.optimum) {
            out.feasible = true;
            out.optimum = obj;
            out.x = x;
            out.y = sp.y;
        }
    }
    return out;
}

MetricsSummary compute_metrics(const std::vector<BenchmarkRecord>& records) {
    MetricsSummary s;
    s.num_records = static_cast<int>(records.size());
    std::vector<double> gaps;
    std::vector<double> iters;
    for (const BenchmarkRecord& r : records) {
        const bool feasible = r.status == "Optimal" || r.status == "Feasible";
        if (feasible) {
            ++s.num_feasible;
            if (std::isfinite(r.gap)) gaps.push_back(r.gap);
        }
        if (r.has_objective && std::isfinite(r.opt) &&
            std::fabs(r.objective - r.opt) <= 1e-6 * (1.0 + std::fabs(r.opt)))
            ++s.num_optimal;
        if (r.status != "Error") iters.push_back(static_cast<double>(r.iterations));
    }
    if (s.num_records > 0) {
        s.feasibility_rate = static_cast<double>(s.num_feasible) / s.num_records;
        s.optimality_rate = static_cast<double>(s.num_optimal) / s.num_records;
    }
    s.gap = quartiles_of(std::move(gaps));
    s.iterations = quartiles_of(std::move(iters));
    return s;
}

BendersConfig variant_config(const std::string& label, std::uint64_t seed) {
    BendersConfig cfg;
    cfg.rng_seed = seed;
    if (label == "SA") {
        cfg.backend = "sa";
        cfg.conversion = Conversion::Slack;
        cfg.penalty_mode = PenaltyMode::Manual;
        return cfg;
    }
    std::vector<std::string> parts;
    std::stringstream ss(label);
    std::string tok;
    while (std::getline(ss, tok, '_')) parts.push_back(tok);
    if (parts.size() < 3 || parts.size() > 4 || parts[0] != "HBD" ||
        (parts.size() == 4 && parts[3] != "MC"))
        throw SchemaError("variant: unknown label '" + label + "'");
    const bool mc = parts.size() == 4;
    if (parts[1] == "S") cfg.conversion = Conversion::Slack;
    else if (parts[1] == "E") cfg.conversion = Conversion::Exponential;
    else throw SchemaError("variant: conversion must be S or E in '" + label + "'");
    if (parts[2] == "C") cfg.penalty_mode = PenaltyMode::Constructive;
    else if (parts[2] == "M") cfg.penalty_mode = PenaltyMode::Manual;
    else throw SchemaError("variant: penalties must be C or M in '" + label + "'");
    cfg.backend = "exact";
    if (mc) cfg.multicut = MulticutConfig{5, 3};
    return cfg;
}

namespace {

BenchmarkRecord run_one(std::uint64_t seed, const MilpInstance& inst, const std::string& variant,
                        const OracleResult* oracle, const std::string& oracle_error, bool timing) {
    BenchmarkRecord rec;
    rec.instance_seed = seed;
    rec.variant = variant;
    rec.objective = kNan;
    rec.gap = kNan;
    rec.opt = oracle != nullptr && oracle->feasible ? oracle->optimum : kNan;
    if (!oracle_error.empty()) {
        rec.status = "Error";
        rec.error = oracle_error;
        return rec;
    }
    try {
        const BendersConfig cfg = variant_config(variant, seed);
        const SolveReport rep = hbd_solve(inst, cfg);
        rec.status = to_string(rep.status);
        rec.iterations = rep.iterations;
        for (int qb : rep.qubit_counts) rec.qubit_max = std::max(rec.qubit_max, qb);
        if (timing) rec.wall_time_ms = rep.wall_time_ms.total_ms;
        if (rep.has_solution()) {
            rec.has_objective = true;
            rec.objective = rep.objective;
            if (std::isfinite(rec.opt)) {
                if (std::fabs(rec.opt) > 1e-9) {
                    rec.gap = (rec.opt - rec.objective) / rec.opt;
                } else {
                    rec.gap = std::fabs(rec.opt - rec.objective);
                    rec.gap_is_absolute = true;
                }
            }
        }
    } catch (const std::exception& e) {
        rec.status = "Error";
        rec.error = e.what();
        rec.has_objective = false;
        rec.objective = kNan;
        rec.gap = kNan;
    }
    return rec;
}

} // namespace

std::vector<BenchmarkRecord> run_benchmark(
    const std::vector<std::pair<std::uint64_t, MilpInstance>>& instances,
    const std::vector<std::string>& variants, bool timing, int jobs) {
    struct Task {
        std::uint64_t seed;
        const MilpInstance* inst;
        const std::string* variant;
        const OracleResult* oracle;
        const std::string* oracle_error;
    };

    std::vector<OracleResult> oracles(instances.size());
    std::vector<std::string> oracle_errors(instances.size());
    for (size_t i = 0; i < instances.size(); ++i) {
        try {
            oracles[i] = oracle_solve(instances[i].second);
        } catch (const std::exception& e) {
            oracle_errors[i] = std::string("oracle: ") + e.what();
        }
    }

    std::vector<Task> tasks;
    for (size_t i = 0; i < instances.size(); ++i)
        for (const std::string& v : variants)
            tasks.push_back(Task{instances[i].first, &instances[i].second, &v, &oracles[i],
                                 &oracle_errors[i]});

    std::vector<BenchmarkRecord> records(tasks.size());
    auto work = [&](size_t t) {
        const Task& task = tasks[t];
        records[t] = run_one(task.seed, *task.inst, *task.variant, task.oracle,
                             *task.oracle_error, timing);
    };

    if (jobs <= 1 || tasks.size() <= 1) {
        for (size_t t = 0; t < tasks.size(); ++t) work(t);
    } else {
        std::atomic<size_t> next{0};
        const int workers = std::min<int>(jobs, static_cast<int>(tasks.size()));
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&]() {
                for (;;) {
                    const size_t t = next.fetch_add(1);
                    if (t >= tasks.size()) return;
                    work(t);
                }
            });
        }
        for (std::thread& th : pool) th.join();
    }
    return records;
}

std::string records_to_csv(const std::vector<BenchmarkRecord>& records) {
    std::ostringstream out;
    out << "instance_seed,variant,status,objective,opt,gap,iterations,qubit_max,wall_time_ms\n";
    for (const BenchmarkRecord& r : records) {
        out << r.instance_seed << ',' << r.variant << ',' << r.status << ','
            << num_str(r.objective) << ',' << num_str(r.opt) << ',' << num_str(r.gap) << ','
            << r.iterations << ',' << r.qubit_max << ',' << num_str(r.wall_time_ms) << '\n';
    }
    return out.str();
}

std::string benchmark_to_json(const std::vector<BenchmarkRecord>& records,
                              const MetricsSummary& summary) {
    using Json = nlohmann::ordered_json;
    Json j;
    Json recs = Json::array();
    for (const BenchmarkRecord& r : records) {
        Json e;
        e["instance_seed"] = r.instance_seed;
        e["variant"] = r.variant;
        e["status"] = r.status;
        e["objective"] = num_str(r.objective);
        e["opt"] = num_str(r.opt);
        e["gap"] = num_str(r.gap);
        e["gap_is_absolute"] = r.gap_is_absolute;
        e["iterations"] = r.iterations;
        e["qubit_max"] = r.qubit_max;
        e["wall_time_ms"] = num_str(r.wall_time_ms);
        if (!r.error.empty()) e["error"] = r.error;
        recs.push_back(e);
    }
    j["records"] = recs;
    Json s;
    s["num_records"] = summary.num_records;
    s["num_feasible"] = summary.num_feasible;
    s["num_optimal"] = summary.num_optimal;
    s["feasibility_rate"] = num_str(summary.feasibility_rate);
    s["optimality_rate"] = num_str(summary.optimality_rate);
    auto quart = [&](const Quartiles& q) {
        Json qq;
        qq["defined"] = q.defined;
        qq["q1"] = num_str(q.q1);
        qq["median"] = num_str(q.median);
        qq["q3"] = num_str(q.q3);
        return qq;
    };
    s["gap_quartiles"] = quart(summary.gap);
    s["iteration_quartiles"] = quart(summary.iterations);
    j["summary"] = s;
    return j.dump(2) + "\n";
}

} // namespace hbd
