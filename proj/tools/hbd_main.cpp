#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hbd/benders.hpp"
#include "hbd/cuts.hpp"
#include "hbd/harness.hpp"
#include "hbd/qubo_encode.hpp"

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, sep)) out.push_back(tok);
    return out;
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw hbd::SchemaError(what + ": bad number '" + s + "'");
    }
}

long parse_long(const std::string& s, const std::string& what) {
    try {
        size_t pos = 0;
        const long v = std::stol(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw hbd::SchemaError(what + ": bad integer '" + s + "'");
    }
}

// True when some master-feasible x has an infeasible subproblem, i.e. a run
// on this instance can exercise feasibility cuts.
bool needs_feasibility_cuts(const hbd::MilpInstance& inst) {
    const std::uint32_t total = 1u << inst.n;
    for (std::uint32_t v = 0; v < total; ++v) {
        hbd::Bits x(inst.n);
        for (int j = 0; j < inst.n; ++j) x[j] = (v >> j) & 1u;
        if (!hbd::check_master_feasible(x, inst)) continue;
        if (!hbd::solve_subproblem(inst, x).feasible) return true;
    }
    return false;
}

std::uint64_t seed_from_filename(const fs::path& path, std::uint64_t fallback) {
    const std::string stem = path.stem().string();
    size_t end = stem.size();
    while (end > 0 && std::isdigit(static_cast<unsigned char>(stem[end - 1]))) --end;
    if (end == stem.size()) return fallback;
    return std::stoull(stem.substr(end));
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw hbd::Error("cannot open for writing: " + path);
    out << text;
    if (!out) throw hbd::Error("write failed: " + path);
}

struct GenerateArgs {
    std::uint64_t seed = 0;
    int count = 10;
    std::string out;
    bool require_fc = false;
};

int run_generate(const GenerateArgs& a) {
    fs::create_directories(a.out);
    int written = 0;
    std::uint64_t scanned = 0;
    for (std::uint64_t s = a.seed; written < a.count; ++s, ++scanned) {
        if (scanned > 1000ull * static_cast<std::uint64_t>(a.count) + 1000ull)
            throw hbd::InternalError("generate: filter rejected too many seeds");
        const hbd::MilpInstance inst = hbd::generate_generic_instance(s);
        if (a.require_fc && !needs_feasibility_cuts(inst)) continue;
        const std::string path = a.out + "/instance_" + std::to_string(s) + ".json";
        hbd::save_instance(inst, path);
        std::cout << path << "\n";
        ++written;
    }
    return 0;
}

struct SolveArgs {
    std::string instance;
    std::string conversion = "slack";
    std::string penalties = "constructive";
    std::string pi;       // a,b,c,d for manual mode
    std::string multicut; // K,M
    std::string backend = "exact";
    double epsilon = 0.25;
    std::uint64_t seed = 0;
    int max_iterations = 30;
    int sa_sweeps = 2000;
    int sa_restarts = 8;
    std::string report;
    std::string dump_qubo;
};

hbd::BendersConfig config_from(const SolveArgs& a) {
    hbd::BendersConfig cfg;
    cfg.conversion = a.conversion == "exp" ? hbd::Conversion::Exponential : hbd::Conversion::Slack;
    cfg.penalty_mode =
        a.penalties == "manual" ? hbd::PenaltyMode::Manual : hbd::PenaltyMode::Constructive;
    if (!a.pi.empty()) {
        const auto parts = split(a.pi, ',');
        if (parts.size() != 4) throw hbd::SchemaError("--pi wants four values a,b,c,d");
        cfg.manual.pi_obj_x = parse_double(parts[0], "--pi");
        cfg.manual.pi_obj_phi = parse_double(parts[1], "--pi");
        cfg.manual.pi_obj_cut = parse_double(parts[2], "--pi");
        cfg.manual.pi_cons_mp = parse_double(parts[3], "--pi");
    }
    if (!a.multicut.empty()) {
        const auto parts = split(a.multicut, ',');
        if (parts.size() != 2) throw hbd::SchemaError("--multicut wants K,M");
        hbd::MulticutConfig mc;
        mc.k = static_cast<int>(parse_long(parts[0], "--multicut"));
        mc.m = static_cast<int>(parse_long(parts[1], "--multicut"));
        cfg.multicut = mc;
    }
    cfg.backend = a.backend;
    cfg.epsilon = a.epsilon;
    cfg.rng_seed = a.seed;
    cfg.max_iterations = a.max_iterations;
    cfg.sa_sweeps = a.sa_sweeps;
    cfg.sa_restarts = a.sa_restarts;
    return cfg;
}

int run_solve(const SolveArgs& a) {
    const hbd::MilpInstance inst = hbd::load_instance(a.instance);
    const hbd::BendersConfig cfg = config_from(a);

    if (!a.dump_qubo.empty()) {
        const auto [lb, ub] = hbd::tighten_phi_bounds(inst);
        const hbd::PhiEncoding phi = hbd::build_phi_encoding(lb, ub, cfg.epsilon);
        const hbd::PenaltySet pen =
            cfg.penalty_mode == hbd::PenaltyMode::Constructive
                ? hbd::solver_penalties(inst, ub, phi.D)
                : hbd::compute_penalties(inst, ub, hbd::PenaltyMode::Manual, cfg.manual);
        const hbd::QuboModel q = hbd::encode_master(inst, {}, phi, pen, cfg.conversion);
        write_text(a.dump_qubo, hbd::qubo_to_json(q));
    }

    const hbd::SolveReport rep = hbd::hbd_solve(inst, cfg);
    std::cout << "status: " << hbd::to_string(rep.status) << "\n";
    if (rep.has_solution()) {
        std::cout << "objective: " << rep.objective << "\nx:";
        for (auto v : rep.x_best) std::cout << ' ' << static_cast<int>(v);
        std::cout << "\ny:";
        for (double v : rep.y_best) std::cout << ' ' << v;
        std::cout << "\n";
    }
    std::cout << "iterations: " << rep.iterations << "\n";
    std::cout << "phi_bounds: [" << rep.phi_bounds.first << ", " << rep.phi_bounds.second << "]\n";
    std::cout << "qubits:";
    for (int qb : rep.qubit_counts) std::cout << ' ' << qb;
    std::cout << "\nphi_grid_miss: " << (rep.phi_grid_miss ? "true" : "false") << "\n";
    if (!a.report.empty()) hbd::save_report(rep, a.report);
    return 0;
}

int run_oracle(const std::string& instance) {
    const hbd::MilpInstance inst = hbd::load_instance(instance);
    const hbd::OracleResult res = hbd::oracle_solve(inst);
    if (!res.feasible) {
        std::cout << "Infeasible\n";
        return 0;
    }
    std::cout << "optimum: " << res.optimum << "\nx:";
    for (auto v : res.x) std::cout << ' ' << static_cast<int>(v);
    std::cout << "\ny:";
    for (double v : res.y) std::cout << ' ' << v;
    std::cout << "\n";
    return 0;
}

struct BenchArgs {
    std::string instances;
    std::string variants;
    std::string out;
    bool timing = false;
    int jobs = 1;
};

int run_bench(const BenchArgs& a) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(a.instances))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw hbd::SchemaError("bench: no .json instances in " + a.instances);

    std::vector<std::pair<std::uint64_t, hbd::MilpInstance>> instances;
    for (size_t i = 0; i < files.size(); ++i)
        instances.emplace_back(seed_from_filename(files[i], i), hbd::load_instance(files[i].string()));

    const std::vector<std::string> variants = split(a.variants, ',');
    if (variants.empty()) throw hbd::SchemaError("bench: empty variant list");

    const auto records = hbd::run_benchmark(instances, variants, a.timing, a.jobs);
    const hbd::MetricsSummary summary = hbd::compute_metrics(records);

    fs::create_directories(a.out);
    write_text(a.out + "/results.csv", hbd::records_to_csv(records));
    write_text(a.out + "/summary.json", hbd::benchmark_to_json(records, summary));

    std::cout << "records: " << summary.num_records << "\n"
              << "feasibility_rate: " << summary.feasibility_rate << "\n"
              << "optimality_rate: " << summary.optimality_rate << "\n"
              << "outputs: " << a.out << "/results.csv, " << a.out << "/summary.json\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Benders-decomposition MILP solver with a binary-optimization master"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* c_gen = app.add_subcommand("generate", "Write random instances as JSON files");
    c_gen->add_option("--count", gen.count, "How many instances");
    c_gen->add_option("--seed", gen.seed, "First generator seed");
    c_gen->add_option("--out", gen.out, "Output directory")->required();
    c_gen->add_flag("--require-feasibility-cuts", gen.require_fc,
                    "Keep only instances where some master-feasible x has an infeasible subproblem");

    SolveArgs sol;
    auto* c_sol = app.add_subcommand("solve", "Solve one instance");
    c_sol->add_option("--instance", sol.instance, "Instance JSON file")->required();
    c_sol->add_option("--conversion", sol.conversion, "slack or exp")
        ->check(CLI::IsMember({"slack", "exp"}));
    c_sol->add_option("--penalties", sol.penalties, "constructive or manual")
        ->check(CLI::IsMember({"constructive", "manual"}));
    c_sol->add_option("--pi", sol.pi, "Manual penalties pi_x,pi_phi,pi_cut,pi_mp");
    c_sol->add_option("--multicut", sol.multicut, "K,M: keep K candidates, select M cuts");
    c_sol->add_option("--backend", sol.backend, "exact or sa")
        ->check(CLI::IsMember({"exact", "sa"}));
    c_sol->add_option("--epsilon", sol.epsilon, "Fractional resolution target in (0,1]");
    c_sol->add_option("--seed", sol.seed, "RNG seed for the sa backend");
    c_sol->add_option("--max-iterations", sol.max_iterations, "Iteration cap");
    c_sol->add_option("--sa-sweeps", sol.sa_sweeps, "Annealing sweeps per restart");
    c_sol->add_option("--sa-restarts", sol.sa_restarts, "Annealing restarts");
    c_sol->add_option("--report", sol.report, "Write the solve report JSON here");
    c_sol->add_option("--dump-qubo", sol.dump_qubo, "Write the first master encoding here");

    std::string oracle_instance;
    auto* c_ora = app.add_subcommand("oracle", "Brute-force optimum of one instance");
    c_ora->add_option("--instance", oracle_instance, "Instance JSON file")->required();

    BenchArgs ben;
    auto* c_ben = app.add_subcommand("bench", "Run a variant sweep over an instance directory");
    c_ben->add_option("--instances", ben.instances, "Directory of instance JSON files")->required();
    c_ben->add_option("--variants", ben.variants,
                      "Comma list, e.g. HBD_S_C,HBD_E_C,HBD_S_C_MC,SA")
        ->required();
    c_ben->add_option("--out", ben.out, "Output directory")->required();
    c_ben->add_flag("--timing", ben.timing, "Record real wall times (breaks byte determinism)");
    c_ben->add_option("--jobs", ben.jobs, "Worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(c_gen)) return run_generate(gen);
        if (app.got_subcommand(c_sol)) return run_solve(sol);
        if (app.got_subcommand(c_ora)) return run_oracle(oracle_instance);
        if (app.got_subcommand(c_ben)) return run_bench(ben);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
