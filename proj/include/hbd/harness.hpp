#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hbd/model.hpp"

namespace hbd {

struct OracleResult {
    bool feasible = false;
    double optimum = 0.0;
    Bits x;
    Vec y;
};

// Brute force: enumerate all x in {0,1}^n with Bx <= bprime, solve the y-LP
// for each, return the maximizer of c.x + h.y (first maximizer found wins
// ties; enumeration order is x as an ascending integer, bit 0 = x_0).
// Guarded to n <= 20; throws UnboundedError when some y-LP is unbounded.
OracleResult oracle_solve(const MilpInstance& inst);

struct BenchmarkRecord {
    std::uint64_t instance_seed = 0;
    std::string variant;
    std::string status;          // SolveStatus name, or "Error"
    bool has_objective = false;  // false: objective/gap columns print nan
    double objective = 0.0;
    double opt = 0.0;
    double gap = 0.0;
    bool gap_is_absolute = false; // |opt| <= 1e-9 fallback was used
    int iterations = 0;
    int qubit_max = 0;
    double wall_time_ms = 0.0;
    std::string error;           // message when status == "Error"
};

struct Quartiles {
    bool defined = false; // false when no data points
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
};

struct MetricsSummary {
    int num_records = 0;
    int num_feasible = 0;   // status Optimal or Feasible
    int num_optimal = 0;    // |obj - opt| <= 1e-6 * (1 + |opt|)
    double feasibility_rate = 0.0;
    double optimality_rate = 0.0;
    Quartiles gap;          // over feasible records
    Quartiles iterations;   // over all non-error records
};

MetricsSummary compute_metrics(const std::vector<BenchmarkRecord>& records);

// Variant labels: HBD_<conversion><penalties>[_MC] with conversion S|E and
// penalties C (constructive) | M (manual unit), e.g. HBD_S_C, HBD_E_C_MC;
// plus the baseline "SA" (slack conversion, unit manual penalties, sa
// backend). _MC adds multicut k=5, M=3. Throws SchemaError on anything else.
BendersConfig variant_config(const std::string& label, std::uint64_t seed);

// One row per (instance, variant), in the given order. wall_time_ms stays 0
// unless `timing` (repeat runs must be byte-identical). Per-record solver
// errors land in the row, never abort the sweep. `jobs` > 1 runs records in
// a thread pool; output order is unaffected.
std::vector<BenchmarkRecord> run_benchmark(
    const std::vector<std::pair<std::uint64_t, MilpInstance>>& instances,
    const std::vector<std::string>& variants, bool timing = false, int jobs = 1);

// Header: instance_seed,variant,status,objective,opt,gap,iterations,qubit_max,wall_time_ms
std::string records_to_csv(const std::vector<BenchmarkRecord>& records);

// Summary plus the full record array (including the gap_is_absolute flags
// and error messages that the fixed CSV schema cannot carry).
std::string benchmark_to_json(const std::vector<BenchmarkRecord>& records,
                              const MetricsSummary& summary);

} // namespace hbd
