#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hbd/qubo_encode.hpp"

namespace hbd {

struct Sample {
    Bits bits;
    double energy = 0.0;
};

// Ascending by energy, deduplicated by bitstring; ties broken by the bits
// read as an integer (bit 0 least significant). Every stored energy is the
// model's own energy() of the bits, recomputed on insertion.
struct SampleSet {
    std::vector<Sample> samples;

    bool empty() const { return samples.empty(); }
    std::size_t size() const { return samples.size(); }
    const Sample& best() const;
};

// Exhaustive enumeration. Keeps the lowest `retention` distinct energy
// levels; per level the bitstring with the smallest integer value wins.
// Throws SizeCapError when num_bits > 24.
SampleSet solve_exact(const QuboModel& model, int retention = 32);

// Best-of-restarts single-flip Metropolis annealing with a geometric
// temperature schedule from max|coefficient| down to 1e-3 of it. Restart r
// runs on mt19937_64(seed + r), so results are restart-order independent.
// sweeps = 0 degenerates to scoring the random initial states.
SampleSet solve_sa(const QuboModel& model, std::uint64_t seed, int sweeps = 2000,
                   int restarts = 8, int retention = 32);

// Dispatch on the BendersConfig backend strings "exact" and "sa".
SampleSet solve_qubo(const QuboModel& model, const std::string& backend, std::uint64_t seed,
                     int sweeps, int restarts, int retention = 32);

} // namespace hbd
