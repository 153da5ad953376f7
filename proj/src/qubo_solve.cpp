#include "hbd/qubo_solve.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <utility>

namespace hbd {

const Sample& SampleSet::best() const {
    if (samples.empty()) throw InternalError("sample set: best() on empty set");
    return samples.front();
}

namespace {

// Bits compared as the integer they spell with bit 0 least significant.
bool integer_less(const Bits& a, const Bits& b) {
    const size_t n = std::max(a.size(), b.size());
    for (size_t i = n; i-- > 0;) {
        const int av = i < a.size() ? a[i] : 0;
        const int bv = i < b.size() ? b[i] : 0;
        if (av != bv) return av < bv;
    }
    return false;
}

struct FlipTable {
    std::vector<double> diag;
    std::vector<std::vector<std::pair<int, double>>> adj;

    explicit FlipTable(const QuboModel& model)
        : diag(model.num_bits, 0.0), adj(model.num_bits) {
        for (const auto& [key, v] : model.quadratic) {
            if (key.first == key.second) {
                diag[key.first] += v;
            } else {
                adj[key.first].emplace_back(key.second, v);
                adj[key.second].emplace_back(key.first, v);
            }
        }
    }

    double flip_delta(const Bits& bits, int k) const {
        double s = diag[k];
        for (const auto& [j, c] : adj[k])
            if (bits[j]) s += c;
        return bits[k] ? -s : s;
    }
};

double unit_draw(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

SampleSet solve_exact(const QuboModel& model, int retention) {
    if (model.num_bits > 24)
        throw SizeCapError("solve_exact: " + std::to_string(model.num_bits) +
                           " bits exceeds the 24-bit enumeration cap");
    if (retention < 1) throw InternalError("solve_exact: retention < 1");

    SampleSet out;
    if (model.num_bits == 0) {
        out.samples.push_back(Sample{Bits{}, model.offset});
        return out;
    }

    const int nb = model.num_bits;
    const FlipTable table(model);
    Bits bits(nb, 0);
    double running = model.energy(bits);

    // energy level -> (integer value, bits); per level the smallest integer wins
    std::map<double, std::pair<std::uint64_t, Bits>> levels;
    auto consider = [&](std::uint64_t vint) {
        if (levels.size() >= static_cast<size_t>(retention) &&
            running > levels.rbegin()->first + 1e-6)
            return;
        const double canon = model.energy(bits);
        auto it = levels.find(canon);
        if (it != levels.end()) {
            if (vint < it->second.first) it->second = {vint, bits};
            return;
        }
        if (levels.size() >= static_cast<size_t>(retention)) {
            if (canon >= levels.rbegin()->first) return;
            levels.erase(std::prev(levels.end()));
        }
        levels.emplace(canon, std::make_pair(vint, bits));
    };

    consider(0);
    const std::uint64_t total = 1ull << nb;
    for (std::uint64_t v = 1; v < total; ++v) {
        // Gray-code walk: exactly one bit flips per step.
        const int k = std::countr_zero(v);
        running += table.flip_delta(bits, k);
        bits[k] ^= 1;
        if ((v & 0xFFFull) == 0) running = model.energy(bits); // drift resync
        consider(v ^ (v >> 1));
    }

    for (auto& [energy, entry] : levels) out.samples.push_back(Sample{entry.second, energy});
    return out;
}

SampleSet solve_sa(const QuboModel& model, std::uint64_t seed, int sweeps, int restarts,
                   int retention) {
    if (restarts < 1) throw InternalError("solve_sa: restarts < 1");
    if (sweeps < 0) throw InternalError("solve_sa: negative sweeps");
    if (retention < 1) throw InternalError("solve_sa: retention < 1");

    const int nb = model.num_bits;
    const FlipTable table(model);
    double t0 = model.max_abs_coefficient();
    if (t0 <= 0.0) t0 = 1.0;
    const double tf = 1e-3 * t0;

    std::map<Bits, double> found;
    for (int r = 0; r < restarts; ++r) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(r));
        Bits bits(nb, 0);
        for (int i = 0; i < nb; ++i) bits[i] = static_cast<std::uint8_t>(rng() & 1ull);
        double running = model.energy(bits);
        found.emplace(bits, running);
        double best_seen = running;

        for (int s = 0; s < sweeps; ++s) {
            const double t =
                sweeps > 1 ? t0 * std::pow(tf / t0, static_cast<double>(s) / (sweeps - 1)) : t0;
            for (int k = 0; k < nb; ++k) {
                const double delta = table.flip_delta(bits, k);
                if (delta <= 0.0 || unit_draw(rng) < std::exp(-delta / t)) {
                    bits[k] ^= 1;
                    running += delta;
                    if (running < best_seen - 1e-12) {
                        const double canon = model.energy(bits);
                        found[bits] = canon;
                        best_seen = running;
                    }
                }
            }
        }
    }

    std::vector<Sample> samples;
    samples.reserve(found.size());
    for (const auto& [bits, energy] : found) samples.push_back(Sample{bits, energy});
    std::sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        return integer_less(a.bits, b.bits);
    });
    if (samples.size() > static_cast<size_t>(retention)) samples.resize(retention);

    SampleSet out;
    out.samples = std::move(samples);
    return out;
}

SampleSet solve_qubo(const QuboModel& model, const std::string& backend, std::uint64_t seed,
                     int sweeps, int restarts, int retention) {
    if (backend == "exact") return solve_exact(model, retention);
    if (backend == "sa") return solve_sa(model, seed, sweeps, restarts, retention);
    throw SchemaError("solve_qubo: unknown backend '" + backend + "'");
}

} // namespace hbd
