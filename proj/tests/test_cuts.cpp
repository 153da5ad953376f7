#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "doctest.h"
#include "hbd/benders.hpp"
#include "hbd/cuts.hpp"
#include "support.hpp"

using namespace hbd;
using namespace hbdtest;

namespace {

Bits nth_x(std::uint32_t v, int n) {
    Bits x(n);
    for (int j = 0; j < n; ++j) x[j] = (v >> j) & 1u;
    return x;
}

// Reference coverage maximizer with the pinned tie rule: most columns, then
// fewest rows, then lexicographically smallest index set.
std::vector<int> brute_coverage(const DensityMatrix& d, int M, int force = -1) {
    std::vector<int> best;
    int best_cov = -1;
    for (std::uint32_t mask = 1; mask < (1u << d.rows); ++mask) {
        if (std::popcount(mask) > M) continue;
        if (force >= 0 && !((mask >> force) & 1u)) continue;
        std::vector<int> subset;
        for (int r = 0; r < d.rows; ++r)
            if ((mask >> r) & 1u) subset.push_back(r);
        int cov = 0;
        for (int c = 0; c < d.cols; ++c)
            for (int r : subset)
                if (d.entries[r][c]) {
                    ++cov;
                    break;
                }
        const bool better =
            cov > best_cov ||
            (cov == best_cov &&
             (subset.size() < best.size() || (subset.size() == best.size() && subset < best)));
        if (better) {
            best_cov = cov;
            best = subset;
        }
    }
    return best;
}

DensityMatrix random_matrix(std::mt19937_64& rng, int max_rows, int max_cols) {
    DensityMatrix d;
    d.rows = 1 + static_cast<int>(rng() % max_rows);
    d.cols = 1 + static_cast<int>(rng() % max_cols);
    d.entries.assign(d.rows, std::vector<std::uint8_t>(d.cols, 0));
    for (auto& row : d.entries)
        for (auto& e : row) e = (rng() % 100) < 40 ? 1 : 0;
    return d;
}

} // namespace

TEST_CASE("subproblem optimum and dual vertex") {
    const auto t1 = tiny_optimality_instance();
    auto sp = solve_subproblem(t1, make_bits({0}));
    REQUIRE(sp.feasible);
    CHECK(sp.objective == doctest::Approx(12));
    CHECK(sp.y[0] == doctest::Approx(4));
    REQUIRE(sp.mu.size() == 1);
    CHECK(sp.mu[0] == doctest::Approx(3));

    sp = solve_subproblem(t1, make_bits({1}));
    REQUIRE(sp.feasible);
    CHECK(sp.objective == doctest::Approx(9));
    CHECK(sp.mu[0] == doctest::Approx(3));
}

TEST_CASE("subproblem infeasibility is reported, not thrown") {
    const auto t2 = tiny_feasibility_instance();
    CHECK_FALSE(solve_subproblem(t2, make_bits({0})).feasible);
    const auto sp = solve_subproblem(t2, make_bits({1}));
    REQUIRE(sp.feasible);
    CHECK(sp.objective == doctest::Approx(2));
    CHECK(sp.y[0] == doctest::Approx(2));
}

TEST_CASE("unbounded subproblem throws") {
    auto inst = tiny_optimality_instance();
    inst.G = {{-1}};
    inst.b = {0};
    CHECK_THROWS_AS(solve_subproblem(inst, make_bits({0})), UnboundedError);
}

TEST_CASE("optimality cut ties out with the subproblem at its source") {
    const auto t1 = tiny_optimality_instance();
    const auto sp0 = solve_subproblem(t1, make_bits({0}));
    const auto cut = make_optimality_cut(sp0.mu, t1, 1);
    CHECK(cut.kind == CutKind::Optimality);
    CHECK(cut.constant == doctest::Approx(12));
    REQUIRE(cut.coeffs.size() == 1);
    CHECK(cut.coeffs[0] == doctest::Approx(-3));
    CHECK(cut.iteration_created == 1);
    CHECK(cut.mu == sp0.mu);

    for (int xv = 0; xv <= 1; ++xv) {
        const Bits x = make_bits({xv});
        const auto sp = solve_subproblem(t1, x);
        const auto c = make_optimality_cut(sp.mu, t1);
        CHECK(c.lhs_at(x) == doctest::Approx(sp.objective)); // strong duality
    }

    const auto zero = make_optimality_cut({0}, t1);
    CHECK(zero.constant == doctest::Approx(0));
    CHECK(zero.coeffs[0] == doctest::Approx(0));
}

TEST_CASE("infeasibility measure equals its dual bound") {
    const auto t2 = tiny_feasibility_instance();
    const Bits x0 = make_bits({0});
    CHECK(solve_sp2(t2, x0) == doctest::Approx(1));
    const auto d = solve_dsp2(t2, x0);
    CHECK(d.objective == doctest::Approx(1));
    REQUIRE(d.mu.size() == 2);
    CHECK(d.mu[0] == doctest::Approx(-1));
    CHECK(d.mu[1] == doctest::Approx(-1));
    for (double m : d.mu) {
        CHECK(m <= 1e-9);
        CHECK(m >= -1 - 1e-9);
    }
    const Vec gt_mu = mat_transpose_vec(t2.G, d.mu);
    for (double v : gt_mu) CHECK(v <= 1e-9);
}

TEST_CASE("feasibility cut excludes its source point and keeps good ones") {
    const auto t2 = tiny_feasibility_instance();
    const auto cut = make_feasibility_cut(t2, make_bits({0}), 1);
    CHECK(cut.kind == CutKind::Feasibility);
    CHECK(cut.constant == doctest::Approx(1));
    REQUIRE(cut.coeffs.size() == 1);
    CHECK(cut.coeffs[0] == doctest::Approx(-1));
    CHECK(cut.lhs_at(make_bits({0})) > 1e-7);          // excluded
    CHECK(cut.lhs_at(make_bits({1})) <= 1e-7);         // x = 1 survives
    REQUIRE(cut.mu.size() == 2);
    CHECK(cut.mu[0] == doctest::Approx(-1));
    CHECK(cut.mu[1] == doctest::Approx(-1));
}

TEST_CASE("feasibility cut refuses a feasible source") {
    CHECK_THROWS_AS(make_feasibility_cut(tiny_optimality_instance(), make_bits({0})),
                    InternalError);
}

TEST_CASE("measure/dual agreement and cut validity on random infeasible pairs") {
    int pairs = 0;
    for (std::uint64_t seed = 1; seed <= 3000 && pairs < 50; ++seed) {
        const auto inst = generate_generic_instance(seed);
        for (std::uint32_t v = 0; v < (1u << inst.n) && pairs < 50; ++v) {
            const Bits x = nth_x(v, inst.n);
            if (!check_master_feasible(x, inst)) continue;
            if (solve_subproblem(inst, x).feasible) continue;
            ++pairs;

            const double measure = solve_sp2(inst, x);
            const auto d = solve_dsp2(inst, x);
            CAPTURE(seed);
            CAPTURE(v);
            REQUIRE(std::fabs(measure - d.objective) <= 1e-6 * (1.0 + std::fabs(measure)));
            REQUIRE(d.objective > 1e-7);

            const auto cut = make_feasibility_cut(inst, x);
            REQUIRE(cut.lhs_at(x) > 1e-7);
            for (std::uint32_t w = 0; w < (1u << inst.n); ++w) {
                const Bits xo = nth_x(w, inst.n);
                if (!check_master_feasible(xo, inst)) continue;
                if (!solve_subproblem(inst, xo).feasible) continue;
                REQUIRE(cut.lhs_at(xo) <= 1e-7); // never cuts a good point
            }
        }
    }
    CHECK(pairs == 50);
}

TEST_CASE("density matrix thresholds tiny coefficients") {
    BendersCut a;
    a.coeffs = {1e-12, 0.5, 0.0};
    BendersCut b;
    b.coeffs = {1.0, 0.0, -2.0};
    const auto d = build_density_matrix({a, b});
    REQUIRE(d.rows == 2);
    REQUIRE(d.cols == 3);
    CHECK(d.entries[0] == std::vector<std::uint8_t>({0, 1, 0}));
    CHECK(d.entries[1] == std::vector<std::uint8_t>({1, 0, 1}));
}

TEST_CASE("coverage selection picks the pinned example") {
    DensityMatrix d;
    d.rows = 3;
    d.cols = 4;
    d.entries = {{1, 1, 0, 0}, {0, 0, 1, 1}, {1, 0, 1, 0}};
    CHECK(max_coverage_exact(d, 2) == std::vector<int>({0, 1}));
    CHECK(max_coverage_greedy(d, 2) == std::vector<int>({0, 1}));

    BendersCut c0, c1, c2;
    c0.coeffs = {1, 1, 0, 0};
    c1.coeffs = {0, 0, 1, 1};
    c2.coeffs = {1, 0, 1, 0};
    CHECK(select_multicuts({c0, c1, c2}, 2) == std::vector<int>({0, 1}));
}

TEST_CASE("coverage selection edge cases") {
    DensityMatrix single;
    single.rows = 1;
    single.cols = 2;
    single.entries = {{1, 0}};
    CHECK(max_coverage_exact(single, 1) == std::vector<int>({0}));

    DensityMatrix zeros;
    zeros.rows = 3;
    zeros.cols = 2;
    zeros.entries = {{0, 0}, {0, 0}, {0, 0}};
    CHECK(max_coverage_exact(zeros, 2) == std::vector<int>({0}));
    CHECK(max_coverage_greedy(zeros, 2) == std::vector<int>({0}));

    DensityMatrix d;
    d.rows = 3;
    d.cols = 4;
    d.entries = {{1, 1, 0, 0}, {0, 0, 1, 1}, {1, 0, 1, 0}};
    const auto forced = max_coverage_exact(d, 2, 2);
    CHECK(std::find(forced.begin(), forced.end(), 2) != forced.end());
    const auto gforced = max_coverage_greedy(d, 2, 2);
    REQUIRE_FALSE(gforced.empty());
    CHECK(gforced.front() == 2);
}

TEST_CASE("exact coverage matches an independent brute force") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 100; ++t) {
        const auto d = random_matrix(rng, 7, 10);
        const int M = 1 + static_cast<int>(rng() % d.rows);
        const int force = (rng() % 3 == 0) ? static_cast<int>(rng() % d.rows) : -1;
        const auto got = max_coverage_exact(d, M, force);
        const auto want = brute_coverage(d, M, force);
        CAPTURE(t);
        REQUIRE(got == want);

        const auto greedy = max_coverage_greedy(d, M, force);
        REQUIRE(static_cast<int>(greedy.size()) <= M);
        auto cov = [&](const std::vector<int>& rows) {
            int c = 0;
            for (int col = 0; col < d.cols; ++col)
                for (int r : rows)
                    if (d.entries[r][col]) {
                        ++c;
                        break;
                    }
            return c;
        };
        REQUIRE(cov(greedy) <= cov(got));
    }
}
