#include "hbd/model.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "hbd/lp_simplex.hpp"

namespace hbd {

namespace {

using Json = nlohmann::ordered_json;

std::string num_str(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc())
        throw InternalError("num_str: to_chars failed");
    return std::string(buf, res.ptr);
}

double num_from(const Json& j, const std::string& where) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        double v = 0.0;
        auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size())
            throw SchemaError("instance json: bad numeric string in " + where + ": '" + s + "'");
        return v;
    }
    throw SchemaError("instance json: " + where + " must be a number or numeric string");
}

int int_from(const Json& j, const std::string& where) {
    if (!j.is_number_integer())
        throw SchemaError("instance json: " + where + " must be an integer");
    return j.get<int>();
}

Json vec_to_json(const Vec& v) {
    Json arr = Json::array();
    for (double x : v) arr.push_back(num_str(x));
    return arr;
}

Vec vec_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) throw SchemaError("instance json: " + where + " must be an array");
    Vec v;
    v.reserve(j.size());
    for (size_t i = 0; i < j.size(); ++i) v.push_back(num_from(j[i], where));
    return v;
}

Json mat_to_json(const Mat& m) {
    Json arr = Json::array();
    for (const Vec& row : m) arr.push_back(vec_to_json(row));
    return arr;
}

Mat mat_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) throw SchemaError("instance json: " + where + " must be an array of arrays");
    Mat m;
    m.reserve(j.size());
    for (size_t i = 0; i < j.size(); ++i) m.push_back(vec_from_json(j[i], where));
    return m;
}

const Json& field(const Json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end()) throw SchemaError(std::string("instance json: missing field '") + name + "'");
    return *it;
}

// Unbiased uniform integer in [lo, hi] drawn by rejection, so the stream of
// raw engine words (and therefore every generated instance) is pinned by the
// standard's mt19937_64 definition alone.
long long uniform_int(std::mt19937_64& rng, long long lo, long long hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo + 1);
    const std::uint64_t threshold = (-span) % span;
    for (;;) {
        const std::uint64_t r = rng();
        if (r >= threshold) return lo + static_cast<long long>(r % span);
    }
}

MilpInstance draw_instance(std::mt19937_64& rng) {
    MilpInstance inst;
    inst.n = static_cast<int>(uniform_int(rng, 2, 5));
    inst.p = static_cast<int>(uniform_int(rng, 2, 10));
    inst.m1 = static_cast<int>(uniform_int(rng, 5, 14));
    inst.m2 = 1;

    inst.A.assign(inst.m1, Vec(inst.n, 0.0));
    for (int i = 0; i < inst.m1; ++i)
        for (int j = 0; j < inst.n; ++j) inst.A[i][j] = static_cast<double>(uniform_int(rng, 0, 10));
    inst.G.assign(inst.m1, Vec(inst.p, 0.0));
    for (int i = 0; i < inst.m1; ++i)
        for (int j = 0; j < inst.p; ++j) inst.G[i][j] = static_cast<double>(uniform_int(rng, -5, 5));
    inst.b.resize(inst.m1);
    for (int i = 0; i < inst.m1; ++i) inst.b[i] = static_cast<double>(uniform_int(rng, 0, 10));
    inst.c.resize(inst.n);
    for (int j = 0; j < inst.n; ++j) inst.c[j] = static_cast<double>(uniform_int(rng, 0, 10));
    inst.h.resize(inst.p);
    for (int j = 0; j < inst.p; ++j) inst.h[j] = static_cast<double>(uniform_int(rng, 0, 10));

    inst.B.assign(1, Vec(inst.n, 1.0));
    inst.bprime.assign(1, static_cast<double>(uniform_int(rng, 1, 4)));
    return inst;
}

} // namespace

void MilpInstance::validate() const {
    if (n < 1 || p < 1 || m1 < 1 || m2 < 0)
        throw DimensionError("instance: need n >= 1, p >= 1, m1 >= 1, m2 >= 0");
    auto check_vec = [](const Vec& v, int len, const char* name) {
        if (static_cast<int>(v.size()) != len)
            throw DimensionError(std::string("instance: ") + name + " has wrong length");
    };
    auto check_mat = [&](const Mat& m, int rows, int cols, const char* name) {
        if (static_cast<int>(m.size()) != rows)
            throw DimensionError(std::string("instance: ") + name + " has wrong row count");
        for (const Vec& row : m)
            if (static_cast<int>(row.size()) != cols)
                throw DimensionError(std::string("instance: ") + name + " has a wrong-length row");
    };
    check_vec(c, n, "c");
    check_vec(h, p, "h");
    check_vec(b, m1, "b");
    check_vec(bprime, m2, "bprime");
    check_mat(A, m1, n, "A");
    check_mat(G, m1, p, "G");
    check_mat(B, m2, n, "B");
}

bool MilpInstance::is_integer_data() const {
    auto ok = [](double v) { return std::fabs(v - std::round(v)) <= 1e-9; };
    for (double v : c) if (!ok(v)) return false;
    for (double v : h) if (!ok(v)) return false;
    for (double v : b) if (!ok(v)) return false;
    for (double v : bprime) if (!ok(v)) return false;
    for (const Vec& row : A) for (double v : row) if (!ok(v)) return false;
    for (const Vec& row : G) for (double v : row) if (!ok(v)) return false;
    for (const Vec& row : B) for (double v : row) if (!ok(v)) return false;
    return true;
}

double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Vec mat_vec(const Mat& m, const Vec& v) {
    Vec out(m.size(), 0.0);
    for (size_t i = 0; i < m.size(); ++i) out[i] = dot(m[i], v);
    return out;
}

Vec mat_transpose_vec(const Mat& m, const Vec& v) {
    if (m.size() != v.size()) throw DimensionError("mat_transpose_vec: length mismatch");
    if (m.empty()) return {};
    Vec out(m[0].size(), 0.0);
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < m[i].size(); ++j) out[j] += m[i][j] * v[i];
    return out;
}

Vec bits_to_vec(const Bits& x) {
    Vec v(x.size());
    for (size_t i = 0; i < x.size(); ++i) v[i] = static_cast<double>(x[i]);
    return v;
}

double BendersCut::lhs_at(const Bits& x) const {
    if (x.size() != coeffs.size()) throw DimensionError("cut: x length mismatch");
    double s = constant;
    for (size_t j = 0; j < coeffs.size(); ++j)
        if (x[j]) s += coeffs[j];
    return s;
}

bool BendersCut::same_content(const BendersCut& other, double tol) const {
    if (kind != other.kind || coeffs.size() != other.coeffs.size()) return false;
    if (std::fabs(constant - other.constant) > tol) return false;
    for (size_t j = 0; j < coeffs.size(); ++j)
        if (std::fabs(coeffs[j] - other.coeffs[j]) > tol) return false;
    return true;
}

void BendersConfig::validate() const {
    if (!(epsilon > 0.0) || epsilon > 1.0)
        throw SchemaError("config: epsilon must be in (0, 1]");
    if (max_iterations < 1) throw SchemaError("config: max_iterations must be >= 1");
    if (convergence_tol < 0.0) throw SchemaError("config: convergence_tol must be >= 0");
    if (backend != "exact" && backend != "sa")
        throw SchemaError("config: unknown backend '" + backend + "'");
    if (multicut) {
        if (multicut->m < 1 || multicut->m > multicut->k)
            throw SchemaError("config: multicut needs 1 <= M <= k");
    }
    if (sa_sweeps < 0) throw SchemaError("config: sa_sweeps must be >= 0");
    if (sa_restarts < 1) throw SchemaError("config: sa_restarts must be >= 1");
}

std::string to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Feasible: return "Feasible";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::IterationLimit: return "IterationLimit";
    }
    throw InternalError("to_string: bad SolveStatus");
}

MilpInstance generate_generic_instance(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        MilpInstance inst = draw_instance(rng);
        RelaxObjective goal;
        goal.goal = RelaxGoal::PhiUpper;
        const LpSolution sol = solve_binary_relaxation(inst, goal);
        if (sol.status == LpStatus::Optimal) return inst;
        if (sol.status == LpStatus::Infeasible)
            throw InternalError("generator: relaxation infeasible despite nonnegative b");
    }
    throw InternalError("generate_generic_instance: 1000 draws rejected as unbounded");
}

std::string instance_to_json(const MilpInstance& inst) {
    inst.validate();
    Json j;
    j["n"] = inst.n;
    j["p"] = inst.p;
    j["m1"] = inst.m1;
    j["m2"] = inst.m2;
    j["c"] = vec_to_json(inst.c);
    j["h"] = vec_to_json(inst.h);
    j["b"] = vec_to_json(inst.b);
    j["bprime"] = vec_to_json(inst.bprime);
    j["A"] = mat_to_json(inst.A);
    j["G"] = mat_to_json(inst.G);
    j["B"] = mat_to_json(inst.B);
    return j.dump(2) + "\n";
}

MilpInstance instance_from_json(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("instance json: parse error: ") + e.what());
    }
    if (!j.is_object()) throw SchemaError("instance json: top level must be an object");
    MilpInstance inst;
    inst.n = int_from(field(j, "n"), "n");
    inst.p = int_from(field(j, "p"), "p");
    inst.m1 = int_from(field(j, "m1"), "m1");
    inst.m2 = int_from(field(j, "m2"), "m2");
    inst.c = vec_from_json(field(j, "c"), "c");
    inst.h = vec_from_json(field(j, "h"), "h");
    inst.b = vec_from_json(field(j, "b"), "b");
    inst.bprime = vec_from_json(field(j, "bprime"), "bprime");
    inst.A = mat_from_json(field(j, "A"), "A");
    inst.G = mat_from_json(field(j, "G"), "G");
    inst.B = mat_from_json(field(j, "B"), "B");
    inst.validate();
    return inst;
}

void save_instance(const MilpInstance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    out << instance_to_json(inst);
    if (!out) throw Error("write failed: " + path);
}

MilpInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return instance_from_json(ss.str());
}

namespace {

Json cut_to_json(const BendersCut& cut) {
    Json j;
    j["kind"] = cut.kind == CutKind::Optimality ? "optimality" : "feasibility";
    j["coeffs"] = vec_to_json(cut.coeffs);
    j["constant"] = num_str(cut.constant);
    j["mu"] = vec_to_json(cut.mu);
    j["iteration_created"] = cut.iteration_created;
    return j;
}

} // namespace

std::string report_to_json(const SolveReport& report) {
    Json j;
    j["status"] = to_string(report.status);
    Json xb = Json::array();
    for (auto v : report.x_best) xb.push_back(static_cast<int>(v));
    j["x_best"] = xb;
    j["y_best"] = vec_to_json(report.y_best);
    j["objective"] = num_str(report.objective);
    j["iterations"] = report.iterations;
    Json cuts = Json::array();
    for (const BendersCut& cut : report.cuts) cuts.push_back(cut_to_json(cut));
    j["cuts"] = cuts;
    j["qubit_counts"] = report.qubit_counts;
    j["master_bounds"] = vec_to_json(report.master_bounds);
    j["phi_bounds"] = Json::array({num_str(report.phi_bounds.first), num_str(report.phi_bounds.second)});
    Json wt;
    wt["bounds_ms"] = report.wall_time_ms.bounds_ms;
    wt["encode_ms"] = report.wall_time_ms.encode_ms;
    wt["qubo_ms"] = report.wall_time_ms.qubo_ms;
    wt["subproblem_ms"] = report.wall_time_ms.subproblem_ms;
    wt["total_ms"] = report.wall_time_ms.total_ms;
    j["wall_time_ms"] = wt;
    j["phi_grid_miss"] = report.phi_grid_miss;
    j["master_infeasible_iterations"] = report.master_infeasible_iterations;
    return j.dump(2) + "\n";
}

void save_report(const SolveReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    out << report_to_json(report);
    if (!out) throw Error("write failed: " + path);
}

} // namespace hbd
