#include "xorgames/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace xorgames {

namespace {

[[noreturn]] void schema_fail(const std::string& what) { throw SchemaError(what); }

const json& need(const json& j, const char* key, const char* where) {
    if (!j.contains(key))
        schema_fail(std::string(where) + ": missing field '" + key + "'");
    return j.at(key);
}

double need_finite(const json& j, const char* where) {
    if (!j.is_number()) schema_fail(std::string(where) + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) schema_fail(std::string(where) + ": non-finite number");
    return v;
}

cplx complex_from(const json& j, const char* where) {
    if (!j.is_array() || j.size() != 2)
        schema_fail(std::string(where) + ": complex entries must be [re, im]");
    return {need_finite(j[0], where), need_finite(j[1], where)};
}

json complex_to(const cplx& z) { return json::array({z.real(), z.imag()}); }

std::string format17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Loaders surface invariant violations as schema errors.
template <typename F>
void check_schema(F&& f, const char* where) {
    try {
        f();
    } catch (const ContractError& e) {
        schema_fail(std::string(where) + ": " + e.what());
    }
}

}  // namespace

json matrix_to_json(const CMat& m) {
    json entries = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) entries.push_back(complex_to(m(i, j)));
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

CMat matrix_from_json(const json& j) {
    const auto rows = need(j, "rows", "matrix").get<Eigen::Index>();
    const auto cols = need(j, "cols", "matrix").get<Eigen::Index>();
    if (rows < 1 || cols < 1) schema_fail("matrix: rows/cols must be positive");
    if (rows > kDimCap || cols > kDimCap)
        throw CapacityError("matrix: dimensions exceed the dense-matrix cap");
    const json& entries = need(j, "entries", "matrix");
    if (!entries.is_array() || static_cast<Eigen::Index>(entries.size()) != rows * cols)
        schema_fail("matrix: entry count must equal rows*cols");
    CMat m(rows, cols);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j2 = 0; j2 < cols; ++j2) m(i, j2) = complex_from(entries[k++], "matrix");
    return m;
}

json state_to_json(const BipartiteState& s) {
    json amps = json::array();
    for (Eigen::Index k = 0; k < s.amplitudes.size(); ++k)
        amps.push_back(complex_to(s.amplitudes(k)));
    return json{{"dimA", s.dimA}, {"dimB", s.dimB}, {"amplitudes", amps}};
}

BipartiteState state_from_json(const json& j) {
    BipartiteState s;
    s.dimA = need(j, "dimA", "state").get<Eigen::Index>();
    s.dimB = need(j, "dimB", "state").get<Eigen::Index>();
    const json& amps = need(j, "amplitudes", "state");
    if (s.dimA < 1 || s.dimB < 1) schema_fail("state: dims must be positive");
    if (!amps.is_array() || static_cast<Eigen::Index>(amps.size()) != s.dimA * s.dimB)
        schema_fail("state: amplitude count must equal dimA*dimB");
    s.amplitudes.resize(s.dimA * s.dimB);
    for (Eigen::Index k = 0; k < s.amplitudes.size(); ++k)
        s.amplitudes(k) = complex_from(amps[k], "state");
    check_schema([&] { require_normalized(s); }, "state");
    return s;
}

json game_to_json(const XorGame& g) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < g.nA; ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < g.nB; ++j) row.push_back(g.matrix(i, j));
        rows.push_back(row);
    }
    json out{{"nA", g.nA}, {"nB", g.nB}, {"matrix", rows}};
    if (!g.aliceLabels.empty() || !g.bobLabels.empty())
        out["labels"] = json{{"alice", g.aliceLabels}, {"bob", g.bobLabels}};
    return out;
}

XorGame game_from_json(const json& j) {
    XorGame g;
    g.nA = need(j, "nA", "game").get<Eigen::Index>();
    g.nB = need(j, "nB", "game").get<Eigen::Index>();
    if (g.nA < 1 || g.nB < 1) schema_fail("game: nA/nB must be positive");
    if (g.nA > kDimCap || g.nB > kDimCap)
        throw CapacityError("game: dimensions exceed the matrix cap");
    const json& rows = need(j, "matrix", "game");
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != g.nA)
        schema_fail("game: matrix must have nA rows");
    g.matrix.resize(g.nA, g.nB);
    for (Eigen::Index i = 0; i < g.nA; ++i) {
        if (!rows[i].is_array() || static_cast<Eigen::Index>(rows[i].size()) != g.nB)
            schema_fail("game: each matrix row must have nB entries");
        for (Eigen::Index c = 0; c < g.nB; ++c) g.matrix(i, c) = need_finite(rows[i][c], "game");
    }
    if (j.contains("labels")) {
        const json& labels = j.at("labels");
        if (labels.contains("alice"))
            g.aliceLabels = labels.at("alice").get<std::vector<std::string>>();
        if (labels.contains("bob"))
            g.bobLabels = labels.at("bob").get<std::vector<std::string>>();
    }
    check_schema([&] { g.validate(); }, "game");
    return g;
}

json vector_strategy_to_json(const VectorStrategy& v) {
    auto vecs = [](const std::vector<RVec>& list) {
        json out = json::array();
        for (const RVec& x : list) {
            json row = json::array();
            for (Eigen::Index k = 0; k < x.size(); ++k) row.push_back(x(k));
            out.push_back(row);
        }
        return out;
    };
    return json{{"r", v.r},
                {"xs", vecs(v.xs)},
                {"ys", vecs(v.ys)},
                {"objective", v.objective},
                {"converged", v.converged}};
}

VectorStrategy vector_strategy_from_json(const json& j) {
    VectorStrategy v;
    v.r = need(j, "r", "vector strategy").get<Eigen::Index>();
    auto parse = [&](const json& arr, const char* where) {
        std::vector<RVec> out;
        if (!arr.is_array() || arr.empty()) schema_fail(std::string(where) + ": empty list");
        for (const json& row : arr) {
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != v.r)
                schema_fail(std::string(where) + ": vector dimension must equal r");
            RVec x(v.r);
            for (Eigen::Index k = 0; k < v.r; ++k) x(k) = need_finite(row[k], where);
            out.push_back(std::move(x));
        }
        return out;
    };
    v.xs = parse(need(j, "xs", "vector strategy"), "vector strategy xs");
    v.ys = parse(need(j, "ys", "vector strategy"), "vector strategy ys");
    v.objective = need_finite(need(j, "objective", "vector strategy"), "vector strategy");
    if (j.contains("converged")) v.converged = j.at("converged").get<bool>();
    check_schema([&] { v.validate(); }, "vector strategy");
    return v;
}

json strategy_to_json(const QuantumStrategy& s) {
    json alice = json::array(), bob = json::array();
    for (const CMat& a : s.aliceObs) alice.push_back(matrix_to_json(a));
    for (const CMat& b : s.bobObs) bob.push_back(matrix_to_json(b));
    return json{{"dimA", s.dimA()},
                {"dimB", s.dimB()},
                {"aliceObs", alice},
                {"bobObs", bob},
                {"state", state_to_json(s.state)}};
}

QuantumStrategy strategy_from_json(const json& j) {
    QuantumStrategy s;
    s.state = state_from_json(need(j, "state", "strategy"));
    const auto dimA = need(j, "dimA", "strategy").get<Eigen::Index>();
    const auto dimB = need(j, "dimB", "strategy").get<Eigen::Index>();
    if (dimA != s.state.dimA || dimB != s.state.dimB)
        schema_fail("strategy: dimA/dimB must match the state");
    for (const json& a : need(j, "aliceObs", "strategy")) s.aliceObs.push_back(matrix_from_json(a));
    for (const json& b : need(j, "bobObs", "strategy")) s.bobObs.push_back(matrix_from_json(b));
    check_schema([&] { s.validate(); }, "strategy");
    return s;
}

json simulation_to_json(const SimulationResult& r) {
    return json{{"empiricalSuccess", r.empiricalSuccess},
                {"stderr", r.stderrEstimate},
                {"rounds", r.rounds},
                {"wins", r.wins}};
}

json report_to_json(const RigidityReport& r) {
    json pairs = json::array();
    for (const auto& p : r.pairs)
        pairs.push_back(json{{"i", p.i},
                             {"j", p.j},
                             {"bias", p.bias},
                             {"epsilon", p.epsilon},
                             {"aliceAnticomm", p.aliceAnticomm},
                             {"bobAnticomm", p.bobAnticomm},
                             {"crossAi", p.crossAi},
                             {"crossAj", p.crossAj}});
    return json{{"n", r.n},
                {"bias", r.bias},
                {"epsilon", r.epsilon},
                {"pairs", pairs},
                {"averages",
                 json{{"pairEpsilon", r.meanPairEpsilon},
                      {"aliceAnticomm", r.meanAliceAnticomm},
                      {"bobAnticomm", r.meanBobAnticomm},
                      {"cross", r.meanCross},
                      {"anticomm", r.meanAnticomm}}}};
}

json certificate_to_json(const EntropyCertificate& c) {
    return json{{"entropyBits", c.entropyBits},
                {"r", c.r},
                {"delta", c.delta},
                {"fannesLowerBound", c.fannesLowerBound},
                {"eta", c.eta},
                {"maxConsistency", c.maxConsistency},
                {"epsilon", c.epsilon},
                {"subset", c.subset}};
}

std::string rounding_csv(const RoundingSweep& sweep) {
    std::ostringstream out;
    out << "trial,alpha,objective,resamples\n";
    for (const RoundingOutcome& o : sweep.outcomes)
        out << o.trial << ',' << format17(o.alpha) << ',' << format17(o.objective) << ','
            << o.resamples << '\n';
    return out.str();
}

std::string matrix_csv(const RMat& m) {
    std::ostringstream out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format17(m(i, j));
        }
        out << '\n';
    }
    return out.str();
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) schema_fail("cannot open input file: " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) schema_fail("invalid JSON in " + path);
    return j;
}

void save_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open output file: " + path);
    out << j.dump(2) << '\n';
}

void save_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open output file: " + path);
    out << text;
}

std::string file_hash_hex(const std::vector<std::string>& paths) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](unsigned char c) {
        h ^= c;
        h *= 0x100000001b3ULL;
    };
    for (const std::string& path : paths) {
        std::ifstream in(path, std::ios::binary);
        if (!in) schema_fail("cannot open input file: " + path);
        char c;
        while (in.get(c)) mix(static_cast<unsigned char>(c));
        mix(0);
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace xorgames
