#pragma once

#include <json.hpp>
#include <string>

#include "xorgames/game.hpp"
#include "xorgames/rigidity.hpp"
#include "xorgames/rounding.hpp"
#include "xorgames/sdpsolve.hpp"

namespace xorgames {

using json = nlohmann::json;

// File schemas. Loaders re-check every type invariant and throw SchemaError
// (CLI exit 2) naming the failing field; writers emit deterministic key order.

json matrix_to_json(const CMat& m);
CMat matrix_from_json(const json& j);

json state_to_json(const BipartiteState& s);
BipartiteState state_from_json(const json& j);

json game_to_json(const XorGame& g);
XorGame game_from_json(const json& j);

json vector_strategy_to_json(const VectorStrategy& v);
VectorStrategy vector_strategy_from_json(const json& j);

json strategy_to_json(const QuantumStrategy& s);
QuantumStrategy strategy_from_json(const json& j);

json simulation_to_json(const SimulationResult& r);
json report_to_json(const RigidityReport& r);
json certificate_to_json(const EntropyCertificate& c);

// Per-trial CSV: "trial,alpha,objective,resamples" with 17 significant digits.
std::string rounding_csv(const RoundingSweep& sweep);

// Residual matrix as CSV rows (heatmap input).
std::string matrix_csv(const RMat& m);

json load_json(const std::string& path);
void save_json(const std::string& path, const json& j);
void save_text(const std::string& path, const std::string& text);

// FNV-1a over file bytes, hex-encoded; provenance for CLI outputs.
std::string file_hash_hex(const std::vector<std::string>& paths);

}  // namespace xorgames
