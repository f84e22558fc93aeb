#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "fpgames/benchmarks.hpp"
#include "fpgames/exact_solver.hpp"
#include "fpgames/negotiation.hpp"
#include "fpgames/tracking.hpp"

namespace fpgames {

// Shortest representation that parses back to the identical double.
std::string format_double(double value);

// Writes via a sibling temporary file plus rename, so readers never observe
// a partially written file. Creates parent directories as needed.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

// JSON (de)serialization; round-trips are value-exact.
void to_json(nlohmann::json& j, const VtaInstance& instance);
void from_json(const nlohmann::json& j, VtaInstance& instance);
void to_json(nlohmann::json& j, const DisasterInstance& instance);
void from_json(const nlohmann::json& j, DisasterInstance& instance);
void to_json(nlohmann::json& j, const AllocationSolution& solution);
void from_json(const nlohmann::json& j, AllocationSolution& solution);

// Negotiation trace as CSV: a `# config=<json>` header line, then one row
// per step with the joint action, the global utility, the tracked joint
// probability when present, and per-pair forgetting factors when recorded.
std::string trace_csv(const NegotiationTrace& trace, int num_players,
                      const nlohmann::json& config);

// Tracking run as CSV: step, scripted probability, estimate, forgetting
// factor (empty column for estimators without one).
std::string tracking_csv(const TrackingResult& result,
                         const nlohmann::json& config);

// Sweep MSE matrix as CSV: one row per learning rate, one column per
// initial lambda.
std::string sweep_csv(const SweepGrid& grid, const SweepResult& result,
                      const nlohmann::json& config);

}  // namespace fpgames
