#include "fpgames/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "fpgames/errors.hpp"

namespace fpgames {

std::string format_double(double value) {
  // 17 significant digits always round-trip; trim to fewer when they already
  // parse back exactly.
  char buffer[64];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buffer, sizeof(buffer), "%.*g", precision, value);
    if (std::strtod(buffer, nullptr) == value) break;
  }
  return buffer;
}

void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content) {
  std::error_code ec;
  const std::filesystem::path parent = path.parent_path();
  if (!parent.empty()) {
    std::filesystem::create_directories(parent, ec);
    if (ec)
      throw IoError("cannot create " + parent.string() + ": " + ec.message());
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename to " + path.string() + ": " + ec.message());
}

void to_json(nlohmann::json& j, const VtaInstance& instance) {
  nlohmann::json vehicles = nlohmann::json::array();
  for (const Point& p : instance.vehicles) vehicles.push_back({p.x, p.y});
  nlohmann::json targets = nlohmann::json::array();
  for (const Point& p : instance.targets) targets.push_back({p.x, p.y});
  j = {{"vehicles", vehicles},
       {"targets", targets},
       {"values", instance.values},
       {"kill_prob", instance.kill_prob}};
}

void from_json(const nlohmann::json& j, VtaInstance& instance) {
  instance = VtaInstance{};
  for (const auto& p : j.at("vehicles"))
    instance.vehicles.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  for (const auto& p : j.at("targets"))
    instance.targets.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  j.at("values").get_to(instance.values);
  j.at("kill_prob").get_to(instance.kill_prob);
}

void to_json(nlohmann::json& j, const DisasterInstance& instance) {
  j = {{"travel_time", instance.travel_time},
       {"capacity", instance.capacity},
       {"casualties", instance.casualties}};
}

void from_json(const nlohmann::json& j, DisasterInstance& instance) {
  instance = DisasterInstance{};
  j.at("travel_time").get_to(instance.travel_time);
  j.at("capacity").get_to(instance.capacity);
  j.at("casualties").get_to(instance.casualties);
}

void to_json(nlohmann::json& j, const AllocationSolution& solution) {
  j = {{"assignment", solution.assignment},
       {"objective", solution.objective},
       {"proof", solution.proof == SolveProof::kExhaustive ? "exhaustive"
                                                           : "bounded_search"}};
}

void from_json(const nlohmann::json& j, AllocationSolution& solution) {
  solution = AllocationSolution{};
  j.at("assignment").get_to(solution.assignment);
  j.at("objective").get_to(solution.objective);
  const std::string proof = j.at("proof").get<std::string>();
  if (proof == "exhaustive") {
    solution.proof = SolveProof::kExhaustive;
  } else if (proof == "bounded_search") {
    solution.proof = SolveProof::kBoundedSearch;
  } else {
    throw std::invalid_argument("unknown proof kind '" + proof + "'");
  }
}

std::string trace_csv(const NegotiationTrace& trace, int num_players,
                      const nlohmann::json& config) {
  std::string out = "# config=" + config.dump() + "\n";
  out += "step";
  for (int i = 0; i < num_players; ++i)
    out += ",action_" + std::to_string(i);
  out += ",global_utility";
  const bool tracked = !trace.tracked_probability.empty();
  if (tracked) out += ",tracked_probability";
  const bool lambdas = !trace.lambdas.empty();
  if (lambdas) {
    for (int i = 0; i < num_players; ++i)
      for (int k = 0; k < num_players; ++k)
        if (k != i)
          out += ",lambda_" + std::to_string(i) + "_" + std::to_string(k);
  }
  out += "\n";
  for (std::size_t t = 0; t < trace.joint_actions.size(); ++t) {
    out += std::to_string(t + 1);
    for (int a : trace.joint_actions[t]) out += "," + std::to_string(a);
    out += "," + format_double(trace.global_utilities[t]);
    if (tracked) out += "," + format_double(trace.tracked_probability[t]);
    if (lambdas)
      for (double l : trace.lambdas[t]) out += "," + format_double(l);
    out += "\n";
  }
  return out;
}

std::string tracking_csv(const TrackingResult& result,
                         const nlohmann::json& config) {
  std::string out = "# config=" + config.dump() + "\n";
  out += "step,true_prob,estimate,action,lambda\n";
  for (std::size_t t = 0; t < result.true_probs.size(); ++t) {
    out += std::to_string(t + 1);
    out += "," + format_double(result.true_probs[t]);
    out += "," + format_double(result.estimates[t]);
    out += "," + std::to_string(result.actions[t]);
    out += ",";
    if (t < result.lambdas.size()) out += format_double(result.lambdas[t]);
    out += "\n";
  }
  return out;
}

std::string sweep_csv(const SweepGrid& grid, const SweepResult& result,
                      const nlohmann::json& config) {
  std::string out = "# config=" + config.dump() + "\n";
  out += "learning_rate";
  for (double l : grid.initial_lambdas)
    out += ",lambda0_" + format_double(l);
  out += "\n";
  for (std::size_t r = 0; r < grid.learning_rates.size(); ++r) {
    out += format_double(grid.learning_rates[r]);
    for (double mse : result.mse[r]) out += "," + format_double(mse);
    out += "\n";
  }
  return out;
}

}  // namespace fpgames
