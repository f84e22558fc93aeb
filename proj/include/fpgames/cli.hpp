#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fpgames/benchmarks.hpp"
#include "fpgames/exact_solver.hpp"
#include "fpgames/negotiation.hpp"

namespace fpgames {

// Exit codes for failures past argument parsing (CLI11 reports its own
// nonzero codes for malformed command lines).
inline constexpr int kExitSchemaError = 3;  // bad config file contents
inline constexpr int kExitIoError = 4;      // unreadable input or unwritable output
inline constexpr int kExitRunError = 5;     // an experiment failed mid-run

// Entry point behind the binary; takes argv so tests can drive it directly.
int run_cli(int argc, const char* const* argv);

// ---------------------------------------------------------------------------
// Experiment drivers shared by the CLI and the acceptance suite.

struct VtaExperimentConfig {
  int instances = 30;
  int steps = 100;
  int vehicles = 30;
  int targets = 30;
  double temperature = 1.0;
  double geometric_step = 0.1;
  double learning_rate = 1e-4;
  double initial_lambda = 0.8;
  LambdaBounds lambda_bounds{};
  std::uint64_t seed = 1;
  int threads = 1;
};

struct VtaExperimentResult {
  // Mean over instances of the normalized global score per step; the
  // normalizer is each instance's best score observed by either algorithm.
  std::vector<double> mean_series_afffp;
  std::vector<double> mean_series_geometric;
  double final_afffp = 0.0;
  double final_geometric = 0.0;
  // Median over instances of the first step reaching 95% of that
  // instance's own final score.
  double median_steps_afffp = 0.0;
  double median_steps_geometric = 0.0;
};

// Runs AFFFP and geometric fictitious play over the same instances with the
// same episode seeds, so the comparison is paired.
VtaExperimentResult run_vta_experiment(const VtaExperimentConfig& config);

struct DisasterExperimentConfig {
  int ambulances = 10;
  int incidents = 3;
  int trials = 50;
  int steps = 200;
  double temperature = 0.01;
  double geometric_step = 0.1;
  double learning_rate = 1e-4;
  double initial_lambda = 0.8;
  LambdaBounds lambda_bounds{};
  std::uint64_t seed = 1;
  int threads = 1;
  bool run_geometric = true;
};

struct DisasterCutMetrics {
  int cut_step = 0;
  double percent_complete = 0.0;  // 100 if every incident is covered, else 0
  double percent_saved = 0.0;     // casualty demand covered, percent
  double optimality_ratio = 0.0;  // u_g(negotiated) / u_g(optimal), both <= 0
};

// Metrics for one trial: the negotiated assignment at each cut step is
// scored against the instance and the exact optimum.
std::vector<DisasterCutMetrics> disaster_cut_metrics(
    const DisasterInstance& instance, const NegotiationTrace& trace,
    const AllocationSolution& optimal, const std::vector<int>& cut_steps);

struct DisasterExperimentResult {
  std::vector<int> cuts;
  // Mean over trials of the per-trial cut metrics, keyed by algorithm name.
  std::map<std::string, std::vector<DisasterCutMetrics>> by_algorithm;
  std::vector<DisasterInstance> instances;
  std::vector<AllocationSolution> solutions;
};

// Generates one instance per trial, solves it exactly once, and negotiates
// with AFFFP (and geometric fictitious play unless disabled) from the same
// episode seeds.
DisasterExperimentResult run_disaster_experiment(
    const DisasterExperimentConfig& config);

}  // namespace fpgames
