#include "fpgames/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "fpgames/errors.hpp"
#include "fpgames/io.hpp"
#include "fpgames/rng.hpp"
#include "fpgames/tracking.hpp"

namespace fpgames {

namespace {

using nlohmann::json;

// Stream tags for deriving per-instance and per-episode seeds.
constexpr std::uint64_t kVtaInstanceTag = 0x7674696e;       // "vtin"
constexpr std::uint64_t kDisasterInstanceTag = 0x6473696e;  // "dsin"
constexpr std::uint64_t kEpisodeTag = 0x657069;             // "epi"

// ---------------------------------------------------------------------------
// Small shared helpers

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// Runs body(i) for i in [0, count); failures carry the task index. Results
// must land in per-index slots so the thread count cannot change them.
void parallel_for(int count, int threads,
                  const std::function<void(int)>& body) {
  if (threads <= 0) threads = 1;
  std::vector<std::string> errors(count);
  auto run_range = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      try {
        body(i);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  if (threads == 1 || count <= 1) {
    run_range(0, count);
  } else {
    const int workers = std::min(threads, count);
    const int chunk = (count + workers - 1) / workers;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      const int begin = w * chunk;
      const int end = std::min(count, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(run_range, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  for (int i = 0; i < count; ++i)
    if (!errors[i].empty())
      throw RunError("task " + std::to_string(i) + ": " + errors[i]);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// First step (1-based) at which the series reaches the threshold; the series
// is known to reach it at its final step.
int first_step_reaching(const std::vector<double>& series, double threshold) {
  for (std::size_t t = 0; t < series.size(); ++t)
    if (series[t] >= threshold) return static_cast<int>(t) + 1;
  return static_cast<int>(series.size());
}

// Quarter points of the horizon, deduplicated and positive.
std::vector<int> quarter_cuts(int steps) {
  std::vector<int> cuts;
  for (int q = 1; q <= 4; ++q) {
    const int cut = steps * q / 4;
    if (cut >= 1 && (cuts.empty() || cut != cuts.back())) cuts.push_back(cut);
  }
  return cuts;
}

}  // namespace

// ---------------------------------------------------------------------------
// Experiment drivers

VtaExperimentResult run_vta_experiment(const VtaExperimentConfig& config) {
  if (config.instances <= 0)
    throw std::invalid_argument("instances must be positive");
  if (config.steps <= 0) throw std::invalid_argument("steps must be positive");

  struct PerInstance {
    std::vector<double> norm_afffp;
    std::vector<double> norm_geometric;
    double t95_afffp = 0.0;
    double t95_geometric = 0.0;
  };
  std::vector<PerInstance> results(config.instances);

  parallel_for(config.instances, config.threads, [&](int n) {
    const VtaInstance instance =
        generate_vta(stream_key({config.seed, kVtaInstanceTag,
                                 static_cast<std::uint64_t>(n)}),
                     config.vehicles, config.targets);
    const VtaModel model(instance);

    RunConfig rc;
    rc.steps = config.steps;
    rc.temperature = config.temperature;
    rc.geometric_step = config.geometric_step;
    rc.learning_rate = config.learning_rate;
    rc.initial_lambda = config.initial_lambda;
    rc.lambda_bounds = config.lambda_bounds;
    // Same episode seed for both algorithms: paired comparison.
    rc.seed = stream_key({config.seed, kEpisodeTag,
                          static_cast<std::uint64_t>(n)});

    rc.algorithm = Algorithm::kAfffp;
    const NegotiationTrace afffp = run_episode(model, rc);
    rc.algorithm = Algorithm::kGeometric;
    const NegotiationTrace geometric = run_episode(model, rc);

    // Normalize by the best score either algorithm saw on this instance.
    double best = 0.0;
    for (double u : afffp.global_utilities) best = std::max(best, u);
    for (double u : geometric.global_utilities) best = std::max(best, u);
    if (best <= 0.0) best = 1.0;

    PerInstance& r = results[n];
    r.norm_afffp.reserve(config.steps);
    r.norm_geometric.reserve(config.steps);
    for (double u : afffp.global_utilities) r.norm_afffp.push_back(u / best);
    for (double u : geometric.global_utilities)
      r.norm_geometric.push_back(u / best);
    r.t95_afffp = first_step_reaching(
        afffp.global_utilities, 0.95 * afffp.global_utilities.back());
    r.t95_geometric = first_step_reaching(
        geometric.global_utilities, 0.95 * geometric.global_utilities.back());
  });

  VtaExperimentResult out;
  out.mean_series_afffp.assign(config.steps, 0.0);
  out.mean_series_geometric.assign(config.steps, 0.0);
  std::vector<double> t95_afffp, t95_geometric;
  for (const PerInstance& r : results) {
    for (int t = 0; t < config.steps; ++t) {
      out.mean_series_afffp[t] += r.norm_afffp[t];
      out.mean_series_geometric[t] += r.norm_geometric[t];
    }
    t95_afffp.push_back(r.t95_afffp);
    t95_geometric.push_back(r.t95_geometric);
  }
  for (double& v : out.mean_series_afffp) v /= config.instances;
  for (double& v : out.mean_series_geometric) v /= config.instances;
  out.final_afffp = out.mean_series_afffp.back();
  out.final_geometric = out.mean_series_geometric.back();
  out.median_steps_afffp = median(std::move(t95_afffp));
  out.median_steps_geometric = median(std::move(t95_geometric));
  return out;
}

std::vector<DisasterCutMetrics> disaster_cut_metrics(
    const DisasterInstance& instance, const NegotiationTrace& trace,
    const AllocationSolution& optimal, const std::vector<int>& cut_steps) {
  const int num_incidents = instance.num_incidents();
  const int total_demand = instance.total_casualties();
  if (total_demand <= 0)
    throw std::invalid_argument("instance has no casualty demand");

  std::vector<DisasterCutMetrics> metrics;
  for (int cut : cut_steps) {
    if (cut < 1 || cut > static_cast<int>(trace.joint_actions.size()))
      throw std::out_of_range("cut step outside the trace");
    const JointAction& joint = trace.joint_actions[cut - 1];

    std::vector<int> covered(num_incidents, 0);
    for (int i = 0; i < instance.num_ambulances(); ++i)
      covered[joint[i]] += instance.capacity[i];
    bool complete = true;
    int saved = 0;
    for (int j = 0; j < num_incidents; ++j) {
      if (covered[j] < instance.casualties[j]) complete = false;
      saved += std::min(instance.casualties[j], covered[j]);
    }

    DisasterCutMetrics m;
    m.cut_step = cut;
    // A trial counts as complete only when every incident is fully covered;
    // the experiment-level mean over trials is then the fraction of trials
    // in which everyone was rescued.
    m.percent_complete = complete ? 100.0 : 0.0;
    m.percent_saved = 100.0 * saved / total_demand;
    const double negotiated = disaster_global_utility(instance, joint);
    // Both objectives are <= 0; a ratio above one means the negotiated
    // assignment is worse than the optimum.
    m.optimality_ratio = optimal.objective == 0.0
                             ? (negotiated == 0.0
                                    ? 1.0
                                    : std::numeric_limits<double>::infinity())
                             : negotiated / optimal.objective;
    metrics.push_back(m);
  }
  return metrics;
}

DisasterExperimentResult run_disaster_experiment(
    const DisasterExperimentConfig& config) {
  if (config.trials <= 0)
    throw std::invalid_argument("trials must be positive");
  if (config.steps <= 0) throw std::invalid_argument("steps must be positive");

  const std::vector<int> cuts = quarter_cuts(config.steps);

  struct PerTrial {
    DisasterInstance instance;
    AllocationSolution solution;
    std::vector<DisasterCutMetrics> afffp;
    std::vector<DisasterCutMetrics> geometric;
  };
  std::vector<PerTrial> trials(config.trials);

  parallel_for(config.trials, config.threads, [&](int t) {
    PerTrial& trial = trials[t];
    trial.instance =
        generate_disaster(stream_key({config.seed, kDisasterInstanceTag,
                                      static_cast<std::uint64_t>(t)}),
                          config.ambulances, config.incidents);
    trial.solution = solve_exact(trial.instance);
    const DisasterModel model(trial.instance);

    RunConfig rc;
    rc.steps = config.steps;
    rc.temperature = config.temperature;
    rc.geometric_step = config.geometric_step;
    rc.learning_rate = config.learning_rate;
    rc.initial_lambda = config.initial_lambda;
    rc.lambda_bounds = config.lambda_bounds;
    rc.seed = stream_key({config.seed, kEpisodeTag,
                          static_cast<std::uint64_t>(t)});

    rc.algorithm = Algorithm::kAfffp;
    trial.afffp = disaster_cut_metrics(trial.instance, run_episode(model, rc),
                                       trial.solution, cuts);
    if (config.run_geometric) {
      rc.algorithm = Algorithm::kGeometric;
      trial.geometric = disaster_cut_metrics(
          trial.instance, run_episode(model, rc), trial.solution, cuts);
    }
  });

  DisasterExperimentResult out;
  out.cuts = cuts;
  auto aggregate = [&](auto member) {
    std::vector<DisasterCutMetrics> means(cuts.size());
    for (std::size_t c = 0; c < cuts.size(); ++c) {
      means[c].cut_step = cuts[c];
      for (const PerTrial& trial : trials) {
        const std::vector<DisasterCutMetrics>& m = trial.*member;
        means[c].percent_complete += m[c].percent_complete;
        means[c].percent_saved += m[c].percent_saved;
        means[c].optimality_ratio += m[c].optimality_ratio;
      }
      means[c].percent_complete /= config.trials;
      means[c].percent_saved /= config.trials;
      means[c].optimality_ratio /= config.trials;
    }
    return means;
  };
  out.by_algorithm["afffp"] = aggregate(&PerTrial::afffp);
  if (config.run_geometric)
    out.by_algorithm["geometric"] = aggregate(&PerTrial::geometric);
  for (PerTrial& trial : trials) {
    out.instances.push_back(std::move(trial.instance));
    out.solutions.push_back(std::move(trial.solution));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Config overlay: values from --config fill in every option the command line
// left at its default. Unknown keys and type mismatches are schema errors,
// raised before any experiment work starts.

namespace {

class ConfigOverlay {
 public:
  ConfigOverlay(const CLI::App& sub, json config)
      : sub_(sub), config_(std::move(config)) {
    if (!config_.is_object())
      throw SchemaError("config file must hold a JSON object");
  }

  template <typename T>
  void apply(const std::string& key, T& field) {
    known_.insert(key);
    if (!config_.contains(key)) return;
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    const CLI::Option* option = sub_.get_option_no_throw(flag);
    if (option != nullptr && option->count() > 0) return;  // flag wins
    try {
      field = config_.at(key).get<T>();
    } catch (const json::exception&) {
      throw SchemaError("config key '" + key + "' has the wrong type");
    }
  }

  void finish() const {
    for (const auto& item : config_.items())
      if (!known_.contains(item.key()))
        throw SchemaError("config key '" + item.key() +
                          "' is not an option of this subcommand");
  }

 private:
  const CLI::App& sub_;
  json config_;
  std::set<std::string> known_;
};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw SchemaError("config file " + path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Subcommand parameter blocks. Each handler applies the config overlay,
// emits the effective config (the exact values the run used), runs, and
// writes outputs atomically.

struct TrackParams {
  std::string config_path;
  std::string out = "out-track";
  std::string estimator = "afffp";
  std::string opponent = "drift";
  double period = 1000.0;
  int horizon = 1000;
  double geometric_step = 0.1;
  double learning_rate = 1e-4;
  double initial_lambda = 0.8;
  double lambda_lo = 0.001;
  double lambda_hi = 0.999;
  std::uint64_t seed = 1;
  int rep = 0;
};

ScriptedOpponent make_opponent(const std::string& kind, double period,
                               int horizon) {
  if (kind == "drift") return ScriptedOpponent::drift(period, horizon);
  if (kind == "jump") {
    // Square schedule over the horizon quarters: action 0 certain in the
    // first and last quarter, absent in the middle half.
    return ScriptedOpponent::jump({{1, 1.0},
                                   {horizon / 4 + 1, 0.0},
                                   {3 * horizon / 4 + 1, 1.0}},
                                  horizon);
  }
  throw std::invalid_argument("unknown opponent '" + kind + "'");
}

EstimatorConfig make_estimator(const TrackParams& p) {
  EstimatorConfig config;
  if (p.estimator == "classic") {
    config.kind = EstimatorConfig::Kind::kClassic;
  } else if (p.estimator == "geometric") {
    config.kind = EstimatorConfig::Kind::kGeometric;
  } else if (p.estimator == "afffp") {
    config.kind = EstimatorConfig::Kind::kAfffp;
  } else {
    throw std::invalid_argument("unknown estimator '" + p.estimator + "'");
  }
  config.geometric_step = p.geometric_step;
  config.learning_rate = p.learning_rate;
  config.initial_lambda = p.initial_lambda;
  config.lambda_bounds = {p.lambda_lo, p.lambda_hi};
  return config;
}

void handle_track(const CLI::App& sub, TrackParams& p) {
  ConfigOverlay overlay(sub, load_config(p.config_path));
  overlay.apply("estimator", p.estimator);
  overlay.apply("opponent", p.opponent);
  overlay.apply("period", p.period);
  overlay.apply("horizon", p.horizon);
  overlay.apply("geometric_step", p.geometric_step);
  overlay.apply("learning_rate", p.learning_rate);
  overlay.apply("initial_lambda", p.initial_lambda);
  overlay.apply("lambda_lo", p.lambda_lo);
  overlay.apply("lambda_hi", p.lambda_hi);
  overlay.apply("seed", p.seed);
  overlay.apply("rep", p.rep);
  overlay.finish();

  const json config = {{"estimator", p.estimator},
                       {"opponent", p.opponent},
                       {"period", p.period},
                       {"horizon", p.horizon},
                       {"geometric_step", p.geometric_step},
                       {"learning_rate", p.learning_rate},
                       {"initial_lambda", p.initial_lambda},
                       {"lambda_lo", p.lambda_lo},
                       {"lambda_hi", p.lambda_hi},
                       {"seed", p.seed},
                       {"rep", p.rep}};

  const ScriptedOpponent opponent =
      make_opponent(p.opponent, p.period, p.horizon);
  const TrackingResult result =
      run_tracking(opponent, make_estimator(p), p.seed, p.rep);

  const std::filesystem::path out(p.out);
  write_file_atomic(out / "config.json", config.dump(2) + "\n");
  write_file_atomic(out / "series.csv", tracking_csv(result, config));
  const json summary = {{"config", config}, {"mse", result.mse}};
  write_file_atomic(out / "summary.json", summary.dump(2) + "\n");
  std::cout << "mse " << format_double(result.mse) << "\n";
}

struct SweepParams {
  std::string config_path;
  std::string out = "out-sweep";
  int rate_points = 26;
  int lambda_points = 19;
  int repetitions = 100;
  double period = 1000.0;
  int horizon = 1000;
  std::uint64_t seed = 1;
  int threads = 1;
};

void handle_sweep(const CLI::App& sub, SweepParams& p) {
  ConfigOverlay overlay(sub, load_config(p.config_path));
  overlay.apply("rate_points", p.rate_points);
  overlay.apply("lambda_points", p.lambda_points);
  overlay.apply("repetitions", p.repetitions);
  overlay.apply("period", p.period);
  overlay.apply("horizon", p.horizon);
  overlay.apply("seed", p.seed);
  overlay.apply("threads", p.threads);
  overlay.finish();

  const json config = {{"rate_points", p.rate_points},
                       {"lambda_points", p.lambda_points},
                       {"repetitions", p.repetitions},
                       {"period", p.period},
                       {"horizon", p.horizon},
                       {"seed", p.seed},
                       {"threads", p.threads}};

  const SweepGrid grid =
      SweepGrid::log_spaced(p.rate_points, p.lambda_points, p.repetitions);
  const ScriptedOpponent opponent =
      ScriptedOpponent::drift(p.period, p.horizon);
  const SweepResult result = run_sweep(grid, opponent, p.seed, p.threads);

  const std::filesystem::path out(p.out);
  write_file_atomic(out / "config.json", config.dump(2) + "\n");
  write_file_atomic(out / "mse.csv", sweep_csv(grid, result, config));
  const json summary = {
      {"config", config},
      {"best_learning_rate", grid.learning_rates[result.best_rate_index]},
      {"best_initial_lambda", grid.initial_lambdas[result.best_lambda_index]},
      {"best_mse", result.mse[result.best_rate_index][result.best_lambda_index]}};
  write_file_atomic(out / "summary.json", summary.dump(2) + "\n");
  std::cout << "best mse "
            << format_double(
                   result.mse[result.best_rate_index][result.best_lambda_index])
            << " at learning_rate "
            << format_double(grid.learning_rates[result.best_rate_index])
            << " initial_lambda "
            << format_double(grid.initial_lambdas[result.best_lambda_index])
            << "\n";
}

struct ClimbingParams {
  std::string config_path;
  std::string out = "out-climbing";
  std::string algorithm = "afffp";
  int steps = 1000;
  int replications = 200;
  double temperature = 1.0;
  double geometric_step = 0.1;
  double learning_rate = 1e-4;
  double initial_lambda = 0.8;
  double lambda_lo = 0.001;
  double lambda_hi = 0.999;
  std::uint64_t seed = 1;
  int threads = 1;
  bool trace = false;
};

RunConfig negotiation_config(const std::string& algorithm, int steps,
                             double temperature, double geometric_step,
                             double learning_rate, double initial_lambda,
                             double lambda_lo, double lambda_hi,
                             std::uint64_t seed) {
  RunConfig rc;
  rc.algorithm = parse_algorithm(algorithm);
  rc.steps = steps;
  rc.temperature = temperature;
  rc.geometric_step = geometric_step;
  rc.learning_rate = learning_rate;
  rc.initial_lambda = initial_lambda;
  rc.lambda_bounds = {lambda_lo, lambda_hi};
  rc.seed = seed;
  return rc;
}

void handle_climbing(const CLI::App& sub, ClimbingParams& p) {
  ConfigOverlay overlay(sub, load_config(p.config_path));
  overlay.apply("algorithm", p.algorithm);
  overlay.apply("steps", p.steps);
  overlay.apply("replications", p.replications);
  overlay.apply("temperature", p.temperature);
  overlay.apply("geometric_step", p.geometric_step);
  overlay.apply("learning_rate", p.learning_rate);
  overlay.apply("initial_lambda", p.initial_lambda);
  overlay.apply("lambda_lo", p.lambda_lo);
  overlay.apply("lambda_hi", p.lambda_hi);
  overlay.apply("seed", p.seed);
  overlay.apply("threads", p.threads);
  overlay.apply("trace", p.trace);
  overlay.finish();

  const json config = {{"algorithm", p.algorithm},
                       {"steps", p.steps},
                       {"replications", p.replications},
                       {"temperature", p.temperature},
                       {"geometric_step", p.geometric_step},
                       {"learning_rate", p.learning_rate},
                       {"initial_lambda", p.initial_lambda},
                       {"lambda_lo", p.lambda_lo},
                       {"lambda_hi", p.lambda_hi},
                       {"seed", p.seed},
                       {"threads", p.threads},
                       {"trace", p.trace}};

  const MatrixGameModel model(climbing_hill_game(), climbing_hill_payoff);
  const RunConfig rc = negotiation_config(
      p.algorithm, p.steps, p.temperature, p.geometric_step, p.learning_rate,
      p.initial_lambda, p.lambda_lo, p.lambda_hi, p.seed);
  const ReplicationSummary summary =
      run_replications(model, rc, p.replications, p.threads);

  const std::filesystem::path out(p.out);
  write_file_atomic(out / "config.json", config.dump(2) + "\n");
  const json summary_json = {{"config", config},
                             {"overall_mean", summary.overall_mean},
                             {"overall_stddev", summary.overall_stddev},
                             {"mean_payoffs", summary.mean_payoffs}};
  write_file_atomic(out / "summary.json", summary_json.dump(2) + "\n");

  if (p.trace) {
    RunConfig trace_config = rc;  // replication 0 seed: rc.seed ^ 0
    trace_config.record_lambdas = true;
    trace_config.tracked_joint = climbing_hill_equilibrium();
    const NegotiationTrace trace = run_episode(model, trace_config);
    write_file_atomic(out / "trace.csv",
                      trace_csv(trace, model.num_players(), config));
  }
  std::cout << "mean payoff " << format_double(summary.overall_mean) << "\n";
}

struct VtaParams {
  std::string config_path;
  std::string out = "out-vta";
  int instances = 30;
  int steps = 100;
  int vehicles = 30;
  int targets = 30;
  double temperature = 1.0;
  double geometric_step = 0.1;
  double learning_rate = 1e-4;
  double initial_lambda = 0.8;
  double lambda_lo = 0.001;
  double lambda_hi = 0.999;
  std::uint64_t seed = 1;
  int threads = 1;
};

void handle_vta(const CLI::App& sub, VtaParams& p) {
  ConfigOverlay overlay(sub, load_config(p.config_path));
  overlay.apply("instances", p.instances);
  overlay.apply("steps", p.steps);
  overlay.apply("vehicles", p.vehicles);
  overlay.apply("targets", p.targets);
  overlay.apply("temperature", p.temperature);
  overlay.apply("geometric_step", p.geometric_step);
  overlay.apply("learning_rate", p.learning_rate);
  overlay.apply("initial_lambda", p.initial_lambda);
  overlay.apply("lambda_lo", p.lambda_lo);
  overlay.apply("lambda_hi", p.lambda_hi);
  overlay.apply("seed", p.seed);
  overlay.apply("threads", p.threads);
  overlay.finish();

  const json config = {{"instances", p.instances},
                       {"steps", p.steps},
                       {"vehicles", p.vehicles},
                       {"targets", p.targets},
                       {"temperature", p.temperature},
                       {"geometric_step", p.geometric_step},
                       {"learning_rate", p.learning_rate},
                       {"initial_lambda", p.initial_lambda},
                       {"lambda_lo", p.lambda_lo},
                       {"lambda_hi", p.lambda_hi},
                       {"seed", p.seed},
                       {"threads", p.threads}};

  VtaExperimentConfig ec;
  ec.instances = p.instances;
  ec.steps = p.steps;
  ec.vehicles = p.vehicles;
  ec.targets = p.targets;
  ec.temperature = p.temperature;
  ec.geometric_step = p.geometric_step;
  ec.learning_rate = p.learning_rate;
  ec.initial_lambda = p.initial_lambda;
  ec.lambda_bounds = {p.lambda_lo, p.lambda_hi};
  ec.seed = p.seed;
  ec.threads = p.threads;
  const VtaExperimentResult result = run_vta_experiment(ec);

  const std::filesystem::path out(p.out);
  write_file_atomic(out / "config.json", config.dump(2) + "\n");
  std::string csv = "# config=" + config.dump() + "\n";
  csv += "step,afffp,geometric\n";
  for (int t = 0; t < p.steps; ++t) {
    csv += std::to_string(t + 1);
    csv += "," + format_double(result.mean_series_afffp[t]);
    csv += "," + format_double(result.mean_series_geometric[t]);
    csv += "\n";
  }
  write_file_atomic(out / "series.csv", csv);
  const json summary = {
      {"config", config},
      {"final_afffp", result.final_afffp},
      {"final_geometric", result.final_geometric},
      {"median_steps_afffp", result.median_steps_afffp},
      {"median_steps_geometric", result.median_steps_geometric}};
  write_file_atomic(out / "summary.json", summary.dump(2) + "\n");
  std::cout << "final normalized score afffp "
            << format_double(result.final_afffp) << " geometric "
            << format_double(result.final_geometric) << "\n";
}

struct DisasterParams {
  std::string config_path;
  std::string out = "out-disaster";
  int ambulances = 10;
  int incidents = 3;
  int trials = 50;
  int steps = 200;
  double temperature = 0.01;
  double geometric_step = 0.1;
  double learning_rate = 1e-4;
  double initial_lambda = 0.8;
  double lambda_lo = 0.001;
  double lambda_hi = 0.999;
  std::uint64_t seed = 1;
  int threads = 1;
  bool dump_instances = false;
};

void handle_disaster(const CLI::App& sub, DisasterParams& p) {
  ConfigOverlay overlay(sub, load_config(p.config_path));
  overlay.apply("ambulances", p.ambulances);
  overlay.apply("incidents", p.incidents);
  overlay.apply("trials", p.trials);
  overlay.apply("steps", p.steps);
  overlay.apply("temperature", p.temperature);
  overlay.apply("geometric_step", p.geometric_step);
  overlay.apply("learning_rate", p.learning_rate);
  overlay.apply("initial_lambda", p.initial_lambda);
  overlay.apply("lambda_lo", p.lambda_lo);
  overlay.apply("lambda_hi", p.lambda_hi);
  overlay.apply("seed", p.seed);
  overlay.apply("threads", p.threads);
  overlay.apply("dump_instances", p.dump_instances);
  overlay.finish();

  const json config = {{"ambulances", p.ambulances},
                       {"incidents", p.incidents},
                       {"trials", p.trials},
                       {"steps", p.steps},
                       {"temperature", p.temperature},
                       {"geometric_step", p.geometric_step},
                       {"learning_rate", p.learning_rate},
                       {"initial_lambda", p.initial_lambda},
                       {"lambda_lo", p.lambda_lo},
                       {"lambda_hi", p.lambda_hi},
                       {"seed", p.seed},
                       {"threads", p.threads},
                       {"dump_instances", p.dump_instances}};

  DisasterExperimentConfig ec;
  ec.ambulances = p.ambulances;
  ec.incidents = p.incidents;
  ec.trials = p.trials;
  ec.steps = p.steps;
  ec.temperature = p.temperature;
  ec.geometric_step = p.geometric_step;
  ec.learning_rate = p.learning_rate;
  ec.initial_lambda = p.initial_lambda;
  ec.lambda_bounds = {p.lambda_lo, p.lambda_hi};
  ec.seed = p.seed;
  ec.threads = p.threads;
  const DisasterExperimentResult result = run_disaster_experiment(ec);

  const std::filesystem::path out(p.out);
  write_file_atomic(out / "config.json", config.dump(2) + "\n");
  json metrics = {{"config", config}, {"cuts", result.cuts}};
  for (const auto& [name, cuts] : result.by_algorithm) {
    json rows = json::array();
    for (const DisasterCutMetrics& m : cuts)
      rows.push_back({{"cut_step", m.cut_step},
                      {"percent_complete", m.percent_complete},
                      {"percent_saved", m.percent_saved},
                      {"optimality_ratio", m.optimality_ratio}});
    metrics["algorithms"][name] = rows;
  }
  write_file_atomic(out / "metrics.json", metrics.dump(2) + "\n");

  if (p.dump_instances) {
    for (int t = 0; t < p.trials; ++t) {
      char name[64];
      std::snprintf(name, sizeof(name), "instance_%03d.json", t);
      write_file_atomic(out / "instances" / name,
                        json(result.instances[t]).dump(2) + "\n");
      std::snprintf(name, sizeof(name), "solution_%03d.json", t);
      write_file_atomic(out / "instances" / name,
                        json(result.solutions[t]).dump(2) + "\n");
    }
  }

  const auto& final_afffp = result.by_algorithm.at("afffp").back();
  std::cout << "afffp at step " << final_afffp.cut_step << ": complete "
            << format_double(final_afffp.percent_complete) << "% saved "
            << format_double(final_afffp.percent_saved) << "% ratio "
            << format_double(final_afffp.optimality_ratio) << "\n";
}

struct SolveParams {
  std::string config_path;
  std::string instance_path;
  std::string out = "out-solve";
};

void handle_solve(const CLI::App& sub, SolveParams& p) {
  ConfigOverlay overlay(sub, load_config(p.config_path));
  overlay.apply("instance", p.instance_path);
  overlay.finish();
  if (p.instance_path.empty())
    throw SchemaError("solve needs --instance <file>");

  DisasterInstance instance;
  try {
    json::parse(read_file(p.instance_path)).get_to(instance);
  } catch (const json::exception& e) {
    throw SchemaError("instance file " + p.instance_path + ": " + e.what());
  }

  const AllocationSolution solution = solve_exact(instance);
  const json config = {{"instance", p.instance_path}};
  const std::filesystem::path out(p.out);
  json solution_json(solution);
  solution_json["config"] = config;
  write_file_atomic(out / "solution.json", solution_json.dump(2) + "\n");
  std::cout << "objective " << format_double(solution.objective) << "\n";
}

}  // namespace

// ---------------------------------------------------------------------------

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Fictitious-play negotiation and tracking experiments"};
  app.require_subcommand(1);

  TrackParams track;
  CLI::App* track_cmd = app.add_subcommand(
      "track", "Track a scripted opponent with one belief estimator");
  track_cmd->add_option("--config", track.config_path,
                        "JSON file with option defaults");
  track_cmd->add_option("--out", track.out, "Output directory");
  track_cmd->add_option("--estimator", track.estimator,
                        "classic, geometric, or afffp");
  track_cmd->add_option("--opponent", track.opponent, "drift or jump");
  track_cmd->add_option("--period", track.period, "Drift period in steps");
  track_cmd->add_option("--horizon", track.horizon, "Steps per run");
  track_cmd->add_option("--geometric-step", track.geometric_step,
                        "Geometric estimator step size");
  track_cmd->add_option("--learning-rate", track.learning_rate,
                        "AFFFP lambda learning rate");
  track_cmd->add_option("--initial-lambda", track.initial_lambda,
                        "AFFFP initial forgetting factor");
  track_cmd->add_option("--lambda-lo", track.lambda_lo,
                        "Lower clamp for lambda");
  track_cmd->add_option("--lambda-hi", track.lambda_hi,
                        "Upper clamp for lambda");
  track_cmd->add_option("--seed", track.seed, "Master seed");
  track_cmd->add_option("--rep", track.rep,
                        "Repetition index (selects the action stream)");
  track_cmd->callback([track_cmd, &track] { handle_track(*track_cmd, track); });

  SweepParams sweep;
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "MSE grid over AFFFP learning rate and initial lambda");
  sweep_cmd->add_option("--config", sweep.config_path,
                        "JSON file with option defaults");
  sweep_cmd->add_option("--out", sweep.out, "Output directory");
  sweep_cmd->add_option("--rate-points", sweep.rate_points,
                        "Grid points along the learning-rate axis");
  sweep_cmd->add_option("--lambda-points", sweep.lambda_points,
                        "Grid points along the initial-lambda axis");
  sweep_cmd->add_option("--repetitions", sweep.repetitions,
                        "Runs averaged per cell");
  sweep_cmd->add_option("--period", sweep.period, "Drift period in steps");
  sweep_cmd->add_option("--horizon", sweep.horizon, "Steps per run");
  sweep_cmd->add_option("--seed", sweep.seed, "Master seed");
  sweep_cmd->add_option("--threads", sweep.threads, "Worker threads");
  sweep_cmd->callback([sweep_cmd, &sweep] { handle_sweep(*sweep_cmd, sweep); });

  ClimbingParams climbing;
  CLI::App* climbing_cmd = app.add_subcommand(
      "climbing", "Climbing-hill negotiation replications");
  climbing_cmd->add_option("--config", climbing.config_path,
                           "JSON file with option defaults");
  climbing_cmd->add_option("--out", climbing.out, "Output directory");
  climbing_cmd->add_option("--algorithm", climbing.algorithm,
                           "classic, stochastic, geometric, or afffp");
  climbing_cmd->add_option("--steps", climbing.steps, "Negotiation steps");
  climbing_cmd->add_option("--replications", climbing.replications,
                           "Independent replications");
  climbing_cmd->add_option("--temperature", climbing.temperature,
                           "Logit temperature");
  climbing_cmd->add_option("--geometric-step", climbing.geometric_step,
                           "Geometric belief step size");
  climbing_cmd->add_option("--learning-rate", climbing.learning_rate,
                           "AFFFP lambda learning rate");
  climbing_cmd->add_option("--initial-lambda", climbing.initial_lambda,
                           "AFFFP initial forgetting factor");
  climbing_cmd->add_option("--lambda-lo", climbing.lambda_lo,
                           "Lower clamp for lambda");
  climbing_cmd->add_option("--lambda-hi", climbing.lambda_hi,
                           "Upper clamp for lambda");
  climbing_cmd->add_option("--seed", climbing.seed, "Master seed");
  climbing_cmd->add_option("--threads", climbing.threads, "Worker threads");
  climbing_cmd->add_flag("--trace", climbing.trace,
                         "Write replication 0 as trace.csv");
  climbing_cmd->callback(
      [climbing_cmd, &climbing] { handle_climbing(*climbing_cmd, climbing); });

  VtaParams vta;
  CLI::App* vta_cmd = app.add_subcommand(
      "vta", "Vehicle-target assignment: AFFFP vs geometric");
  vta_cmd->add_option("--config", vta.config_path,
                      "JSON file with option defaults");
  vta_cmd->add_option("--out", vta.out, "Output directory");
  vta_cmd->add_option("--instances", vta.instances, "Random instances");
  vta_cmd->add_option("--steps", vta.steps, "Negotiation steps");
  vta_cmd->add_option("--vehicles", vta.vehicles, "Vehicles per instance");
  vta_cmd->add_option("--targets", vta.targets, "Targets per instance");
  vta_cmd->add_option("--temperature", vta.temperature, "Logit temperature");
  vta_cmd->add_option("--geometric-step", vta.geometric_step,
                      "Geometric belief step size");
  vta_cmd->add_option("--learning-rate", vta.learning_rate,
                      "AFFFP lambda learning rate");
  vta_cmd->add_option("--initial-lambda", vta.initial_lambda,
                      "AFFFP initial forgetting factor");
  vta_cmd->add_option("--lambda-lo", vta.lambda_lo, "Lower clamp for lambda");
  vta_cmd->add_option("--lambda-hi", vta.lambda_hi, "Upper clamp for lambda");
  vta_cmd->add_option("--seed", vta.seed, "Master seed");
  vta_cmd->add_option("--threads", vta.threads, "Worker threads");
  vta_cmd->callback([vta_cmd, &vta] { handle_vta(*vta_cmd, vta); });

  DisasterParams disaster;
  CLI::App* disaster_cmd = app.add_subcommand(
      "disaster", "Ambulance-incident allocation: AFFFP vs geometric, with "
                  "exact baseline");
  disaster_cmd->add_option("--config", disaster.config_path,
                           "JSON file with option defaults");
  disaster_cmd->add_option("--out", disaster.out, "Output directory");
  disaster_cmd->add_option("--ambulances", disaster.ambulances,
                           "Ambulances per instance");
  disaster_cmd->add_option("--incidents", disaster.incidents,
                           "Incidents per instance");
  disaster_cmd->add_option("--trials", disaster.trials, "Random trials");
  disaster_cmd->add_option("--steps", disaster.steps, "Negotiation steps");
  disaster_cmd->add_option("--temperature", disaster.temperature,
                           "Logit temperature");
  disaster_cmd->add_option("--geometric-step", disaster.geometric_step,
                           "Geometric belief step size");
  disaster_cmd->add_option("--learning-rate", disaster.learning_rate,
                           "AFFFP lambda learning rate");
  disaster_cmd->add_option("--initial-lambda", disaster.initial_lambda,
                           "AFFFP initial forgetting factor");
  disaster_cmd->add_option("--lambda-lo", disaster.lambda_lo,
                           "Lower clamp for lambda");
  disaster_cmd->add_option("--lambda-hi", disaster.lambda_hi,
                           "Upper clamp for lambda");
  disaster_cmd->add_option("--seed", disaster.seed, "Master seed");
  disaster_cmd->add_option("--threads", disaster.threads, "Worker threads");
  disaster_cmd->add_flag("--dump-instances", disaster.dump_instances,
                         "Write per-trial instances and exact solutions");
  disaster_cmd->callback(
      [disaster_cmd, &disaster] { handle_disaster(*disaster_cmd, disaster); });

  SolveParams solve;
  CLI::App* solve_cmd = app.add_subcommand(
      "solve", "Exactly solve one allocation instance file");
  solve_cmd->add_option("--config", solve.config_path,
                        "JSON file with option defaults");
  solve_cmd->add_option("--instance", solve.instance_path,
                        "Instance JSON to solve");
  solve_cmd->add_option("--out", solve.out, "Output directory");
  solve_cmd->callback([solve_cmd, &solve] { handle_solve(*solve_cmd, solve); });

  try {
    app.parse(argc, argv);
    return 0;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const SchemaError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitSchemaError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitSchemaError;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const RunError& e) {
    std::cerr << "run error: " << e.what() << "\n";
    return kExitRunError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace fpgames
