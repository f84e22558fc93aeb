#include "fpgames/exact_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace fpgames {

namespace {

void check_instance(const DisasterInstance& instance) {
  if (instance.num_ambulances() <= 0 || instance.num_incidents() <= 0)
    throw std::invalid_argument("instance needs ambulances and incidents");
  if (static_cast<int>(instance.travel_time.size()) !=
      instance.num_ambulances())
    throw std::invalid_argument("travel time matrix has wrong shape");
  for (const auto& row : instance.travel_time)
    if (static_cast<int>(row.size()) != instance.num_incidents())
      throw std::invalid_argument("travel time matrix has wrong shape");
}

struct SearchState {
  const DisasterInstance* instance = nullptr;
  std::vector<int> order;        // ambulances, descending capacity
  std::vector<double> min_travel_suffix;  // sum of row minima from depth d on
  std::vector<int> capacity_suffix;       // capacity left from depth d on
  JointAction assignment;        // by ambulance index
  std::vector<int> covered;      // capacity assigned per incident
  double travel_sum = 0.0;
  JointAction best_assignment;
  double best_cost = 0.0;        // minimized: travel/n + shortfall
  // Per-depth scratch for child ordering; avoids per-node allocation.
  std::vector<std::vector<int>> child_order;
  std::vector<std::vector<double>> child_cost;
};

double shortfall_now(const SearchState& s) {
  double shortfall = 0.0;
  for (int j = 0; j < s.instance->num_incidents(); ++j)
    shortfall += std::max(0, s.instance->casualties[j] - s.covered[j]);
  return shortfall;
}

void search(SearchState& s, int depth) {
  const DisasterInstance& instance = *s.instance;
  const int n = instance.num_ambulances();
  if (depth == n) {
    const double cost = s.travel_sum / n + shortfall_now(s);
    if (cost < s.best_cost) {
      s.best_cost = cost;
      s.best_assignment = s.assignment;
    }
    return;
  }

  // Lower bound on the cost any completion can reach: the remaining
  // ambulances each travel to their closest incident, and their combined
  // capacity is applied to the uncovered demand wherever it helps most.
  const double travel_bound =
      (s.travel_sum + s.min_travel_suffix[depth]) / n;
  const double shortfall_bound =
      std::max(0.0, shortfall_now(s) - s.capacity_suffix[depth]);
  if (travel_bound + shortfall_bound >= s.best_cost) return;

  const int ambulance = s.order[depth];
  const int capacity = instance.capacity[ambulance];

  // Visit incidents by immediate marginal cost so good incumbents surface
  // early; ordering changes only speed, never the returned optimum.
  const int num_incidents = instance.num_incidents();
  std::vector<int>& incidents = s.child_order[depth];
  std::vector<double>& marginal = s.child_cost[depth];
  std::iota(incidents.begin(), incidents.end(), 0);
  for (int j = 0; j < num_incidents; ++j) {
    const int uncovered =
        std::max(0, instance.casualties[j] - s.covered[j]);
    marginal[j] = instance.travel_time[ambulance][j] / n -
                  std::min(uncovered, capacity);
  }
  std::stable_sort(incidents.begin(), incidents.end(),
                   [&](int a, int b) { return marginal[a] < marginal[b]; });

  for (int j : incidents) {
    s.assignment[ambulance] = j;
    s.covered[j] += capacity;
    s.travel_sum += instance.travel_time[ambulance][j];
    search(s, depth + 1);
    s.travel_sum -= instance.travel_time[ambulance][j];
    s.covered[j] -= capacity;
  }
  s.assignment[ambulance] = -1;
}

// Greedy incumbent: ambulances in search order each take the incident with
// the lowest immediate marginal cost.
JointAction greedy_assignment(const DisasterInstance& instance,
                              const std::vector<int>& order) {
  const int n = instance.num_ambulances();
  JointAction assignment(n, 0);
  std::vector<int> covered(instance.num_incidents(), 0);
  for (int ambulance : order) {
    int best = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int j = 0; j < instance.num_incidents(); ++j) {
      const int uncovered = std::max(0, instance.casualties[j] - covered[j]);
      const double cost =
          instance.travel_time[ambulance][j] / n -
          std::min(uncovered, instance.capacity[ambulance]);
      if (cost < best_cost) {
        best_cost = cost;
        best = j;
      }
    }
    assignment[ambulance] = best;
    covered[best] += instance.capacity[ambulance];
  }
  return assignment;
}

}  // namespace

AllocationSolution solve_bruteforce(const DisasterInstance& instance,
                                    double max_nodes) {
  check_instance(instance);
  const double nodes = std::pow(static_cast<double>(instance.num_incidents()),
                                static_cast<double>(instance.num_ambulances()));
  if (nodes > max_nodes)
    throw std::invalid_argument("search space too large for brute force");

  AllocationSolution best;
  best.proof = SolveProof::kExhaustive;
  best.objective = -std::numeric_limits<double>::infinity();
  JointAction joint(instance.num_ambulances(), 0);
  while (true) {
    const double value = disaster_global_utility(instance, joint);
    if (value > best.objective) {
      best.objective = value;
      best.assignment = joint;
    }
    int i = instance.num_ambulances() - 1;
    while (i >= 0 && ++joint[i] == instance.num_incidents()) joint[i--] = 0;
    if (i < 0) break;
  }
  return best;
}

AllocationSolution solve_exact(const DisasterInstance& instance) {
  check_instance(instance);
  const int n = instance.num_ambulances();

  SearchState s;
  s.instance = &instance;
  s.order.resize(n);
  std::iota(s.order.begin(), s.order.end(), 0);
  // Descending capacity, stable in the index: big moves first shrink the
  // shortfall bound fastest.
  std::stable_sort(s.order.begin(), s.order.end(), [&](int a, int b) {
    return instance.capacity[a] > instance.capacity[b];
  });

  s.min_travel_suffix.assign(n + 1, 0.0);
  s.capacity_suffix.assign(n + 1, 0);
  for (int d = n - 1; d >= 0; --d) {
    const int ambulance = s.order[d];
    const double row_min = *std::min_element(
        instance.travel_time[ambulance].begin(),
        instance.travel_time[ambulance].end());
    s.min_travel_suffix[d] = s.min_travel_suffix[d + 1] + row_min;
    s.capacity_suffix[d] =
        s.capacity_suffix[d + 1] + instance.capacity[ambulance];
  }

  s.assignment.assign(n, -1);
  s.covered.assign(instance.num_incidents(), 0);
  s.child_order.assign(n, std::vector<int>(instance.num_incidents()));
  s.child_cost.assign(n, std::vector<double>(instance.num_incidents()));

  // Seed the incumbent with the greedy completion so pruning bites from the
  // first node; add a whisker so an equal-cost optimum still gets visited
  // and recorded through the search itself.
  const JointAction greedy = greedy_assignment(instance, s.order);
  s.best_assignment = greedy;
  s.best_cost = -disaster_global_utility(instance, greedy) + 1e-9;

  search(s, 0);

  AllocationSolution solution;
  solution.proof = SolveProof::kBoundedSearch;
  solution.assignment = s.best_assignment;
  solution.objective = disaster_global_utility(instance, s.best_assignment);
  return solution;
}

}  // namespace fpgames
