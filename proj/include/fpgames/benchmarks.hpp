#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fpgames/game.hpp"
#include "fpgames/negotiation.hpp"

namespace fpgames {

// ---------------------------------------------------------------------------
// Climbing-hill game: three players, three actions each (0 = up, 1 = middle,
// 2 = down), identical payoffs. The payoff landscape punishes the direct path
// to the best joint action, so learners must adapt in step to climb it.
// Unique pure equilibrium: (0, 0, 2) with payoff 100.

StrategicFormGame climbing_hill_game();
double climbing_hill_payoff(const JointAction& joint);
JointAction climbing_hill_equilibrium();

// ---------------------------------------------------------------------------
// Vehicle-target assignment: each vehicle independently picks one target;
// target j is destroyed with probability 1 - prod over engaging vehicles of
// (1 - p_ij) and pays its value V_j. Players optimize the wonderful-life
// utility with a greedy (best solo score) reference assignment.

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct VtaInstance {
  std::vector<Point> vehicles;
  std::vector<Point> targets;
  std::vector<double> values;                  // V_j, one per target
  std::vector<std::vector<double>> kill_prob;  // p[i][j] in (0, 1]

  int num_vehicles() const { return static_cast<int>(vehicles.size()); }
  int num_targets() const { return static_cast<int>(targets.size()); }
};

// Positions uniform in the unit square, values uniform on [0, 100];
// p_ij = min(1, (1/d_ij) / max_k (1/d_ik)) from Euclidean distances, i.e.
// each vehicle's closest target gets probability one and the rest fall off
// with distance. Deterministic in the seed.
VtaInstance generate_vta(std::uint64_t seed, int num_vehicles = 30,
                         int num_targets = 30);

// Expected value destroyed at one target by the given set of vehicles.
double vta_target_utility(const VtaInstance& instance, int target,
                          std::span<const int> engaging_vehicles);
double vta_global_utility(const VtaInstance& instance,
                          const JointAction& joint);

// Reference action: the target maximizing this vehicle's solo expected score
// V_j * p_ij (ties to the lowest index).
int vta_greedy_action(const VtaInstance& instance, int vehicle);

// Expected wonderful-life utility of sending `vehicle` to `target` while the
// other vehicles randomize independently; product form over opponents, no
// enumeration. `profile` has one slot per vehicle, own slot ignored.
double vta_wlu_expected_utility(const VtaInstance& instance, int vehicle,
                                int target,
                                const std::vector<MixedStrategy>& profile);

// Small-instance WLU view for exact enumeration (tests, potential checks).
WluGame vta_wlu_game(const VtaInstance& instance);

class VtaModel : public UtilityModel {
 public:
  explicit VtaModel(VtaInstance instance);

  int num_players() const override { return instance_.num_vehicles(); }
  int num_actions(int) const override { return instance_.num_targets(); }
  void expected_utilities(int player,
                          const std::vector<MixedStrategy>& beliefs,
                          std::vector<double>& out) const override;
  double global_utility(const JointAction& joint) const override;

  const VtaInstance& instance() const { return instance_; }

 private:
  VtaInstance instance_;
  std::vector<int> greedy_;  // reference action per vehicle
};

// ---------------------------------------------------------------------------
// Disaster management: ambulances pick incidents. The global objective is
// minus the mean travel time of the chosen assignments minus the total
// casualty shortfall (demand not covered by the assigned capacities).
// Players optimize the WLU with a closest-incident reference assignment.

struct DisasterInstance {
  std::vector<std::vector<double>> travel_time;  // [ambulance][incident], [0,1)
  std::vector<int> capacity;                     // per ambulance, 1..4
  std::vector<int> casualties;                   // demand per incident

  int num_ambulances() const { return static_cast<int>(capacity.size()); }
  int num_incidents() const { return static_cast<int>(casualties.size()); }
  int total_capacity() const;
  int total_casualties() const;
};

// Travel times uniform on [0, 1), capacities uniform on {1, ..., 4}, per-
// incident demand uniform on [ceil(C/(2 J)), floor(C/J)] for total capacity C
// and J incidents, so total demand never exceeds total capacity. Requires
// at least as many ambulances as incidents. Deterministic in the seed.
DisasterInstance generate_disaster(std::uint64_t seed, int num_ambulances,
                                   int num_incidents);

double disaster_global_utility(const DisasterInstance& instance,
                               const JointAction& joint);

// Reference action: the incident with the shortest travel time (ties to the
// lowest index).
int disaster_greedy_action(const DisasterInstance& instance, int ambulance);

// Expected WLU of sending `ambulance` to `incident` under independent
// opponent randomization. Exact: the expected shortfall at each incident is
// computed by dynamic programming over the opponents' capacity contributions.
double disaster_wlu_expected_utility(const DisasterInstance& instance,
                                     int ambulance, int incident,
                                     const std::vector<MixedStrategy>& profile);

WluGame disaster_wlu_game(const DisasterInstance& instance);

class DisasterModel : public UtilityModel {
 public:
  explicit DisasterModel(DisasterInstance instance);

  int num_players() const override { return instance_.num_ambulances(); }
  int num_actions(int) const override { return instance_.num_incidents(); }
  void expected_utilities(int player,
                          const std::vector<MixedStrategy>& beliefs,
                          std::vector<double>& out) const override;
  double global_utility(const JointAction& joint) const override;

  const DisasterInstance& instance() const { return instance_; }

 private:
  DisasterInstance instance_;
  std::vector<int> greedy_;  // reference action per ambulance
};

}  // namespace fpgames
