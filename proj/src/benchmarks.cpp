#include "fpgames/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "fpgames/rng.hpp"

namespace fpgames {

namespace {

// Smallest admissible engagement probability; keeps p in (0, 1] even in the
// measure-zero case of a vehicle sitting exactly on a target.
constexpr double kMinKillProb = 1e-12;

// Stream tags for instance generation.
constexpr std::uint64_t kVehiclePosTag = 0x7670;   // "vp"
constexpr std::uint64_t kTargetPosTag = 0x7470;    // "tp"
constexpr std::uint64_t kTargetValueTag = 0x7476;  // "tv"
constexpr std::uint64_t kTravelTag = 0x7472;       // "tr"
constexpr std::uint64_t kCapacityTag = 0x6361;     // "ca"
constexpr std::uint64_t kCasualtyTag = 0x6e70;     // "np"

void check_profile(int num_players, int player,
                   const std::vector<MixedStrategy>& profile,
                   int num_actions) {
  if (static_cast<int>(profile.size()) != num_players)
    throw std::invalid_argument("profile needs one slot per player");
  for (int k = 0; k < num_players; ++k) {
    if (k == player) continue;
    if (profile[k].size() != num_actions)
      throw std::invalid_argument("profile strategy has wrong action count");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Climbing hill

double climbing_hill_payoff(const JointAction& joint) {
  if (joint.size() != 3) throw std::out_of_range("need exactly three players");
  for (int a : joint)
    if (a < 0 || a > 2) throw std::out_of_range("action index out of range");
  // payoff[p3][p1][p2], actions 0 = up, 1 = middle, 2 = down.
  static constexpr double payoff[3][3][3] = {
      {{0, 0, 0}, {0, 50, 40}, {0, 0, 30}},
      {{-300, 70, 80}, {-300, 60, 0}, {0, 0, 0}},
      {{100, -300, 90}, {0, 0, 0}, {0, 0, 0}},
  };
  return payoff[joint[2]][joint[0]][joint[1]];
}

StrategicFormGame climbing_hill_game() {
  return StrategicFormGame({3, 3, 3}, [](int, const JointAction& joint) {
    return climbing_hill_payoff(joint);
  });
}

JointAction climbing_hill_equilibrium() { return {0, 0, 2}; }

// ---------------------------------------------------------------------------
// Vehicle-target assignment

VtaInstance generate_vta(std::uint64_t seed, int num_vehicles,
                         int num_targets) {
  if (num_vehicles <= 0 || num_targets <= 0)
    throw std::invalid_argument("need at least one vehicle and one target");

  VtaInstance instance;
  Rng vpos(stream_key({seed, kVehiclePosTag}));
  for (int i = 0; i < num_vehicles; ++i)
    instance.vehicles.push_back({vpos.next_double(), vpos.next_double()});
  Rng tpos(stream_key({seed, kTargetPosTag}));
  for (int j = 0; j < num_targets; ++j)
    instance.targets.push_back({tpos.next_double(), tpos.next_double()});
  Rng tval(stream_key({seed, kTargetValueTag}));
  for (int j = 0; j < num_targets; ++j)
    instance.values.push_back(100.0 * tval.next_double());

  instance.kill_prob.assign(num_vehicles, std::vector<double>(num_targets));
  for (int i = 0; i < num_vehicles; ++i) {
    double min_dist = std::numeric_limits<double>::infinity();
    std::vector<double>& row = instance.kill_prob[i];
    for (int j = 0; j < num_targets; ++j) {
      const double dx = instance.vehicles[i].x - instance.targets[j].x;
      const double dy = instance.vehicles[i].y - instance.targets[j].y;
      row[j] = std::sqrt(dx * dx + dy * dy);  // distance, normalized below
      min_dist = std::min(min_dist, row[j]);
    }
    for (int j = 0; j < num_targets; ++j) {
      // min(1, (1/d_ij) / max_k (1/d_ik)) = d_min / d_ij; 0/0 means the
      // vehicle sits on its closest target, which engages with certainty.
      const double p = row[j] == 0.0 ? 1.0 : min_dist / row[j];
      row[j] = std::clamp(p, kMinKillProb, 1.0);
    }
  }
  return instance;
}

double vta_target_utility(const VtaInstance& instance, int target,
                          std::span<const int> engaging_vehicles) {
  if (target < 0 || target >= instance.num_targets())
    throw std::out_of_range("target index out of range");
  double miss = 1.0;
  for (int i : engaging_vehicles) {
    if (i < 0 || i >= instance.num_vehicles())
      throw std::out_of_range("vehicle index out of range");
    miss *= 1.0 - instance.kill_prob[i][target];
  }
  return instance.values[target] * (1.0 - miss);
}

double vta_global_utility(const VtaInstance& instance,
                          const JointAction& joint) {
  if (static_cast<int>(joint.size()) != instance.num_vehicles())
    throw std::out_of_range("joint action has wrong number of vehicles");
  std::vector<double> miss(instance.num_targets(), 1.0);
  for (int i = 0; i < instance.num_vehicles(); ++i) {
    const int j = joint[i];
    if (j < 0 || j >= instance.num_targets())
      throw std::out_of_range("target index out of range");
    miss[j] *= 1.0 - instance.kill_prob[i][j];
  }
  double total = 0.0;
  for (int j = 0; j < instance.num_targets(); ++j)
    total += instance.values[j] * (1.0 - miss[j]);
  return total;
}

int vta_greedy_action(const VtaInstance& instance, int vehicle) {
  if (vehicle < 0 || vehicle >= instance.num_vehicles())
    throw std::out_of_range("vehicle index out of range");
  int best = 0;
  double best_score = -1.0;
  for (int j = 0; j < instance.num_targets(); ++j) {
    const double score = instance.values[j] * instance.kill_prob[vehicle][j];
    if (score > best_score) {
      best_score = score;
      best = j;
    }
  }
  return best;
}

namespace {

// prod over opponents k of (1 - p_kj * sigma_k(j)): the chance target j
// survives every opponent, in expectation over their mixed strategies.
double opponent_miss_probability(const VtaInstance& instance, int vehicle,
                                 int target,
                                 const std::vector<MixedStrategy>& profile) {
  double q = 1.0;
  for (int k = 0; k < instance.num_vehicles(); ++k) {
    if (k == vehicle) continue;
    q *= 1.0 - instance.kill_prob[k][target] * profile[k][target];
  }
  return q;
}

}  // namespace

double vta_wlu_expected_utility(const VtaInstance& instance, int vehicle,
                                int target,
                                const std::vector<MixedStrategy>& profile) {
  if (vehicle < 0 || vehicle >= instance.num_vehicles())
    throw std::out_of_range("vehicle index out of range");
  if (target < 0 || target >= instance.num_targets())
    throw std::out_of_range("target index out of range");
  check_profile(instance.num_vehicles(), vehicle, profile,
                instance.num_targets());

  const int greedy = vta_greedy_action(instance, vehicle);
  const double gain =
      instance.values[target] * instance.kill_prob[vehicle][target] *
      opponent_miss_probability(instance, vehicle, target, profile);
  const double reference_gain =
      instance.values[greedy] * instance.kill_prob[vehicle][greedy] *
      opponent_miss_probability(instance, vehicle, greedy, profile);
  return gain - reference_gain;
}

WluGame vta_wlu_game(const VtaInstance& instance) {
  std::vector<int> references(instance.num_vehicles());
  for (int i = 0; i < instance.num_vehicles(); ++i)
    references[i] = vta_greedy_action(instance, i);
  return WluGame(
      std::vector<int>(instance.num_vehicles(), instance.num_targets()),
      [instance](const JointAction& joint) {
        return vta_global_utility(instance, joint);
      },
      std::move(references));
}

VtaModel::VtaModel(VtaInstance instance) : instance_(std::move(instance)) {
  greedy_.resize(instance_.num_vehicles());
  for (int i = 0; i < instance_.num_vehicles(); ++i)
    greedy_[i] = vta_greedy_action(instance_, i);
}

void VtaModel::expected_utilities(int player,
                                  const std::vector<MixedStrategy>& beliefs,
                                  std::vector<double>& out) const {
  check_profile(num_players(), player, beliefs, instance_.num_targets());
  const int num_targets = instance_.num_targets();
  out.assign(num_targets, 0.0);
  for (int j = 0; j < num_targets; ++j)
    out[j] = instance_.values[j] * instance_.kill_prob[player][j] *
             opponent_miss_probability(instance_, player, j, beliefs);
  const double reference_gain = out[greedy_[player]];
  for (double& v : out) v -= reference_gain;
}

double VtaModel::global_utility(const JointAction& joint) const {
  return vta_global_utility(instance_, joint);
}

// ---------------------------------------------------------------------------
// Disaster management

int DisasterInstance::total_capacity() const {
  int total = 0;
  for (int c : capacity) total += c;
  return total;
}

int DisasterInstance::total_casualties() const {
  int total = 0;
  for (int n : casualties) total += n;
  return total;
}

DisasterInstance generate_disaster(std::uint64_t seed, int num_ambulances,
                                   int num_incidents) {
  if (num_incidents <= 0)
    throw std::invalid_argument("need at least one incident");
  if (num_ambulances < num_incidents)
    throw std::invalid_argument("need at least one ambulance per incident");

  DisasterInstance instance;
  Rng travel(stream_key({seed, kTravelTag}));
  instance.travel_time.assign(num_ambulances,
                              std::vector<double>(num_incidents));
  for (auto& row : instance.travel_time)
    for (double& t : row) t = travel.next_double();

  Rng caps(stream_key({seed, kCapacityTag}));
  for (int i = 0; i < num_ambulances; ++i)
    instance.capacity.push_back(1 + caps.next_below(4));

  const int total_capacity = instance.total_capacity();
  const int lo = (total_capacity + 2 * num_incidents - 1) / (2 * num_incidents);
  const int hi = total_capacity / num_incidents;
  // lo <= hi whenever total capacity >= num_incidents, guaranteed above.
  Rng demand(stream_key({seed, kCasualtyTag}));
  while (true) {
    instance.casualties.clear();
    for (int j = 0; j < num_incidents; ++j)
      instance.casualties.push_back(lo + demand.next_below(hi - lo + 1));
    // The per-incident bound already keeps total demand within capacity;
    // redraw if that ever failed to hold.
    if (instance.total_casualties() <= total_capacity) break;
  }
  return instance;
}

double disaster_global_utility(const DisasterInstance& instance,
                               const JointAction& joint) {
  const int n = instance.num_ambulances();
  if (static_cast<int>(joint.size()) != n)
    throw std::out_of_range("joint action has wrong number of ambulances");
  double travel_sum = 0.0;
  std::vector<int> covered(instance.num_incidents(), 0);
  for (int i = 0; i < n; ++i) {
    const int j = joint[i];
    if (j < 0 || j >= instance.num_incidents())
      throw std::out_of_range("incident index out of range");
    travel_sum += instance.travel_time[i][j];
    covered[j] += instance.capacity[i];
  }
  double shortfall = 0.0;
  for (int j = 0; j < instance.num_incidents(); ++j)
    shortfall += std::max(0, instance.casualties[j] - covered[j]);
  return -travel_sum / n - shortfall;
}

int disaster_greedy_action(const DisasterInstance& instance, int ambulance) {
  if (ambulance < 0 || ambulance >= instance.num_ambulances())
    throw std::out_of_range("ambulance index out of range");
  int best = 0;
  for (int j = 1; j < instance.num_incidents(); ++j)
    if (instance.travel_time[ambulance][j] <
        instance.travel_time[ambulance][best])
      best = j;
  return best;
}

namespace {

// Expected shortfall max(0, demand - C - extra) at one incident, where C is
// the random capacity contributed by the opponents. The distribution of C is
// built by dynamic programming with all mass at or above `demand` merged into
// one bucket (extra capacity beyond the demand never changes any shortfall).
struct IncidentShortfall {
  double without_own = 0.0;  // extra = 0
  double with_own = 0.0;     // extra = own capacity
};

IncidentShortfall expected_shortfall(const DisasterInstance& instance,
                                     int ambulance, int incident,
                                     int own_capacity,
                                     const std::vector<MixedStrategy>& profile,
                                     std::vector<double>& dist,
                                     std::vector<double>& next) {
  const int demand = instance.casualties[incident];
  dist.assign(demand + 1, 0.0);
  dist[0] = 1.0;
  for (int k = 0; k < instance.num_ambulances(); ++k) {
    if (k == ambulance) continue;
    const double q = profile[k][incident];
    if (q == 0.0) continue;
    const int c = instance.capacity[k];
    next.assign(demand + 1, 0.0);
    for (int total = 0; total <= demand; ++total) {
      const double mass = dist[total];
      if (mass == 0.0) continue;
      next[total] += mass * (1.0 - q);
      next[std::min(demand, total + c)] += mass * q;
    }
    dist.swap(next);
  }
  IncidentShortfall result;
  for (int total = 0; total < demand; ++total) {
    result.without_own += dist[total] * (demand - total);
    result.with_own +=
        dist[total] * std::max(0, demand - total - own_capacity);
  }
  return result;
}

}  // namespace

double disaster_wlu_expected_utility(
    const DisasterInstance& instance, int ambulance, int incident,
    const std::vector<MixedStrategy>& profile) {
  if (ambulance < 0 || ambulance >= instance.num_ambulances())
    throw std::out_of_range("ambulance index out of range");
  if (incident < 0 || incident >= instance.num_incidents())
    throw std::out_of_range("incident index out of range");
  check_profile(instance.num_ambulances(), ambulance, profile,
                instance.num_incidents());

  const int reference = disaster_greedy_action(instance, ambulance);
  const int own = instance.capacity[ambulance];
  std::vector<double> dist, next;
  const IncidentShortfall at_incident =
      expected_shortfall(instance, ambulance, incident, own, profile, dist,
                         next);
  const IncidentShortfall at_reference =
      expected_shortfall(instance, ambulance, reference, own, profile, dist,
                         next);
  const double travel_diff = instance.travel_time[ambulance][incident] -
                             instance.travel_time[ambulance][reference];
  return -travel_diff / instance.num_ambulances() +
         (at_incident.without_own - at_incident.with_own) -
         (at_reference.without_own - at_reference.with_own);
}

WluGame disaster_wlu_game(const DisasterInstance& instance) {
  std::vector<int> references(instance.num_ambulances());
  for (int i = 0; i < instance.num_ambulances(); ++i)
    references[i] = disaster_greedy_action(instance, i);
  return WluGame(
      std::vector<int>(instance.num_ambulances(), instance.num_incidents()),
      [instance](const JointAction& joint) {
        return disaster_global_utility(instance, joint);
      },
      std::move(references));
}

DisasterModel::DisasterModel(DisasterInstance instance)
    : instance_(std::move(instance)) {
  greedy_.resize(instance_.num_ambulances());
  for (int i = 0; i < instance_.num_ambulances(); ++i)
    greedy_[i] = disaster_greedy_action(instance_, i);
}

void DisasterModel::expected_utilities(
    int player, const std::vector<MixedStrategy>& beliefs,
    std::vector<double>& out) const {
  check_profile(num_players(), player, beliefs, instance_.num_incidents());
  const int num_incidents = instance_.num_incidents();
  const int own = instance_.capacity[player];
  const int reference = greedy_[player];

  std::vector<double> dist, next;
  std::vector<IncidentShortfall> shortfalls(num_incidents);
  for (int j = 0; j < num_incidents; ++j)
    shortfalls[j] =
        expected_shortfall(instance_, player, j, own, beliefs, dist, next);

  const double reference_gain = shortfalls[reference].without_own -
                                shortfalls[reference].with_own;
  const double reference_travel = instance_.travel_time[player][reference];
  out.assign(num_incidents, 0.0);
  for (int j = 0; j < num_incidents; ++j) {
    out[j] = -(instance_.travel_time[player][j] - reference_travel) /
                 instance_.num_ambulances() +
             (shortfalls[j].without_own - shortfalls[j].with_own) -
             reference_gain;
  }
}

double DisasterModel::global_utility(const JointAction& joint) const {
  return disaster_global_utility(instance_, joint);
}

}  // namespace fpgames
