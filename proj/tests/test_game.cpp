#include "fpgames/game.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "fpgames/rng.hpp"

using namespace fpgames;

namespace {

// 2x2 identity game: both players get 1 on a match, 0 otherwise.
StrategicFormGame identity_game() {
  return StrategicFormGame({2, 2}, [](int, const JointAction& s) {
    return s[0] == s[1] ? 1.0 : 0.0;
  });
}

StrategicFormGame matching_pennies() {
  return StrategicFormGame({2, 2}, [](int player, const JointAction& s) {
    const double value = s[0] == s[1] ? 1.0 : -1.0;
    return player == 0 ? value : -value;
  });
}

// Random common-payoff table keyed by the joint action.
std::function<double(const JointAction&)> random_table(
    const std::vector<int>& counts, std::uint64_t seed) {
  auto table = std::make_shared<std::vector<double>>();
  Rng rng(stream_key({seed, 0x7462}));
  int size = 1;
  for (int c : counts) size *= c;
  for (int i = 0; i < size; ++i)
    table->push_back(20.0 * rng.next_double() - 10.0);
  auto counts_copy = counts;
  return [table, counts_copy](const JointAction& s) {
    int index = 0;
    for (std::size_t i = 0; i < counts_copy.size(); ++i)
      index = index * counts_copy[i] + s[i];
    return (*table)[index];
  };
}

}  // namespace

TEST_CASE("mixed strategy validates on construction") {
  CHECK_THROWS_AS(MixedStrategy({0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(MixedStrategy({-0.1, 1.1}), std::invalid_argument);
  CHECK_THROWS_AS(MixedStrategy(std::vector<double>{}), std::invalid_argument);
  const MixedStrategy u = MixedStrategy::uniform(4);
  CHECK(u[0] == 0.25);
  const MixedStrategy p = MixedStrategy::point_mass(3, 2);
  CHECK(p[2] == 1.0);
  CHECK(p[0] == 0.0);
  CHECK_THROWS_AS(MixedStrategy::point_mass(3, 3), std::invalid_argument);
}

TEST_CASE("utility range checks") {
  const StrategicFormGame game = identity_game();
  CHECK(game.utility(0, {1, 1}) == 1.0);
  CHECK(game.utility(1, {0, 1}) == 0.0);
  CHECK_THROWS_AS(game.utility(2, {0, 0}), std::out_of_range);
  CHECK_THROWS_AS(game.utility(0, {0, 2}), std::out_of_range);
  CHECK_THROWS_AS(game.utility(0, {0}), std::out_of_range);
}

TEST_CASE("expected utility against a fifty-fifty opponent") {
  const StrategicFormGame game = identity_game();
  std::vector<MixedStrategy> profile(2);
  profile[1] = MixedStrategy::uniform(2);
  CHECK(expected_utility(game, 0, 0, profile) == doctest::Approx(0.5));
  profile[1] = MixedStrategy({0.3, 0.7});
  CHECK(expected_utility(game, 0, 1, profile) == doctest::Approx(0.7));
}

TEST_CASE("expected utility under point masses equals direct evaluation") {
  const std::vector<int> counts{2, 3, 2};
  const auto table = random_table(counts, 11);
  const StrategicFormGame game(
      counts, [table](int, const JointAction& s) { return table(s); });
  for_each_joint(counts, [&](const JointAction& joint) {
    std::vector<MixedStrategy> profile(3);
    for (int k = 0; k < 3; ++k)
      profile[k] = MixedStrategy::point_mass(counts[k], joint[k]);
    for (int player = 0; player < 3; ++player) {
      CHECK(expected_utility(game, player, joint[player], profile) ==
            doctest::Approx(game.utility(player, joint)).epsilon(1e-12));
    }
  });
}

TEST_CASE("wlu payoff examples") {
  // Two players, two actions, global utility from a fixed table, reference
  // action 0 for both.
  const WluGame game({2, 2},
                     [](const JointAction& s) {
                       static const double table[2][2] = {{3, 1}, {2, 0}};
                       return table[s[0]][s[1]];
                     },
                     {0, 0});
  // u_g(1, 1) - u_g(0, 1) = 0 - 1
  CHECK(game.payoff(0, {1, 1}) == -1.0);
  // u_g(1, 0) - u_g(1, 0): player already at reference
  CHECK(game.payoff(0, {0, 1}) == 0.0);
  CHECK(game.payoff(1, {1, 1}) == -2.0);
}

TEST_CASE("wlu payoff is exactly zero at the reference action") {
  const std::vector<int> counts{3, 2, 4};
  const WluGame game(counts, random_table(counts, 5), {2, 0, 3});
  for_each_joint(counts, [&](const JointAction& joint) {
    for (int player = 0; player < 3; ++player) {
      if (joint[player] != game.reference_actions()[player]) continue;
      CHECK(game.payoff(player, joint) == 0.0);
    }
  });
}

TEST_CASE("global objective is an exact potential for any wlu game") {
  // Every unilateral deviation must satisfy the potential identity exactly;
  // checked by full enumeration on games up to 5 players and 5 actions.
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    Rng shape(stream_key({seed, 0x7368}));
    const int players = 2 + shape.next_below(4);
    std::vector<int> counts;
    std::vector<int> refs;
    for (int i = 0; i < players; ++i) {
      counts.push_back(2 + shape.next_below(4));
      refs.push_back(shape.next_below(counts.back()));
    }
    const WluGame wlu(counts, random_table(counts, seed), refs);
    const StrategicFormGame induced = wlu.induced_game();

    double max_violation = 0.0;
    for_each_joint(counts, [&](const JointAction& joint) {
      for (int player = 0; player < players; ++player) {
        for (int a = 0; a < counts[player]; ++a) {
          JointAction deviated = joint;
          deviated[player] = a;
          const double payoff_diff = induced.utility(player, deviated) -
                                     induced.utility(player, joint);
          const double potential_diff =
              wlu.global_utility(deviated) - wlu.global_utility(joint);
          max_violation = std::max(
              max_violation, std::abs(payoff_diff - potential_diff));
        }
      }
    });
    CHECK(max_violation <= 1e-9);
  }
}

TEST_CASE("potential check passes for identical interests and flags pennies") {
  const std::vector<int> counts{2, 2};
  const auto common = random_table(counts, 77);
  const StrategicFormGame team(
      counts, [common](int, const JointAction& s) { return common(s); });
  const PotentialCheckResult ok =
      check_potential_identity(team, common, 200, 1);
  CHECK(ok.holds);
  CHECK(ok.max_violation == 0.0);

  const PotentialCheckResult bad = check_potential_identity(
      matching_pennies(), [](const JointAction&) { return 0.0; }, 200, 1);
  CHECK_FALSE(bad.holds);
  // A unilateral flip in matching pennies moves the deviator's payoff by 2
  // while the constant potential moves by 0.
  CHECK(bad.max_violation == doctest::Approx(2.0));
}

TEST_CASE("for_each_joint enumerates the full space in lexicographic order") {
  std::vector<JointAction> seen;
  for_each_joint({2, 3}, [&](const JointAction& j) { seen.push_back(j); });
  REQUIRE(seen.size() == 6);
  CHECK(seen.front() == JointAction{0, 0});
  CHECK(seen[1] == JointAction{0, 1});
  CHECK(seen.back() == JointAction{1, 2});
}
