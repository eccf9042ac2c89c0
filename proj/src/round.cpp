#include "crn/round.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace crn {

RoundOutcome resolve_round(const std::vector<Action>& actions, int num_arms,
                           const ArmSampler& sampler, long t) {
  if (actions.empty()) throw std::invalid_argument("resolve_round: no actions");
  const int n = static_cast<int>(actions.size());

  RoundOutcome out;
  out.t = t;
  out.actions = actions;
  out.collided.assign(n, 0);
  out.rewards.assign(n, 0.0);

  // occupancy per arm; a collision is an arm chosen by two or more players
  std::vector<int> occupancy(static_cast<std::size_t>(num_arms) + 1, 0);
  for (const Action& a : actions) {
    if (!a.is_play()) continue;
    if (a.arm > num_arms)
      throw std::invalid_argument("resolve_round: arm index " + std::to_string(a.arm) +
                                  " outside [1, " + std::to_string(num_arms) + "]");
    ++occupancy[a.arm];
  }
  for (int arm = 1; arm <= num_arms; ++arm) {
    if (occupancy[arm] >= 2) ++out.collision_events;
  }
  for (int i = 0; i < n; ++i) {
    const Action a = actions[i];
    if (!a.is_play()) continue;
    if (occupancy[a.arm] >= 2) {
      out.collided[i] = 1;
    } else {
      out.rewards[i] = std::clamp(sampler(a.arm, t), 0.0, 1.0);
    }
  }
  return out;
}

double oracle_comparator(const RewardSchedule& schedule, long t, ComparatorMode mode,
                         int n_players) {
  const auto& means = schedule.segments()[schedule.segment_index(t)].means;
  if (mode == ComparatorMode::kSingleBest) {
    return *std::max_element(means.begin(), means.end());
  }
  std::vector<double> sorted(means);
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  const int n = std::min<int>(n_players, static_cast<int>(sorted.size()));
  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += sorted[k];
  return sum;
}

double cumulative_reward(const std::vector<RoundOutcome>& outcomes) {
  double total = 0.0;
  for (const auto& round : outcomes) {
    for (double y : round.rewards) total += y;
  }
  return total;
}

std::vector<double> regret_series(const std::vector<RoundOutcome>& outcomes,
                                  const RewardSchedule& schedule, ComparatorMode mode,
                                  int n_players) {
  if (static_cast<long>(outcomes.size()) > schedule.horizon())
    throw std::invalid_argument("regret_series: more outcomes than schedule steps");
  std::vector<double> series;
  series.reserve(outcomes.size());
  double cum_comparator = 0.0;
  double cum_reward = 0.0;
  long t = 1;
  for (const auto& round : outcomes) {
    cum_comparator += oracle_comparator(schedule, t, mode, n_players);
    for (double y : round.rewards) cum_reward += y;
    series.push_back(cum_comparator - cum_reward);
    ++t;
  }
  return series;
}

}  // namespace crn
