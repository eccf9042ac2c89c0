#pragma once

#include <functional>
#include <vector>

#include "crn/schedule.hpp"
#include "crn/types.hpp"

namespace crn {

// Comparator used by the regret oracle: the single best mean per step, or the
// sum of the N largest means per step (the multiplayer baseline, default).
enum class ComparatorMode { kSingleBest, kTopNSum };

// Produces a clamped reward draw for (arm, t). Called once per non-colliding
// playing node, in player order.
using ArmSampler = std::function<double(int arm, long t)>;

// Resolves one joint step: collisions from duplicate Play choices, rewards
// gated to zero on rest or collision. Throws std::invalid_argument on an arm
// index outside [1, num_arms].
RoundOutcome resolve_round(const std::vector<Action>& actions, int num_arms,
                           const ArmSampler& sampler, long t);

// Omniscient per-step baseline over the schedule's means.
double oracle_comparator(const RewardSchedule& schedule, long t, ComparatorMode mode,
                         int n_players);

// X_T over a recorded history.
double cumulative_reward(const std::vector<RoundOutcome>& outcomes);

// Realized regret series: element T-1 holds
//   sum_{t<=T} comparator(t) - sum_{t<=T} sum_i y_i(t).
// Outcomes must be the full prefix 1..T of a game played on `schedule`.
std::vector<double> regret_series(const std::vector<RoundOutcome>& outcomes,
                                  const RewardSchedule& schedule, ComparatorMode mode,
                                  int n_players);

}  // namespace crn
