#include "crn/policies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace crn {

// ---------------------------------------------------------------------------
// Sense & Avoid

SaaPolicy::SaaPolicy(int num_arms, std::uint64_t seed) : num_arms_(num_arms), rng_(seed) {
  if (num_arms_ < 2) throw std::invalid_argument("SAA needs at least 2 arms");
  current_arm_ = rng_.uniform_int(num_arms_) + 1;
}

Action SaaPolicy::decide() { return Action::play(current_arm_); }

void SaaPolicy::observe(double /*reward*/, bool collided) {
  if (!collided) return;
  // uniform over the other M-1 arms
  const int pick = rng_.uniform_int(num_arms_ - 1) + 1;
  current_arm_ = pick < current_arm_ ? pick : pick + 1;
}

// ---------------------------------------------------------------------------
// Musical Chairs

int estimate_player_count(long collision_count, long explore_steps, int num_arms) {
  if (explore_steps <= 0) throw std::invalid_argument("explore_steps must be positive");
  if (collision_count < 0 || collision_count > explore_steps)
    throw std::invalid_argument("collision_count outside [0, explore_steps]");
  if (collision_count == explore_steps) return num_arms;
  const double clean_fraction =
      static_cast<double>(explore_steps - collision_count) / static_cast<double>(explore_steps);
  const double ratio = std::log(clean_fraction) / std::log(1.0 - 1.0 / num_arms);
  const int estimate = static_cast<int>(std::lround(ratio)) + 1;
  return std::clamp(estimate, 1, num_arms);
}

McPolicy::McPolicy(int num_arms, long explore_steps, std::uint64_t seed)
    : num_arms_(num_arms),
      explore_steps_(explore_steps),
      rng_(seed),
      reward_sum_(num_arms, 0.0),
      clean_count_(num_arms, 0) {
  if (num_arms_ < 2) throw std::invalid_argument("MC needs at least 2 arms");
  if (explore_steps_ < 1) throw std::invalid_argument("MC exploration must last >= 1 step");
}

Action McPolicy::decide() {
  switch (phase_) {
    case Phase::kExploration:
      last_arm_ = rng_.uniform_int(num_arms_) + 1;
      break;
    case Phase::kExploitation:
      last_arm_ = best_arms_[rng_.uniform_int(static_cast<int>(best_arms_.size()))];
      break;
    case Phase::kFixed:
      last_arm_ = fixed_arm_;
      break;
  }
  return Action::play(last_arm_);
}

void McPolicy::observe(double reward, bool collided) {
  ++step_;
  switch (phase_) {
    case Phase::kExploration:
      if (collided) {
        ++collision_count_;
      } else {
        reward_sum_[last_arm_ - 1] += reward;
        ++clean_count_[last_arm_ - 1];
      }
      if (step_ >= explore_steps_) finish_exploration();
      break;
    case Phase::kExploitation:
      if (!collided) {
        phase_ = Phase::kFixed;
        fixed_arm_ = last_arm_;
        fixed_at_step_ = step_;
      }
      break;
    case Phase::kFixed:
      break;
  }
}

double McPolicy::estimated_mean(int arm) const {
  if (arm < 1 || arm > num_arms_) return 0.0;
  const long n = clean_count_[arm - 1];
  return n > 0 ? reward_sum_[arm - 1] / static_cast<double>(n) : 0.0;
}

void McPolicy::finish_exploration() {
  estimated_players_ = estimate_player_count(collision_count_, explore_steps_, num_arms_);
  std::vector<int> order(num_arms_);
  std::iota(order.begin(), order.end(), 1);
  std::sort(order.begin(), order.end(), [this](int a, int b) {
    const double ma = estimated_mean(a);
    const double mb = estimated_mean(b);
    if (ma != mb) return ma > mb;
    return a < b;
  });
  best_arms_.assign(order.begin(), order.begin() + estimated_players_);
  phase_ = Phase::kExploitation;
}

// ---------------------------------------------------------------------------
// Coordinate & Play

BlockSchedule make_block_schedule(int num_arms, int num_players, int subblocks_per_block) {
  if (num_players < 1) throw std::invalid_argument("need at least one player");
  if (num_arms < num_players)
    throw std::invalid_argument("need at least as many arms as players");
  if (subblocks_per_block <= num_players - 1)
    throw std::invalid_argument("block size B=" + std::to_string(subblocks_per_block) +
                                " must exceed N-1=" + std::to_string(num_players - 1));
  return BlockSchedule{num_arms, subblocks_per_block};
}

double block_len_heuristic(int num_nodes, int num_subbands, double horizon) {
  if (num_subbands < 2) throw std::invalid_argument("heuristic needs >= 2 sub-bands");
  const double k = static_cast<double>(num_nodes);
  return std::cbrt(k * k * num_subbands * horizon / std::log(num_subbands));
}

MetaArm sample_meta_arm(const std::vector<double>& weights, int n, Rng& rng) {
  const int m = static_cast<int>(weights.size());
  if (n < 1 || n > m) throw std::invalid_argument("meta-arm size outside [1, M]");
  std::vector<double> w(weights);
  for (double x : w) {
    if (!(x > 0.0)) throw std::invalid_argument("meta-arm weights must be positive");
  }
  MetaArm meta;
  meta.reserve(n);
  for (int k = 0; k < n; ++k) {
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    double r = rng.uniform() * total;
    int pick = -1;
    for (int a = 0; a < m; ++a) {
      if (w[a] <= 0.0) continue;
      r -= w[a];
      if (r <= 0.0) {
        pick = a;
        break;
      }
    }
    if (pick < 0) {  // floating-point underrun: take the last remaining arm
      for (int a = m - 1; a >= 0; --a) {
        if (w[a] > 0.0) {
          pick = a;
          break;
        }
      }
    }
    meta.push_back(pick + 1);
    w[pick] = 0.0;
  }
  return meta;
}

ExpWeightsStrategy::ExpWeightsStrategy(int num_arms, double learning_rate, double forget)
    : learning_rate_(learning_rate),
      forget_(forget),
      log_weight_(num_arms, 0.0),
      block_reward_sum_(num_arms, 0.0),
      block_clean_count_(num_arms, 0) {
  if (learning_rate_ <= 0.0) throw std::invalid_argument("learning rate must be positive");
  if (forget_ <= 0.0 || forget_ > 1.0) throw std::invalid_argument("forget must be in (0,1]");
}

void ExpWeightsStrategy::record(int arm, double reward) {
  block_reward_sum_[arm - 1] += reward;
  ++block_clean_count_[arm - 1];
}

void ExpWeightsStrategy::end_block(int elapsed_steps) {
  const double decay = std::pow(forget_, elapsed_steps);
  for (std::size_t a = 0; a < log_weight_.size(); ++a) {
    log_weight_[a] *= decay;
    if (block_clean_count_[a] > 0) {
      // per-play mean normalizes away how often the coordinator visited the arm
      log_weight_[a] +=
          learning_rate_ * block_reward_sum_[a] / static_cast<double>(block_clean_count_[a]);
    }
    block_reward_sum_[a] = 0.0;
    block_clean_count_[a] = 0;
  }
}

MetaArm ExpWeightsStrategy::next_meta(int n, Rng& rng) {
  std::vector<double> w = weights();
  double total = std::accumulate(w.begin(), w.end(), 0.0);
  const double floor = kExplorationMix / static_cast<double>(w.size());
  for (double& x : w) x = (1.0 - kExplorationMix) * x / total + floor;
  return sample_meta_arm(w, n, rng);
}

std::vector<double> ExpWeightsStrategy::weights() const {
  const double top = *std::max_element(log_weight_.begin(), log_weight_.end());
  std::vector<double> w(log_weight_.size());
  for (std::size_t a = 0; a < w.size(); ++a) w[a] = std::exp(log_weight_[a] - top);
  return w;
}

CpCoordinator::CpCoordinator(int num_arms, int num_players, int subblocks_per_block,
                             std::unique_ptr<MetaArmStrategy> strategy, std::uint64_t seed)
    : num_arms_(num_arms),
      num_players_(num_players),
      schedule_(make_block_schedule(num_arms, num_players, subblocks_per_block)),
      strategy_(std::move(strategy)),
      rng_(seed) {}

Action CpCoordinator::decide() {
  if (step_in_block_ == 0) {
    if (started_) strategy_->end_block(schedule_.block_len());
    meta_ = strategy_->next_meta(num_players_, rng_);
    meta_log_.push_back(meta_);
    started_ = true;
  }
  const int subblock = static_cast<int>(step_in_block_) / schedule_.steps_per_subblock;
  const bool coordinating = subblock <= num_players_ - 2;
  if (coordinating && !subblock_latched_) {
    // camp on the arm meant for the player ranked subblock+2 until it arrives
    last_arm_ = meta_[subblock + 1];
  } else {
    last_arm_ = meta_[0];
  }
  return Action::play(last_arm_);
}

void CpCoordinator::observe(double reward, bool collided) {
  const int subblock = static_cast<int>(step_in_block_) / schedule_.steps_per_subblock;
  if (collided) {
    if (subblock <= num_players_ - 2) subblock_latched_ = true;
  } else {
    strategy_->record(last_arm_, reward);
  }
  ++step_in_block_;
  if (step_in_block_ % schedule_.steps_per_subblock == 0) subblock_latched_ = false;
  if (step_in_block_ >= schedule_.block_len()) step_in_block_ = 0;
}

CpFollower::CpFollower(int num_arms, int num_players, int subblocks_per_block, int rank)
    : num_arms_(num_arms),
      num_players_(num_players),
      schedule_(make_block_schedule(num_arms, num_players, subblocks_per_block)),
      rank_(rank) {
  if (rank_ < 2 || rank_ > num_players_)
    throw std::invalid_argument("follower rank must lie in [2, N]");
}

Action CpFollower::decide() {
  const int subblock = static_cast<int>(step_in_block_) / schedule_.steps_per_subblock;
  const int step_in_subblock = static_cast<int>(step_in_block_) % schedule_.steps_per_subblock;
  if (subblock == rank_ - 2) {
    // own coordination sub-block: sweep until the coordinator's collision.
    // The sweep phase rotates with the block index; a fixed phase would pin
    // one arm to a zero-length camping window and starve the coordinator of
    // observations on it.
    if (latched_) {
      last_arm_ = assigned_arm_;
    } else {
      last_arm_ = static_cast<int>((step_in_subblock + block_index_) % num_arms_) + 1;
    }
    return Action::play(last_arm_);
  }
  if (subblock <= num_players_ - 2) {
    last_arm_ = 0;
    return Action::rest();
  }
  if (!latched_) {
    // never met the coordinator this block; sit the block out
    if (!failed_this_block_) {
      ++coordination_failures_;
      failed_this_block_ = true;
    }
    last_arm_ = 0;
    return Action::rest();
  }
  last_arm_ = assigned_arm_;
  return Action::play(assigned_arm_);
}

void CpFollower::observe(double /*reward*/, bool collided) {
  const int subblock = static_cast<int>(step_in_block_) / schedule_.steps_per_subblock;
  if (subblock == rank_ - 2 && !latched_ && collided) {
    latched_ = true;
    assigned_arm_ = last_arm_;
  }
  ++step_in_block_;
  if (step_in_block_ >= schedule_.block_len()) {
    step_in_block_ = 0;
    ++block_index_;
    latched_ = false;
    assigned_arm_ = 0;
    failed_this_block_ = false;
  }
}

CpPolicy::CpPolicy(int num_arms, int num_players, long explore_steps, int subblocks_per_block,
                   double learning_rate, double forget, std::uint64_t seed)
    : num_arms_(num_arms),
      num_players_(num_players),
      subblocks_per_block_(subblocks_per_block),
      learning_rate_(learning_rate),
      forget_(forget),
      seed_(seed),
      mc_(num_arms, explore_steps, mix_seed(seed, 1)) {
  // fail fast on a bad block size instead of waiting out the warm-up
  make_block_schedule(num_arms_, num_players_, subblocks_per_block_);
}

Action CpPolicy::decide() {
  if (rank_ == 0) return mc_.decide();
  if (rank_ == 1) return coordinator_->decide();
  return follower_->decide();
}

void CpPolicy::observe(double reward, bool collided) {
  if (rank_ == 0) {
    mc_.observe(reward, collided);
  } else if (rank_ == 1) {
    coordinator_->observe(reward, collided);
  } else {
    follower_->observe(reward, collided);
  }
}

void CpPolicy::start_coordination(int rank) {
  if (rank_ != 0) throw std::logic_error("coordination already started");
  if (rank < 1 || rank > num_players_) throw std::invalid_argument("rank outside [1, N]");
  rank_ = rank;
  if (rank == 1) {
    coordinator_ = std::make_unique<CpCoordinator>(
        num_arms_, num_players_, subblocks_per_block_,
        std::make_unique<ExpWeightsStrategy>(num_arms_, learning_rate_, forget_),
        mix_seed(seed_, 2));
  } else {
    follower_ = std::make_unique<CpFollower>(num_arms_, num_players_, subblocks_per_block_, rank);
  }
}

long CpPolicy::coordination_failures() const {
  return follower_ ? follower_->coordination_failures() : 0;
}

std::vector<int> assign_ranks(const std::vector<std::pair<int, double>>& fixed_outcomes) {
  const int n = static_cast<int>(fixed_outcomes.size());
  std::vector<int> arms;
  arms.reserve(n);
  for (const auto& [arm, est] : fixed_outcomes) arms.push_back(arm);
  std::sort(arms.begin(), arms.end());
  if (std::adjacent_find(arms.begin(), arms.end()) != arms.end())
    throw std::runtime_error("assign_ranks: duplicate fixed arms; warm-up must be rerun");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (fixed_outcomes[a].second != fixed_outcomes[b].second)
      return fixed_outcomes[a].second > fixed_outcomes[b].second;
    return fixed_outcomes[a].first < fixed_outcomes[b].first;
  });
  std::vector<int> ranks(n, 0);
  for (int i = 0; i < n; ++i) ranks[order[i]] = i + 1;
  return ranks;
}

}  // namespace crn
