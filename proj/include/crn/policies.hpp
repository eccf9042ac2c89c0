#pragma once

#include <memory>
#include <vector>

#include "crn/rng.hpp"
#include "crn/types.hpp"

namespace crn {

// A node's decision algorithm. Strictly decentralized: the only inputs a
// policy ever sees are its own action feedback (reward, collision flag), its
// own clock, and a private random stream. decide() and observe() alternate
// once per step.
class NodePolicy {
 public:
  virtual ~NodePolicy() = default;
  virtual Action decide() = 0;
  virtual void observe(double reward, bool collided) = 0;
};

// Sense & Avoid: keep the current sub-band until a collision, then jump to a
// uniformly random other sub-band. Never rests, never looks at rewards.
class SaaPolicy : public NodePolicy {
 public:
  SaaPolicy(int num_arms, std::uint64_t seed);

  Action decide() override;
  void observe(double reward, bool collided) override;

  int current_arm() const { return current_arm_; }

 private:
  int num_arms_;
  Rng rng_;
  int current_arm_;
};

// Estimated player count from the collision rate seen by one uniformly
// exploring node: solves 1 - (1 - 1/M)^(N-1) = collisions/T0 for N, rounded
// and clamped to [1, M]. collision_count == explore_steps maps to M.
int estimate_player_count(long collision_count, long explore_steps, int num_arms);

// Musical Chairs: explore uniformly for a preset number of steps while
// estimating arm means and the player count, then grab one of the estimated
// best-N arms and hold it for the rest of the game.
class McPolicy : public NodePolicy {
 public:
  enum class Phase { kExploration, kExploitation, kFixed };

  McPolicy(int num_arms, long explore_steps, std::uint64_t seed);

  Action decide() override;
  void observe(double reward, bool collided) override;

  Phase phase() const { return phase_; }
  bool is_fixed() const { return phase_ == Phase::kFixed; }
  int fixed_arm() const { return fixed_arm_; }
  long fixed_at_step() const { return fixed_at_step_; }
  long collision_count() const { return collision_count_; }

  // sample mean of clean draws; 0 for arms never cleanly observed
  double estimated_mean(int arm) const;
  // valid once exploration has ended
  int estimated_player_count() const { return estimated_players_; }
  const std::vector<int>& best_arms() const { return best_arms_; }

 private:
  void finish_exploration();

  int num_arms_;
  long explore_steps_;
  Rng rng_;
  Phase phase_ = Phase::kExploration;
  long step_ = 0;  // completed steps
  int last_arm_ = 0;
  std::vector<double> reward_sum_;
  std::vector<long> clean_count_;
  long collision_count_ = 0;
  int estimated_players_ = 0;
  std::vector<int> best_arms_;
  int fixed_arm_ = -1;
  long fixed_at_step_ = -1;
};

// Coordinate & Play block timing: sub-blocks of M steps, B sub-blocks per
// block; the first N-1 sub-blocks of each block carry coordination.
struct BlockSchedule {
  int steps_per_subblock = 0;  // = M
  int subblocks_per_block = 0; // = B, must exceed N-1
  int block_len() const { return steps_per_subblock * subblocks_per_block; }
};

// Throws std::invalid_argument unless B > N-1 and M >= N.
BlockSchedule make_block_schedule(int num_arms, int num_players, int subblocks_per_block);

// Cube-root block-length rule of thumb, (K^2 * N * T / ln N)^(1/3) with
// K = node count and N = sub-band count. Documentation helper only; the
// simulator takes the block size from configuration.
double block_len_heuristic(int num_nodes, int num_subbands, double horizon);

// Ordered assignment of N distinct arms; position k-1 is the arm for the
// player ranked k (position 0 = the coordinator's own arm).
using MetaArm = std::vector<int>;

// Sequential weighted sampling without replacement, probability proportional
// to weight. Weights must be positive, n <= weights.size().
MetaArm sample_meta_arm(const std::vector<double>& weights, int n, Rng& rng);

// The coordinator's meta-arm selection rule. Pluggable so the learning scheme
// can be swapped without touching the block protocol.
class MetaArmStrategy {
 public:
  virtual ~MetaArmStrategy() = default;
  virtual void record(int arm, double reward) = 0;       // one clean observation
  virtual void end_block(int elapsed_steps) = 0;         // fold the block's stats
  virtual MetaArm next_meta(int n, Rng& rng) = 0;
};

// Default strategy: per-arm exponential weights over the coordinator's own
// play-frequency-normalized block rewards, with per-step forgetting so the
// distribution re-flattens (and re-explores) after an environment shift.
// Sampling mixes in a uniform floor: the follower sweep collides with
// low-indexed camped arms before the coordinator can observe them, and
// without the floor such an arm can starve out of the meta-arm entirely.
class ExpWeightsStrategy : public MetaArmStrategy {
 public:
  static constexpr double kExplorationMix = 0.1;

  ExpWeightsStrategy(int num_arms, double learning_rate, double forget);

  void record(int arm, double reward) override;
  void end_block(int elapsed_steps) override;
  MetaArm next_meta(int n, Rng& rng) override;

  std::vector<double> weights() const;  // exp(log-weights), for inspection

 private:
  double learning_rate_;
  double forget_;
  std::vector<double> log_weight_;
  std::vector<double> block_reward_sum_;
  std::vector<long> block_clean_count_;
};

// Rank-1 node: samples a meta-arm each block, camps on follower k's arm
// during coordination sub-block k-1 until the intentional collision, then
// returns to its own arm.
class CpCoordinator {
 public:
  CpCoordinator(int num_arms, int num_players, int subblocks_per_block,
                std::unique_ptr<MetaArmStrategy> strategy, std::uint64_t seed);

  Action decide();
  void observe(double reward, bool collided);

  const MetaArm& current_meta() const { return meta_; }
  const std::vector<MetaArm>& meta_log() const { return meta_log_; }
  const MetaArmStrategy& strategy() const { return *strategy_; }

 private:
  int num_arms_;
  int num_players_;
  BlockSchedule schedule_;
  std::unique_ptr<MetaArmStrategy> strategy_;
  Rng rng_;
  long step_in_block_ = 0;
  bool subblock_latched_ = false;
  MetaArm meta_;
  std::vector<MetaArm> meta_log_;
  int last_arm_ = 0;
  bool started_ = false;
};

// Rank-k (k >= 2) node: rests through coordination except its own sub-block,
// where it sweeps arms cyclically until the collision with the coordinator
// hands it its arm for the block.
class CpFollower {
 public:
  CpFollower(int num_arms, int num_players, int subblocks_per_block, int rank);

  Action decide();
  void observe(double reward, bool collided);

  bool latched() const { return latched_; }
  int assigned_arm() const { return assigned_arm_; }
  long coordination_failures() const { return coordination_failures_; }

 private:
  int num_arms_;
  int num_players_;
  BlockSchedule schedule_;
  int rank_;
  long step_in_block_ = 0;
  long block_index_ = 0;  // rotates the sweep phase
  bool latched_ = false;
  int assigned_arm_ = 0;
  int last_arm_ = 0;
  bool failed_this_block_ = false;
  long coordination_failures_ = 0;
};

// Full Coordinate & Play node: Musical Chairs warm-up, then (once the harness
// has assigned ranks from the warm-up outcome) the block protocol above.
class CpPolicy : public NodePolicy {
 public:
  CpPolicy(int num_arms, int num_players, long explore_steps, int subblocks_per_block,
           double learning_rate, double forget, std::uint64_t seed);

  Action decide() override;
  void observe(double reward, bool collided) override;

  // warm-up introspection, used by the harness to assign ranks
  bool warmup_fixed() const { return mc_.is_fixed(); }
  int warmup_fixed_arm() const { return mc_.fixed_arm(); }
  double warmup_estimate() const { return mc_.estimated_mean(mc_.fixed_arm()); }

  // switches from warm-up to the block protocol; rank 1 coordinates
  void start_coordination(int rank);

  bool coordinating() const { return rank_ != 0; }
  int rank() const { return rank_; }
  long coordination_failures() const;
  const CpCoordinator* coordinator() const { return coordinator_.get(); }

 private:
  int num_arms_;
  int num_players_;
  int subblocks_per_block_;
  double learning_rate_;
  double forget_;
  std::uint64_t seed_;
  McPolicy mc_;
  int rank_ = 0;  // 0 = still warming up
  std::unique_ptr<CpCoordinator> coordinator_;
  std::unique_ptr<CpFollower> follower_;
};

// Maps each node's (fixed arm, own estimate of its mean) to a rank, highest
// estimate first; ties broken toward the lower arm index. Element i of the
// result is the rank of node i+1. Throws on duplicate fixed arms.
std::vector<int> assign_ranks(const std::vector<std::pair<int, double>>& fixed_outcomes);

}  // namespace crn
