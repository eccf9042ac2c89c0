#pragma once

#include <vector>

#include "crn/rng.hpp"
#include "crn/types.hpp"

namespace crn {

// One piece of a piecewise-constant mean schedule. `start` is a 1-based step
// index; the segment covers steps [start, next segment's start).
struct ScheduleSegment {
  long start = 1;
  std::vector<double> means;  // one per arm, each in [0,1]
};

// The environment's pre-committed per-arm mean sequence plus per-arm noise
// scale. Immutable after construction; shareable across trials.
class RewardSchedule {
 public:
  RewardSchedule(long horizon, std::vector<ScheduleSegment> segments,
                 std::vector<double> noise_sigma);

  long horizon() const { return horizon_; }
  int num_arms() const { return num_arms_; }

  // mean of `arm` at step t (1-based). Throws std::out_of_range outside [1, T].
  double mean_at(int arm, long t) const;

  double noise_sigma(int arm) const { return noise_sigma_[arm - 1]; }

  // index into segments() for step t
  int segment_index(long t) const;

  const std::vector<ScheduleSegment>& segments() const { return segments_; }

  // steps at which any mean changes (starts of all segments after the first)
  const std::vector<long>& change_points() const { return change_points_; }

 private:
  long horizon_;
  int num_arms_;
  std::vector<ScheduleSegment> segments_;
  std::vector<double> noise_sigma_;
  std::vector<long> change_points_;
};

// Gaussian draw truncated to [0,1] by clamping. sigma == 0 returns the mean
// exactly and consumes no randomness.
double sample_reward(double mean, double sigma, Rng& rng);

// Affine map between sub-band SINR (dB) and mean reward.
struct SinrMap {
  double alpha = 0.05;  // per-dB slope, > 0
  double beta = 0.0;    // dB offset

  double mean_from_sinr(double sinr_db) const;  // clamped to [0,1]
  double sinr_from_mean(double mean) const;     // exact inverse on (0,1)
};

// Interferer that occupies, at step t, every sub-band a tracked node used at
// t-1, forcing its mean to zero. Violates the environment's pre-commitment.
class ReactiveEmitter {
 public:
  explicit ReactiveEmitter(std::vector<int> tracked_players);

  // feed the completed round t-1; updates the suppressed set for step t
  void advance(const RoundOutcome& last_round);

  bool suppresses(int arm) const;
  const std::vector<int>& suppressed_arms() const { return suppressed_; }
  const std::vector<int>& tracked_players() const { return tracked_; }

 private:
  std::vector<int> tracked_;    // 1-based player ids
  std::vector<int> suppressed_; // sorted arm indices; empty at t=1
};

// Schedule mean with the emitter's suppression applied (emitter may be null).
double effective_mean(const RewardSchedule& schedule, const ReactiveEmitter* emitter,
                      int arm, long t);

}  // namespace crn
