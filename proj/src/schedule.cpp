#include "crn/schedule.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace crn {

RewardSchedule::RewardSchedule(long horizon, std::vector<ScheduleSegment> segments,
                               std::vector<double> noise_sigma)
    : horizon_(horizon), segments_(std::move(segments)), noise_sigma_(std::move(noise_sigma)) {
  if (horizon_ < 1) throw std::invalid_argument("schedule horizon must be >= 1");
  if (segments_.empty()) throw std::invalid_argument("schedule needs at least one segment");
  if (segments_.front().start != 1)
    throw std::invalid_argument("first schedule segment must start at step 1");
  num_arms_ = static_cast<int>(segments_.front().means.size());
  if (num_arms_ < 2) throw std::invalid_argument("schedule needs at least 2 arms");
  long prev = 0;
  for (const auto& seg : segments_) {
    if (static_cast<int>(seg.means.size()) != num_arms_)
      throw std::invalid_argument("schedule segments disagree on arm count");
    if (seg.start <= prev) throw std::invalid_argument("segment starts must be ascending");
    if (seg.start > horizon_) throw std::invalid_argument("segment starts beyond the horizon");
    for (double m : seg.means) {
      if (m < 0.0 || m > 1.0) throw std::invalid_argument("schedule means must lie in [0,1]");
    }
    prev = seg.start;
  }
  if (noise_sigma_.size() == 1) noise_sigma_.assign(num_arms_, noise_sigma_.front());
  if (static_cast<int>(noise_sigma_.size()) != num_arms_)
    throw std::invalid_argument("noise sigma count must be 1 or match the arm count");
  for (double s : noise_sigma_) {
    if (s < 0.0) throw std::invalid_argument("noise sigma must be nonnegative");
  }
  for (std::size_t k = 1; k < segments_.size(); ++k) change_points_.push_back(segments_[k].start);
}

int RewardSchedule::segment_index(long t) const {
  if (t < 1 || t > horizon_)
    throw std::out_of_range("schedule step " + std::to_string(t) + " outside [1, " +
                            std::to_string(horizon_) + "]");
  int idx = 0;
  for (std::size_t k = 1; k < segments_.size() && segments_[k].start <= t; ++k)
    idx = static_cast<int>(k);
  return idx;
}

double RewardSchedule::mean_at(int arm, long t) const {
  if (arm < 1 || arm > num_arms_)
    throw std::invalid_argument("arm index " + std::to_string(arm) + " outside [1, " +
                                std::to_string(num_arms_) + "]");
  return segments_[segment_index(t)].means[arm - 1];
}

double sample_reward(double mean, double sigma, Rng& rng) {
  if (sigma <= 0.0) return std::clamp(mean, 0.0, 1.0);
  return std::clamp(rng.normal(mean, sigma), 0.0, 1.0);
}

double SinrMap::mean_from_sinr(double sinr_db) const {
  return std::clamp(alpha * (sinr_db + beta), 0.0, 1.0);
}

double SinrMap::sinr_from_mean(double mean) const { return mean / alpha - beta; }

ReactiveEmitter::ReactiveEmitter(std::vector<int> tracked_players)
    : tracked_(std::move(tracked_players)) {
  std::sort(tracked_.begin(), tracked_.end());
  tracked_.erase(std::unique(tracked_.begin(), tracked_.end()), tracked_.end());
}

void ReactiveEmitter::advance(const RoundOutcome& last_round) {
  suppressed_.clear();
  for (int player : tracked_) {
    const auto idx = static_cast<std::size_t>(player - 1);
    if (idx >= last_round.actions.size()) continue;
    const Action a = last_round.actions[idx];
    if (a.is_play()) suppressed_.push_back(a.arm);
  }
  std::sort(suppressed_.begin(), suppressed_.end());
  suppressed_.erase(std::unique(suppressed_.begin(), suppressed_.end()), suppressed_.end());
}

bool ReactiveEmitter::suppresses(int arm) const {
  return std::binary_search(suppressed_.begin(), suppressed_.end(), arm);
}

double effective_mean(const RewardSchedule& schedule, const ReactiveEmitter* emitter, int arm,
                      long t) {
  if (emitter != nullptr && emitter->suppresses(arm)) {
    (void)schedule.mean_at(arm, t);  // still enforce range checks
    return 0.0;
  }
  return schedule.mean_at(arm, t);
}

}  // namespace crn
