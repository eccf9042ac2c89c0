#pragma once

#include <optional>
#include <span>
#include <vector>

#include "crn/rng.hpp"
#include "crn/schedule.hpp"

namespace crn {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
double norm(Vec2 v);
double distance(Vec2 a, Vec2 b);

// Static node geometry plus the target's constant-velocity segment. All
// coordinates in meters, SINR in dB.
struct RadarScene {
  std::vector<Vec2> nodes;  // index i = player i+1; nodes do not move
  Vec2 target_start;
  Vec2 target_end;
  int cpi_count = 0;
  int pri_per_cpi = 0;
  SinrMap sinr_map;
  double range_sigma0 = 50.0;  // range noise std (m) at 0 dB, full integration

  Vec2 nodes_centroid() const;
};

// True target position at a CPI (1-based), linear between the waypoints.
// Throws std::out_of_range outside [1, cpi_count].
Vec2 target_position(const RadarScene& scene, int cpi);

// Per-node per-CPI link quality recovered from the node's bandit rewards.
struct CpiQuality {
  double sinr_db = 0.0;
  double clean_fraction = 0.0;  // usable pulses / pulses in the CPI
};

// Averages the node's nonzero rewards over one CPI and maps the average back
// through the SINR relation. nullopt when no pulse carried signal (all PRIs
// rested, collided, or suppressed to zero).
std::optional<CpiQuality> cpi_quality(std::span<const double> rewards, const SinrMap& map);

struct RangeMeasurement {
  int node = 0;  // 0-based index into scene.nodes
  double range = 0.0;
  double noise_std = 0.0;
  bool valid = false;
};

// Range to the true target position plus Gaussian noise with
// std = sigma0 / sqrt(clean_fraction * 10^(sinr_db/10)): matched-filter
// integration over the CPI's usable pulses.
RangeMeasurement range_measurement(const RadarScene& scene, int node, Vec2 true_target,
                                   double sinr_db, double clean_fraction, Rng& rng);

struct TrackEstimate {
  Vec2 position;
  double error = 0.0;  // Euclidean distance to truth
  int cpi = 0;
  bool fresh = false;  // false when the previous estimate was held
};

// Weighted nonlinear least squares over range residuals, Gauss-Newton with
// step halving, initialized at `prior` (node centroid when absent). At most
// 50 iterations, step tolerance 1e-3 m. Requires >= 2 valid measurements;
// with exactly 2, the prior picks between the two circle intersections.
std::optional<Vec2> trilaterate(const RadarScene& scene,
                                const std::vector<RangeMeasurement>& measurements,
                                std::optional<Vec2> prior);

}  // namespace crn
