#include "crn/radar.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace crn {

double norm(Vec2 v) { return std::hypot(v.x, v.y); }
double distance(Vec2 a, Vec2 b) { return norm(a - b); }

Vec2 RadarScene::nodes_centroid() const {
  Vec2 c;
  for (const Vec2& n : nodes) c = c + n;
  const double k = nodes.empty() ? 1.0 : static_cast<double>(nodes.size());
  return {c.x / k, c.y / k};
}

Vec2 target_position(const RadarScene& scene, int cpi) {
  if (cpi < 1 || cpi > scene.cpi_count)
    throw std::out_of_range("cpi " + std::to_string(cpi) + " outside [1, " +
                            std::to_string(scene.cpi_count) + "]");
  const double f = static_cast<double>(cpi) / static_cast<double>(scene.cpi_count);
  return scene.target_start + (scene.target_end - scene.target_start) * f;
}

std::optional<CpiQuality> cpi_quality(std::span<const double> rewards, const SinrMap& map) {
  double sum = 0.0;
  long used = 0;
  for (double y : rewards) {
    if (y > 0.0) {
      sum += y;
      ++used;
    }
  }
  if (used == 0) return std::nullopt;
  CpiQuality q;
  q.sinr_db = map.sinr_from_mean(sum / static_cast<double>(used));
  q.clean_fraction = static_cast<double>(used) / static_cast<double>(rewards.size());
  return q;
}

RangeMeasurement range_measurement(const RadarScene& scene, int node, Vec2 true_target,
                                   double sinr_db, double clean_fraction, Rng& rng) {
  RangeMeasurement m;
  m.node = node;
  if (clean_fraction <= 0.0) return m;  // invalid: no usable pulses
  const double linear_sinr = std::pow(10.0, sinr_db / 10.0);
  m.noise_std = scene.range_sigma0 / std::sqrt(clean_fraction * linear_sinr);
  m.range = rng.normal(distance(scene.nodes[node], true_target), m.noise_std);
  m.valid = true;
  return m;
}

namespace {

double fit_cost(const RadarScene& scene, const std::vector<RangeMeasurement>& ms, Vec2 p) {
  double cost = 0.0;
  for (const auto& m : ms) {
    if (!m.valid) continue;
    const double r = (distance(p, scene.nodes[m.node]) - m.range) / m.noise_std;
    cost += r * r;
  }
  return cost;
}

}  // namespace

std::optional<Vec2> trilaterate(const RadarScene& scene,
                                const std::vector<RangeMeasurement>& measurements,
                                std::optional<Vec2> prior) {
  int valid = 0;
  for (const auto& m : measurements) {
    if (m.valid) ++valid;
  }
  if (valid < 2) return std::nullopt;

  Vec2 p = prior.value_or(scene.nodes_centroid());
  constexpr int kMaxIterations = 50;
  constexpr double kStepTolerance = 1e-3;  // meters

  for (int iter = 0; iter < kMaxIterations; ++iter) {
    // normal equations of the weighted Gauss-Newton step
    double jtj00 = 0.0, jtj01 = 0.0, jtj11 = 0.0, jtr0 = 0.0, jtr1 = 0.0;
    for (const auto& m : measurements) {
      if (!m.valid) continue;
      Vec2 d = p - scene.nodes[m.node];
      double dist = norm(d);
      if (dist < 1e-9) {  // sitting on a node: nudge off the singularity
        d = {1e-6, 0.0};
        dist = 1e-6;
      }
      const double w = 1.0 / m.noise_std;
      const double ux = d.x / dist * w;
      const double uy = d.y / dist * w;
      const double res = (dist - m.range) * w;
      jtj00 += ux * ux;
      jtj01 += ux * uy;
      jtj11 += uy * uy;
      jtr0 += ux * res;
      jtr1 += uy * res;
    }
    double det = jtj00 * jtj11 - jtj01 * jtj01;
    if (std::abs(det) < 1e-12) {
      // degenerate geometry: damp toward gradient descent
      jtj00 += 1e-6;
      jtj11 += 1e-6;
      det = jtj00 * jtj11 - jtj01 * jtj01;
    }
    Vec2 step{-(jtj11 * jtr0 - jtj01 * jtr1) / det, -(jtj00 * jtr1 - jtj01 * jtr0) / det};

    // halve the step until the cost stops increasing
    const double base_cost = fit_cost(scene, measurements, p);
    double scale = 1.0;
    Vec2 next = p + step;
    int halvings = 0;
    while (fit_cost(scene, measurements, next) > base_cost && halvings < 12) {
      scale *= 0.5;
      next = p + step * scale;
      ++halvings;
    }
    const double moved = norm(next - p);
    p = next;
    if (moved < kStepTolerance) break;
  }
  return p;
}

}  // namespace crn
