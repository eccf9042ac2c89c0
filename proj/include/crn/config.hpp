#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crn/radar.hpp"
#include "crn/round.hpp"
#include "crn/schedule.hpp"

namespace crn {

enum class PolicyKind { kSenseAvoid, kMusicalChairs, kCoordinatePlay };

const char* policy_name(PolicyKind kind);

// One experiment arm: a network of N identical nodes running one policy,
// optionally facing the reactive emitter.
struct RunSpec {
  std::string name;
  PolicyKind policy = PolicyKind::kSenseAvoid;
  bool emitter = false;
  long explore_steps = 3000;     // MC / C&P warm-up length (PRIs)
  int subblocks_per_block = 10;  // C&P block size B
  double learning_rate = 0.05;   // C&P coordinator eta
  double forget = 0.999;         // C&P per-step weight forgetting
};

// Fully resolved scenario: dimensions, schedule, scene, emitter, runs.
struct ScenarioConfig {
  int num_arms = 0;
  int num_players = 0;
  int cpi_count = 0;
  int pri_per_cpi = 0;
  int trials = 1;
  std::uint64_t seed = 1;
  ComparatorMode comparator = ComparatorMode::kTopNSum;
  std::vector<double> noise_sigma;          // per arm
  std::vector<ScheduleSegment> segments;    // starts in PRI units, ascending
  RadarScene scene;
  std::vector<int> emitter_tracked = {1};   // 1-based player ids
  std::vector<RunSpec> runs;

  long horizon() const { return static_cast<long>(cpi_count) * pri_per_cpi; }
  RewardSchedule make_schedule() const;

  // canonical echo of the validated config, defaults materialized; reparsing
  // it yields the same config
  std::string resolved_text() const;
};

// Parses and validates the flat key/value + repeated-section text format.
// Throws std::runtime_error with a line-numbered message on any problem.
ScenarioConfig load_config(const std::string& text);

// Bundled scenario texts compiled into the library from scenarios/*.cfg.
struct BundledScenario {
  const char* name;
  const char* text;
};
const std::vector<BundledScenario>& bundled_scenarios();
const BundledScenario* find_scenario(const std::string& name);

}  // namespace crn
