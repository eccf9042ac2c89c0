#pragma once

#include <string>
#include <vector>

#include "crn/config.hpp"
#include "crn/radar.hpp"

namespace crn {

// Everything one trial of one run produces. Bit-reproducible from
// (config, run, trial_index).
struct TrialSeries {
  std::uint64_t trial_seed = 0;

  // cumulative realized regret per PRI, under both comparators
  std::vector<double> regret_topn;
  std::vector<double> regret_single;

  // per-CPI tracking results
  std::vector<double> pos_error;
  std::vector<Vec2> est_pos;
  std::vector<std::uint8_t> est_fresh;
  std::vector<Vec2> true_pos;

  // per-PRI count of collision events (arms with >= 2 players)
  std::vector<std::uint8_t> collision_events;

  // per-PRI decision log, node-major: entry [t-1]*N + i is node i+1's arm
  // at step t, with 0 recording a rest
  std::vector<std::uint8_t> decisions;

  long first_collision_free_pri = -1;  // first PRI with no collision event
  long last_arm_change_pri = 0;        // last PRI where any node's action changed
  long cp_start_pri = -1;              // first PRI of C&P block 1 (-1 if n/a)
  long coordination_failures = 0;

  std::vector<int> fixed_arms;  // per node; -1 where the policy never fixed
  std::vector<long> fixed_at_pri;
};

// Runs one trial of one experiment arm. trial_index is 0-based.
TrialSeries run_trial(const ScenarioConfig& config, const RunSpec& run, int trial_index);

// All trials of one run, optionally on worker threads. Outputs are identical
// either way: trial k's streams depend only on (config.seed, k).
std::vector<TrialSeries> run_all_trials(const ScenarioConfig& config, const RunSpec& run,
                                        bool parallel);

// Element-wise mean and standard error across equal-length series.
// A single series yields stderr 0.
struct Aggregate {
  std::vector<double> mean;
  std::vector<double> stderr_;
};
Aggregate aggregate_trials(const std::vector<std::vector<double>>& series);

// Per-block sums of collision events (blocks of block_len PRIs from PRI 1).
std::vector<double> block_collision_series(const TrialSeries& trial, int block_len);

// Aggregated results of one run, ready for export.
struct RunResult {
  RunSpec spec;
  Aggregate regret_topn;
  Aggregate regret_single;
  Aggregate pos_error;
  Aggregate block_collisions;
  TrialSeries first_trial;  // trial 0, kept for single-track export
};

RunResult summarize_run(const ScenarioConfig& config, const RunSpec& run,
                        const std::vector<TrialSeries>& trials);

// Writes regret.csv, position_error.csv, positions.csv, collisions.csv and
// manifest.txt into out_dir (created if needed). Deterministic bytes.
void write_series(const ScenarioConfig& config, const std::vector<RunResult>& results,
                  const std::string& out_dir);

// run + aggregate + write for every run in the config; returns written paths.
std::vector<std::string> run_scenario(const ScenarioConfig& config, const std::string& out_dir,
                                      bool parallel);

}  // namespace crn
