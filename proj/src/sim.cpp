#include "crn/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <thread>

#include "crn/policies.hpp"
#include "crn/round.hpp"

namespace crn {

namespace {

std::vector<std::unique_ptr<NodePolicy>> make_network(const ScenarioConfig& config,
                                                      const RunSpec& run,
                                                      std::uint64_t trial_key) {
  std::vector<std::unique_ptr<NodePolicy>> nodes;
  nodes.reserve(config.num_players);
  for (int i = 0; i < config.num_players; ++i) {
    const std::uint64_t seed = mix_seed(trial_key, 0x100 + static_cast<std::uint64_t>(i));
    switch (run.policy) {
      case PolicyKind::kSenseAvoid:
        nodes.push_back(std::make_unique<SaaPolicy>(config.num_arms, seed));
        break;
      case PolicyKind::kMusicalChairs:
        nodes.push_back(std::make_unique<McPolicy>(config.num_arms, run.explore_steps, seed));
        break;
      case PolicyKind::kCoordinatePlay:
        nodes.push_back(std::make_unique<CpPolicy>(config.num_arms, config.num_players,
                                                   run.explore_steps, run.subblocks_per_block,
                                                   run.learning_rate, run.forget, seed));
        break;
    }
  }
  return nodes;
}

}  // namespace

TrialSeries run_trial(const ScenarioConfig& config, const RunSpec& run, int trial_index) {
  const RewardSchedule schedule = config.make_schedule();
  const int n = config.num_players;
  const int m = config.num_arms;
  const int pri_per_cpi = config.pri_per_cpi;
  const long horizon = config.horizon();

  const std::uint64_t trial_key =
      mix_seed(config.seed, static_cast<std::uint64_t>(trial_index) + 1);
  Rng env_rng(mix_seed(trial_key, 0xE17));
  Rng meas_rng(mix_seed(trial_key, 0x3EA5));

  auto nodes = make_network(config, run, trial_key);

  std::unique_ptr<ReactiveEmitter> emitter;
  if (run.emitter) emitter = std::make_unique<ReactiveEmitter>(config.emitter_tracked);

  // per-segment comparator values; the schedule is piecewise constant
  const auto& segments = schedule.segments();
  std::vector<double> seg_topn(segments.size()), seg_single(segments.size());
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const long t0 = segments[s].start;
    seg_topn[s] = oracle_comparator(schedule, t0, ComparatorMode::kTopNSum, n);
    seg_single[s] = oracle_comparator(schedule, t0, ComparatorMode::kSingleBest, n);
  }

  const ArmSampler sampler = [&](int arm, long t) {
    const double mean = effective_mean(schedule, emitter.get(), arm, t);
    return sample_reward(mean, schedule.noise_sigma(arm), env_rng);
  };

  TrialSeries series;
  series.trial_seed = trial_key;
  series.regret_topn.reserve(horizon);
  series.regret_single.reserve(horizon);
  series.collision_events.reserve(horizon);
  series.decisions.reserve(horizon * n);
  series.pos_error.reserve(config.cpi_count);
  series.fixed_arms.assign(n, -1);
  series.fixed_at_pri.assign(n, -1);

  std::vector<Action> actions(n);
  std::vector<Action> prev_actions(n);
  bool have_prev = false;

  std::vector<std::vector<double>> cpi_rewards(n, std::vector<double>(pri_per_cpi, 0.0));
  Vec2 held = config.scene.nodes_centroid();

  double cum_reward = 0.0, cum_topn = 0.0, cum_single = 0.0;
  int seg_idx = 0;
  bool cp_started = false;
  const bool is_cp = run.policy == PolicyKind::kCoordinatePlay;

  for (long t = 1; t <= horizon; ++t) {
    while (seg_idx + 1 < static_cast<int>(segments.size()) &&
           segments[seg_idx + 1].start <= t)
      ++seg_idx;

    for (int i = 0; i < n; ++i) actions[i] = nodes[i]->decide();
    const RoundOutcome outcome = resolve_round(actions, m, sampler, t);
    for (int i = 0; i < n; ++i) nodes[i]->observe(outcome.rewards[i], outcome.collided[i]);

    double round_reward = 0.0;
    for (double y : outcome.rewards) round_reward += y;
    cum_reward += round_reward;
    cum_topn += seg_topn[seg_idx];
    cum_single += seg_single[seg_idx];
    series.regret_topn.push_back(cum_topn - cum_reward);
    series.regret_single.push_back(cum_single - cum_reward);
    series.collision_events.push_back(static_cast<std::uint8_t>(outcome.collision_events));
    for (int i = 0; i < n; ++i)
      series.decisions.push_back(static_cast<std::uint8_t>(actions[i].arm));

    if (series.first_collision_free_pri < 0 && outcome.collision_events == 0)
      series.first_collision_free_pri = t;
    if (have_prev) {
      for (int i = 0; i < n; ++i) {
        if (!(actions[i] == prev_actions[i])) {
          series.last_arm_change_pri = t;
          break;
        }
      }
    }
    prev_actions = actions;
    have_prev = true;

    const int slot = static_cast<int>((t - 1) % pri_per_cpi);
    for (int i = 0; i < n; ++i) cpi_rewards[i][slot] = outcome.rewards[i];

    if (t % pri_per_cpi == 0) {
      const int cpi = static_cast<int>(t / pri_per_cpi);
      const Vec2 truth = target_position(config.scene, cpi);
      std::vector<RangeMeasurement> measurements;
      for (int i = 0; i < n; ++i) {
        const auto quality = cpi_quality(cpi_rewards[i], config.scene.sinr_map);
        if (quality)
          measurements.push_back(range_measurement(config.scene, i, truth, quality->sinr_db,
                                                   quality->clean_fraction, meas_rng));
      }
      const auto fit = trilaterate(config.scene, measurements, held);
      bool fresh = false;
      if (fit) {
        held = *fit;
        fresh = true;
      }
      series.true_pos.push_back(truth);
      series.est_pos.push_back(held);
      series.est_fresh.push_back(fresh ? 1 : 0);
      series.pos_error.push_back(distance(held, truth));
    }

    if (emitter) emitter->advance(outcome);

    if (is_cp && !cp_started) {
      bool all_fixed = true;
      for (int i = 0; i < n; ++i) {
        if (!static_cast<CpPolicy*>(nodes[i].get())->warmup_fixed()) {
          all_fixed = false;
          break;
        }
      }
      if (all_fixed) {
        std::vector<std::pair<int, double>> outcomes;
        outcomes.reserve(n);
        for (int i = 0; i < n; ++i) {
          auto* cp = static_cast<CpPolicy*>(nodes[i].get());
          outcomes.emplace_back(cp->warmup_fixed_arm(), cp->warmup_estimate());
        }
        const std::vector<int> ranks = assign_ranks(outcomes);
        for (int i = 0; i < n; ++i)
          static_cast<CpPolicy*>(nodes[i].get())->start_coordination(ranks[i]);
        cp_started = true;
        series.cp_start_pri = t + 1;
      }
    }
  }

  for (int i = 0; i < n; ++i) {
    if (run.policy == PolicyKind::kMusicalChairs) {
      auto* mc = static_cast<McPolicy*>(nodes[i].get());
      if (mc->is_fixed()) {
        series.fixed_arms[i] = mc->fixed_arm();
        series.fixed_at_pri[i] = mc->fixed_at_step();
      }
    } else if (is_cp) {
      auto* cp = static_cast<CpPolicy*>(nodes[i].get());
      if (cp->warmup_fixed()) series.fixed_arms[i] = cp->warmup_fixed_arm();
      series.coordination_failures += cp->coordination_failures();
    }
  }
  return series;
}

std::vector<TrialSeries> run_all_trials(const ScenarioConfig& config, const RunSpec& run,
                                        bool parallel) {
  std::vector<TrialSeries> all(config.trials);
  if (!parallel || config.trials == 1) {
    for (int k = 0; k < config.trials; ++k) all[k] = run_trial(config, run, k);
    return all;
  }
  const unsigned workers =
      std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                         static_cast<unsigned>(config.trials));
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (int k = next.fetch_add(1); k < config.trials; k = next.fetch_add(1))
        all[k] = run_trial(config, run, k);
    });
  }
  for (auto& th : pool) th.join();
  return all;
}

Aggregate aggregate_trials(const std::vector<std::vector<double>>& series) {
  if (series.empty()) throw std::invalid_argument("aggregate_trials: no series");
  const std::size_t len = series.front().size();
  for (const auto& s : series) {
    if (s.size() != len) throw std::invalid_argument("aggregate_trials: length mismatch");
  }
  const double k = static_cast<double>(series.size());
  Aggregate agg;
  agg.mean.assign(len, 0.0);
  agg.stderr_.assign(len, 0.0);
  for (const auto& s : series) {
    for (std::size_t j = 0; j < len; ++j) agg.mean[j] += s[j];
  }
  for (double& v : agg.mean) v /= k;
  if (series.size() > 1) {
    for (const auto& s : series) {
      for (std::size_t j = 0; j < len; ++j) {
        const double d = s[j] - agg.mean[j];
        agg.stderr_[j] += d * d;
      }
    }
    for (double& v : agg.stderr_) v = std::sqrt(v / (k - 1.0)) / std::sqrt(k);
  }
  return agg;
}

std::vector<double> block_collision_series(const TrialSeries& trial, int block_len) {
  const long blocks = static_cast<long>(trial.collision_events.size()) / block_len;
  std::vector<double> out(blocks, 0.0);
  for (long b = 0; b < blocks; ++b) {
    long sum = 0;
    for (int j = 0; j < block_len; ++j) sum += trial.collision_events[b * block_len + j];
    out[b] = static_cast<double>(sum);
  }
  return out;
}

RunResult summarize_run(const ScenarioConfig& config, const RunSpec& run,
                        const std::vector<TrialSeries>& trials) {
  RunResult result;
  result.spec = run;
  std::vector<std::vector<double>> regret_topn, regret_single, pos_error, blocks;
  regret_topn.reserve(trials.size());
  for (const TrialSeries& t : trials) {
    regret_topn.push_back(t.regret_topn);
    regret_single.push_back(t.regret_single);
    pos_error.push_back(t.pos_error);
    blocks.push_back(block_collision_series(t, run.subblocks_per_block * config.num_arms));
  }
  result.regret_topn = aggregate_trials(regret_topn);
  result.regret_single = aggregate_trials(regret_single);
  result.pos_error = aggregate_trials(pos_error);
  result.block_collisions = aggregate_trials(blocks);
  result.first_trial = trials.front();
  return result;
}

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace

void write_series(const ScenarioConfig& config, const std::vector<RunResult>& results,
                  const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const auto path = [&](const char* name) { return (fs::path(out_dir) / name).string(); };

  std::string regret =
      "pri,regret_mean,regret_stderr,algorithm,regret_single_mean,regret_single_stderr\n";
  for (const RunResult& r : results) {
    for (std::size_t j = 0; j < r.regret_topn.mean.size(); ++j) {
      regret += std::to_string(j + 1);
      regret += ',';
      regret += fmt(r.regret_topn.mean[j]);
      regret += ',';
      regret += fmt(r.regret_topn.stderr_[j]);
      regret += ',';
      regret += r.spec.name;
      regret += ',';
      regret += fmt(r.regret_single.mean[j]);
      regret += ',';
      regret += fmt(r.regret_single.stderr_[j]);
      regret += '\n';
    }
  }
  write_file(path("regret.csv"), regret);

  std::string error_csv = "cpi,pos_error_mean,pos_error_stderr,algorithm\n";
  for (const RunResult& r : results) {
    for (std::size_t j = 0; j < r.pos_error.mean.size(); ++j) {
      error_csv += std::to_string(j + 1);
      error_csv += ',';
      error_csv += fmt(r.pos_error.mean[j]);
      error_csv += ',';
      error_csv += fmt(r.pos_error.stderr_[j]);
      error_csv += ',';
      error_csv += r.spec.name;
      error_csv += '\n';
    }
  }
  write_file(path("position_error.csv"), error_csv);

  // single-trial track (trial 0) for scatter plots
  std::string positions = "cpi,est_x,est_y,true_x,true_y,fresh,algorithm\n";
  for (const RunResult& r : results) {
    const TrialSeries& t = r.first_trial;
    for (std::size_t j = 0; j < t.est_pos.size(); ++j) {
      positions += std::to_string(j + 1);
      positions += ',';
      positions += fmt(t.est_pos[j].x);
      positions += ',';
      positions += fmt(t.est_pos[j].y);
      positions += ',';
      positions += fmt(t.true_pos[j].x);
      positions += ',';
      positions += fmt(t.true_pos[j].y);
      positions += ',';
      positions += std::to_string(static_cast<int>(t.est_fresh[j]));
      positions += ',';
      positions += r.spec.name;
      positions += '\n';
    }
  }
  write_file(path("positions.csv"), positions);

  // trial-0 decision log; 0 records a rest
  std::string actions = "pri";
  for (int i = 1; i <= config.num_players; ++i)
    actions += ",arm_node" + std::to_string(i);
  actions += ",algorithm\n";
  for (const RunResult& r : results) {
    const TrialSeries& t = r.first_trial;
    const int n = config.num_players;
    for (long pri = 1; pri <= static_cast<long>(t.decisions.size()) / n; ++pri) {
      actions += std::to_string(pri);
      for (int i = 0; i < n; ++i) {
        actions += ',';
        actions += std::to_string(static_cast<int>(t.decisions[(pri - 1) * n + i]));
      }
      actions += ',';
      actions += r.spec.name;
      actions += '\n';
    }
  }
  write_file(path("actions.csv"), actions);

  std::string collisions = "block,collisions_mean,collisions_stderr,algorithm\n";
  for (const RunResult& r : results) {
    for (std::size_t j = 0; j < r.block_collisions.mean.size(); ++j) {
      collisions += std::to_string(j + 1);
      collisions += ',';
      collisions += fmt(r.block_collisions.mean[j]);
      collisions += ',';
      collisions += fmt(r.block_collisions.stderr_[j]);
      collisions += ',';
      collisions += r.spec.name;
      collisions += '\n';
    }
  }
  write_file(path("collisions.csv"), collisions);

  write_file(path("manifest.txt"), config.resolved_text());
}

std::vector<std::string> run_scenario(const ScenarioConfig& config, const std::string& out_dir,
                                      bool parallel) {
  std::vector<RunResult> results;
  results.reserve(config.runs.size());
  for (const RunSpec& run : config.runs) {
    const auto trials = run_all_trials(config, run, parallel);
    results.push_back(summarize_run(config, run, trials));
  }
  write_series(config, results, out_dir);
  std::vector<std::string> files;
  for (const char* name : {"regret.csv", "position_error.csv", "positions.csv", "actions.csv",
                           "collisions.csv", "manifest.txt"})
    files.push_back((std::filesystem::path(out_dir) / name).string());
  return files;
}

}  // namespace crn
