#include "crn/config.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace crn {

const char* policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kSenseAvoid: return "saa";
    case PolicyKind::kMusicalChairs: return "mc";
    case PolicyKind::kCoordinatePlay: return "cp";
  }
  return "?";
}

namespace {

[[noreturn]] void fail(int line, const std::string& message) {
  throw std::runtime_error("config line " + std::to_string(line) + ": " + message);
}

[[noreturn]] void fail(const std::string& message) {
  throw std::runtime_error("config: " + message);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, int line) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) fail(line, "trailing characters after number '" + v + "'");
    return x;
  } catch (const std::logic_error&) {
    fail(line, "expected a number, got '" + v + "'");
  }
}

long parse_long(const std::string& v, int line) {
  try {
    std::size_t used = 0;
    const long x = std::stol(v, &used);
    if (used != v.size()) fail(line, "trailing characters after integer '" + v + "'");
    return x;
  } catch (const std::logic_error&) {
    fail(line, "expected an integer, got '" + v + "'");
  }
}

std::vector<double> parse_list(const std::string& v, int line) {
  std::vector<double> out;
  std::istringstream in(v);
  std::string token;
  while (in >> token) out.push_back(parse_double(token, line));
  if (out.empty()) fail(line, "expected one or more numbers");
  return out;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

struct RawSegment {
  std::optional<long> start_pri;
  std::optional<long> start_cpi;
  std::vector<double> means;
  int line = 0;
};

}  // namespace

ScenarioConfig load_config(const std::string& text) {
  ScenarioConfig cfg;
  cfg.noise_sigma = {0.05};
  std::vector<RawSegment> raw_segments;
  bool saw_any_key = false;
  bool saw_scene = false;

  enum class Section { kTop, kSchedule, kScene, kEmitter, kRun };
  Section section = Section::kTop;

  std::istringstream in(text);
  std::string raw_line;
  int line = 0;
  while (std::getline(in, raw_line)) {
    ++line;
    const auto hash = raw_line.find('#');
    if (hash != std::string::npos) raw_line.erase(hash);
    const std::string s = trim(raw_line);
    if (s.empty()) continue;

    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header");
      const std::string name = trim(s.substr(1, s.size() - 2));
      if (name == "schedule") {
        section = Section::kSchedule;
        raw_segments.push_back(RawSegment{});
        raw_segments.back().line = line;
      } else if (name == "scene") {
        section = Section::kScene;
        saw_scene = true;
      } else if (name == "emitter") {
        section = Section::kEmitter;
        cfg.emitter_tracked.clear();
      } else if (name == "run") {
        section = Section::kRun;
        cfg.runs.push_back(RunSpec{});
      } else {
        fail(line, "unknown section [" + name + "]");
      }
      saw_any_key = true;
      continue;
    }

    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty() || value.empty()) fail(line, "expected 'key = value'");
    saw_any_key = true;

    switch (section) {
      case Section::kTop:
        if (key == "arms") cfg.num_arms = static_cast<int>(parse_long(value, line));
        else if (key == "players") cfg.num_players = static_cast<int>(parse_long(value, line));
        else if (key == "cpi_count") cfg.cpi_count = static_cast<int>(parse_long(value, line));
        else if (key == "pri_per_cpi") cfg.pri_per_cpi = static_cast<int>(parse_long(value, line));
        else if (key == "trials") cfg.trials = static_cast<int>(parse_long(value, line));
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_long(value, line));
        else if (key == "noise_sigma") cfg.noise_sigma = parse_list(value, line);
        else if (key == "comparator") {
          if (value == "top_n") cfg.comparator = ComparatorMode::kTopNSum;
          else if (value == "single_best") cfg.comparator = ComparatorMode::kSingleBest;
          else fail(line, "comparator must be top_n or single_best");
        } else fail(line, "unknown key '" + key + "'");
        break;

      case Section::kSchedule: {
        RawSegment& seg = raw_segments.back();
        if (key == "start") seg.start_pri = parse_long(value, line);
        else if (key == "start_cpi") seg.start_cpi = parse_long(value, line);
        else if (key == "means") seg.means = parse_list(value, line);
        else fail(line, "unknown [schedule] key '" + key + "'");
        break;
      }

      case Section::kScene:
        if (key == "node") {
          const auto xy = parse_list(value, line);
          if (xy.size() != 2) fail(line, "node needs two coordinates");
          cfg.scene.nodes.push_back({xy[0], xy[1]});
        } else if (key == "target_start") {
          const auto xy = parse_list(value, line);
          if (xy.size() != 2) fail(line, "target_start needs two coordinates");
          cfg.scene.target_start = {xy[0], xy[1]};
        } else if (key == "target_end") {
          const auto xy = parse_list(value, line);
          if (xy.size() != 2) fail(line, "target_end needs two coordinates");
          cfg.scene.target_end = {xy[0], xy[1]};
        } else if (key == "range_sigma0") {
          cfg.scene.range_sigma0 = parse_double(value, line);
        } else if (key == "sinr_alpha") {
          cfg.scene.sinr_map.alpha = parse_double(value, line);
        } else if (key == "sinr_beta") {
          cfg.scene.sinr_map.beta = parse_double(value, line);
        } else fail(line, "unknown [scene] key '" + key + "'");
        break;

      case Section::kEmitter:
        if (key == "tracked") {
          for (double v : parse_list(value, line))
            cfg.emitter_tracked.push_back(static_cast<int>(v));
        } else fail(line, "unknown [emitter] key '" + key + "'");
        break;

      case Section::kRun: {
        RunSpec& run = cfg.runs.back();
        if (key == "name") run.name = value;
        else if (key == "policy") {
          if (value == "saa") run.policy = PolicyKind::kSenseAvoid;
          else if (value == "mc") run.policy = PolicyKind::kMusicalChairs;
          else if (value == "cp") run.policy = PolicyKind::kCoordinatePlay;
          else fail(line, "unknown policy '" + value + "' (expected saa, mc or cp)");
        } else if (key == "emitter") {
          if (value == "on") run.emitter = true;
          else if (value == "off") run.emitter = false;
          else fail(line, "emitter must be on or off");
        } else if (key == "explore_steps") {
          run.explore_steps = parse_long(value, line);
        } else if (key == "subblocks_per_block") {
          run.subblocks_per_block = static_cast<int>(parse_long(value, line));
        } else if (key == "learning_rate") {
          run.learning_rate = parse_double(value, line);
        } else if (key == "forget") {
          run.forget = parse_double(value, line);
        } else fail(line, "unknown [run] key '" + key + "'");
        break;
      }
    }
  }

  if (!saw_any_key) fail("empty document (a scenario needs dimensions, a schedule and runs)");

  // dimensions
  if (cfg.num_arms < 2) fail("arms must be >= 2");
  if (cfg.num_players < 1) fail("players must be >= 1");
  if (cfg.num_players >= cfg.num_arms)
    fail("players must be < arms (got N=" + std::to_string(cfg.num_players) +
         ", M=" + std::to_string(cfg.num_arms) + ")");
  if (cfg.cpi_count < 1) fail("cpi_count must be >= 1");
  if (cfg.pri_per_cpi < 1) fail("pri_per_cpi must be >= 1");
  if (cfg.trials < 1) fail("trials must be >= 1");

  // noise
  if (cfg.noise_sigma.size() != 1 &&
      static_cast<int>(cfg.noise_sigma.size()) != cfg.num_arms)
    fail("noise_sigma needs 1 or arms values");
  for (double s : cfg.noise_sigma)
    if (s < 0.0) fail("noise_sigma must be nonnegative");
  if (cfg.noise_sigma.size() == 1)
    cfg.noise_sigma.assign(cfg.num_arms, cfg.noise_sigma.front());

  // schedule
  if (raw_segments.empty()) fail("no [schedule] segments (there is no default schedule)");
  for (const RawSegment& raw : raw_segments) {
    if (raw.means.empty()) fail(raw.line, "[schedule] needs a means list");
    if (static_cast<int>(raw.means.size()) != cfg.num_arms)
      fail(raw.line, "[schedule] means count " + std::to_string(raw.means.size()) +
                         " != arms " + std::to_string(cfg.num_arms));
    if (raw.start_pri && raw.start_cpi)
      fail(raw.line, "[schedule] must set start or start_cpi, not both");
    ScheduleSegment seg;
    seg.means = raw.means;
    if (raw.start_cpi) {
      seg.start = (*raw.start_cpi - 1) * cfg.pri_per_cpi + 1;
    } else {
      seg.start = raw.start_pri.value_or(1);
    }
    cfg.segments.push_back(seg);
  }
  // RewardSchedule's constructor enforces ordering, bounds and mean ranges
  try {
    cfg.make_schedule();
  } catch (const std::exception& e) {
    fail(std::string("bad schedule: ") + e.what());
  }

  // scene
  if (!saw_scene) fail("missing [scene] section");
  if (cfg.scene.nodes.empty()) fail("[scene] needs at least one node");
  if (cfg.scene.nodes.size() != static_cast<std::size_t>(cfg.num_players))
    fail("[scene] must define exactly one node position per player");
  if (cfg.scene.nodes.size() < 3)
    std::cerr << "warning: fewer than 3 nodes; 2-D trilateration is ambiguous\n";
  if (cfg.scene.range_sigma0 <= 0.0) fail("range_sigma0 must be positive");
  if (cfg.scene.sinr_map.alpha <= 0.0) fail("sinr_alpha must be positive");
  cfg.scene.cpi_count = cfg.cpi_count;
  cfg.scene.pri_per_cpi = cfg.pri_per_cpi;

  // emitter
  if (cfg.emitter_tracked.empty()) fail("[emitter] tracked list is empty");
  std::sort(cfg.emitter_tracked.begin(), cfg.emitter_tracked.end());
  cfg.emitter_tracked.erase(
      std::unique(cfg.emitter_tracked.begin(), cfg.emitter_tracked.end()),
      cfg.emitter_tracked.end());
  for (int p : cfg.emitter_tracked)
    if (p < 1 || p > cfg.num_players) fail("[emitter] tracked player outside [1, N]");

  // runs
  if (cfg.runs.empty()) fail("no [run] sections");
  for (RunSpec& run : cfg.runs) {
    if (run.name.empty()) run.name = policy_name(run.policy);
    if (run.explore_steps < 1) fail("run '" + run.name + "': explore_steps must be >= 1");
    if (run.policy == PolicyKind::kCoordinatePlay) {
      if (run.subblocks_per_block <= cfg.num_players - 1)
        fail("run '" + run.name + "': subblocks_per_block must exceed N-1 = " +
             std::to_string(cfg.num_players - 1));
      if (run.learning_rate <= 0.0) fail("run '" + run.name + "': learning_rate must be > 0");
      if (run.forget <= 0.0 || run.forget > 1.0)
        fail("run '" + run.name + "': forget must lie in (0, 1]");
    }
  }
  for (std::size_t i = 0; i < cfg.runs.size(); ++i)
    for (std::size_t j = i + 1; j < cfg.runs.size(); ++j)
      if (cfg.runs[i].name == cfg.runs[j].name)
        fail("duplicate run name '" + cfg.runs[i].name + "'");

  return cfg;
}

RewardSchedule ScenarioConfig::make_schedule() const {
  return RewardSchedule(horizon(), segments, noise_sigma);
}

std::string ScenarioConfig::resolved_text() const {
  std::ostringstream out;
  out << "arms = " << num_arms << "\n";
  out << "players = " << num_players << "\n";
  out << "cpi_count = " << cpi_count << "\n";
  out << "pri_per_cpi = " << pri_per_cpi << "\n";
  out << "trials = " << trials << "\n";
  out << "seed = " << seed << "\n";
  out << "comparator = "
      << (comparator == ComparatorMode::kTopNSum ? "top_n" : "single_best") << "\n";
  out << "noise_sigma =";
  for (double s : noise_sigma) out << " " << format_number(s);
  out << "\n";
  out << "\n[scene]\n";
  for (const Vec2& n : scene.nodes)
    out << "node = " << format_number(n.x) << " " << format_number(n.y) << "\n";
  out << "target_start = " << format_number(scene.target_start.x) << " "
      << format_number(scene.target_start.y) << "\n";
  out << "target_end = " << format_number(scene.target_end.x) << " "
      << format_number(scene.target_end.y) << "\n";
  out << "range_sigma0 = " << format_number(scene.range_sigma0) << "\n";
  out << "sinr_alpha = " << format_number(scene.sinr_map.alpha) << "\n";
  out << "sinr_beta = " << format_number(scene.sinr_map.beta) << "\n";
  out << "\n[emitter]\n";
  out << "tracked =";
  for (int p : emitter_tracked) out << " " << p;
  out << "\n";
  for (const ScheduleSegment& seg : segments) {
    out << "\n[schedule]\n";
    out << "start = " << seg.start << "\n";
    out << "means =";
    for (double m : seg.means) out << " " << format_number(m);
    out << "\n";
  }
  for (const RunSpec& run : runs) {
    out << "\n[run]\n";
    out << "name = " << run.name << "\n";
    out << "policy = " << policy_name(run.policy) << "\n";
    out << "emitter = " << (run.emitter ? "on" : "off") << "\n";
    if (run.policy != PolicyKind::kSenseAvoid)
      out << "explore_steps = " << run.explore_steps << "\n";
    if (run.policy == PolicyKind::kCoordinatePlay) {
      out << "subblocks_per_block = " << run.subblocks_per_block << "\n";
      out << "learning_rate = " << format_number(run.learning_rate) << "\n";
      out << "forget = " << format_number(run.forget) << "\n";
    }
  }
  return out.str();
}

}  // namespace crn
