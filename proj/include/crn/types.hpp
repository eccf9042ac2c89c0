#pragma once

#include <cstdint>
#include <vector>

namespace crn {

// Arms (sub-bands) are indexed 1..M. Players (radar nodes) are indexed 1..N.
// Arm 0 is reserved for the rest action in logs and serialized output.

// A node's per-step choice: transmit in one sub-band, or stay silent.
struct Action {
  int arm = 0;  // 0 = rest, 1..M = sub-band

  static Action rest() { return Action{0}; }
  static Action play(int arm) { return Action{arm}; }
  bool is_play() const { return arm > 0; }

  bool operator==(const Action&) const = default;
};

// Joint record of one resolved step: who played what, who collided, who got paid.
struct RoundOutcome {
  long t = 0;
  std::vector<Action> actions;        // index i = player i+1
  std::vector<std::uint8_t> collided; // c_i(t)
  std::vector<double> rewards;        // y_i(t), in [0,1]; 0 on rest or collision
  int collision_events = 0;           // number of arms chosen by >= 2 players
};

// Player ids (1-based) of everyone flagged as colliding, ascending.
std::vector<int> colliding_set(const RoundOutcome& outcome);

}  // namespace crn
