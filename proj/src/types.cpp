#include "crn/types.hpp"

namespace crn {

std::vector<int> colliding_set(const RoundOutcome& outcome) {
  std::vector<int> out;
  for (std::size_t i = 0; i < outcome.collided.size(); ++i) {
    if (outcome.collided[i]) out.push_back(static_cast<int>(i) + 1);
  }
  return out;
}

}  // namespace crn
