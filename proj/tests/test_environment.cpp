#include <stdexcept>

#include "crn/round.hpp"
#include "crn/schedule.hpp"
#include "doctest.h"

using namespace crn;

namespace {

// the baseline shifting schedule expressed at step resolution: shift after 200
RewardSchedule shifting_schedule() {
  return RewardSchedule(500,
                        {{1, {0.95, 1.0, 0.9, 0.3, 0.3}}, {201, {0.3, 0.3, 0.95, 1.0, 0.9}}},
                        {0.05});
}

}  // namespace

TEST_CASE("mean_at follows the pre-committed segments") {
  const auto schedule = shifting_schedule();
  CHECK(schedule.mean_at(4, 100) == doctest::Approx(0.3));
  CHECK(schedule.mean_at(4, 300) == doctest::Approx(1.0));
  CHECK(schedule.mean_at(2, 200) == doctest::Approx(1.0));
  CHECK(schedule.mean_at(2, 201) == doctest::Approx(0.3));
  CHECK(schedule.change_points() == std::vector<long>{201});
  CHECK_THROWS_AS(schedule.mean_at(1, 0), std::out_of_range);
  CHECK_THROWS_AS(schedule.mean_at(1, 501), std::out_of_range);
  CHECK_THROWS_AS(schedule.mean_at(6, 10), std::invalid_argument);
}

TEST_CASE("mean_at is constant when there are no change points") {
  const RewardSchedule schedule(100, {{1, {0.4, 0.6}}}, {0.0});
  CHECK(schedule.change_points().empty());
  for (long t = 1; t <= 100; ++t) {
    CHECK(schedule.mean_at(1, t) == 0.4);
    CHECK(schedule.mean_at(2, t) == 0.6);
  }
}

TEST_CASE("piecewise constancy between change points") {
  const auto schedule = shifting_schedule();
  for (int arm = 1; arm <= 5; ++arm) {
    for (long t = 1; t <= 200; ++t) CHECK(schedule.mean_at(arm, t) == schedule.mean_at(arm, 1));
    for (long t = 201; t <= 500; ++t)
      CHECK(schedule.mean_at(arm, t) == schedule.mean_at(arm, 201));
  }
}

TEST_CASE("schedule construction rejects malformed inputs") {
  CHECK_THROWS(RewardSchedule(10, {}, {0.0}));
  CHECK_THROWS(RewardSchedule(10, {{2, {0.5, 0.5}}}, {0.0}));                    // must start at 1
  CHECK_THROWS(RewardSchedule(10, {{1, {0.5, 1.5}}}, {0.0}));                    // mean > 1
  CHECK_THROWS(RewardSchedule(10, {{1, {0.5, 0.5}}, {20, {0.1, 0.1}}}, {0.0}));  // beyond horizon
  CHECK_THROWS(RewardSchedule(10, {{1, {0.5, 0.5}}, {1, {0.1, 0.1}}}, {0.0}));   // not ascending
  CHECK_THROWS(RewardSchedule(10, {{1, {0.5, 0.5}}}, {-0.1}));                   // negative sigma
}

TEST_CASE("sample_reward: zero noise is exact, draws stay clamped") {
  Rng rng(5);
  CHECK(sample_reward(0.5, 0.0, rng) == 0.5);
  for (int i = 0; i < 1000; ++i) {
    const double y = sample_reward(1.0, 0.05, rng);
    CHECK(y <= 1.0);
    CHECK(y >= 0.0);
  }
}

TEST_CASE("sample_reward: empirical mean matches far from the clamp bounds") {
  Rng rng(99);
  double sum = 0.0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) sum += sample_reward(0.5, 0.05, rng);
  CHECK(sum / draws == doctest::Approx(0.5).epsilon(0.002));  // 0.5 +- 0.001
}

TEST_CASE("reactive emitter suppresses last round's tracked arms") {
  ReactiveEmitter emitter({1});
  RoundOutcome round;
  round.actions = {Action::play(2), Action::play(4)};

  emitter.advance(round);
  CHECK(emitter.suppressed_arms() == std::vector<int>{2});
  CHECK(emitter.suppresses(2));
  CHECK_FALSE(emitter.suppresses(4));

  round.actions = {Action::rest(), Action::play(4)};
  emitter.advance(round);
  CHECK(emitter.suppressed_arms().empty());
}

TEST_CASE("reactive emitter applies to collided plays and multiple tracked nodes") {
  ReactiveEmitter emitter({1, 2});
  RoundOutcome round;
  round.actions = {Action::play(3), Action::play(3), Action::play(5)};
  round.collided = {1, 1, 0};
  emitter.advance(round);
  CHECK(emitter.suppressed_arms() == std::vector<int>{3});
}

TEST_CASE("effective_mean: suppression forces zero, otherwise the schedule wins") {
  const auto schedule = shifting_schedule();
  ReactiveEmitter emitter({1});
  RoundOutcome round;
  round.actions = {Action::play(2)};
  emitter.advance(round);

  CHECK(effective_mean(schedule, &emitter, 2, 10) == 0.0);
  CHECK(effective_mean(schedule, &emitter, 1, 10) == doctest::Approx(0.95));
  CHECK(effective_mean(schedule, nullptr, 2, 10) == doctest::Approx(1.0));
  CHECK_THROWS_AS(effective_mean(schedule, &emitter, 2, 501), std::out_of_range);
}

TEST_CASE("pre-commitment holds without the emitter and breaks with it") {
  const auto schedule = shifting_schedule();

  // two different action histories; the schedule's means never move
  ReactiveEmitter emitter({1});
  RoundOutcome history_a, history_b;
  history_a.actions = {Action::play(1)};
  history_b.actions = {Action::play(2)};

  for (int arm = 1; arm <= 5; ++arm)
    CHECK(effective_mean(schedule, nullptr, arm, 50) ==
          effective_mean(schedule, nullptr, arm, 50));

  emitter.advance(history_a);
  const double seen_after_a = effective_mean(schedule, &emitter, 1, 50);
  emitter.advance(history_b);
  const double seen_after_b = effective_mean(schedule, &emitter, 1, 50);
  CHECK(seen_after_a == 0.0);
  CHECK(seen_after_b == doctest::Approx(0.95));  // same (arm, t), different history
}

TEST_CASE("SINR map: affine in both directions") {
  const SinrMap map{0.05, 0.0};
  CHECK(map.mean_from_sinr(20.0) == doctest::Approx(1.0));
  CHECK(map.mean_from_sinr(30.0) == 1.0);  // clamped
  CHECK(map.mean_from_sinr(-5.0) == 0.0);
  CHECK(map.sinr_from_mean(0.3) == doctest::Approx(6.0));

  const SinrMap shifted{0.04, 2.5};
  for (double sinr = -2.0; sinr < 22.0; sinr += 0.7) {
    const double mean = shifted.mean_from_sinr(sinr);
    if (mean > 0.0 && mean < 1.0)
      CHECK(shifted.sinr_from_mean(mean) == doctest::Approx(sinr).epsilon(1e-12));
  }
}
