#include <cmath>
#include <vector>

#include "doctest.h"
#include "rmab/cee.hpp"
#include "rmab/errors.hpp"
#include "rmab/sim.hpp"
#include "support/configs.hpp"
#include "support/oracle.hpp"

using namespace rmab;

namespace {

CeeOptions basic_options(int n, int k, StepSchedule schedule = StepSchedule::constant(1)) {
  CeeOptions o;
  o.arm_count = n;
  o.select_count = k;
  o.exploration = 2.1;
  o.schedule = std::move(schedule);
  return o;
}

// Feeds one step with the given per-arm sample means (aligned with the
// decision's arm order) and a full-length play.
void feed(CeePolicy& p, const Decision& d, const std::vector<double>& means) {
  StepReport r;
  r.arms = d.arms;
  r.sample_means = means;
  r.end_states.assign(d.arms.size(), 0);
  r.slots_played = d.slots;
  p.report_step(r);
}

}  // namespace

TEST_CASE("construction rejects unusable parameter sets") {
  CHECK_THROWS_AS(CeePolicy(basic_options(1, 1)), ConfigError);
  CHECK_THROWS_AS(CeePolicy(basic_options(3, 0)), ConfigError);
  CHECK_THROWS_AS(CeePolicy(basic_options(3, 3)), ConfigError);
  CHECK_THROWS_AS(CeePolicy(basic_options(3, 4)), ConfigError);

  auto o = basic_options(3, 1);
  o.exploration = 2.0;
  CHECK_THROWS_AS(CeePolicy{o}, ConfigError);
  o.allow_small_exploration = true;
  CHECK_NOTHROW(CeePolicy{o});
  o.exploration = -1.0;
  CHECK_THROWS_AS(CeePolicy{o}, ConfigError);
}

TEST_CASE("initialization covers every arm once in index batches") {
  SUBCASE("single play visits arms in order") {
    CeePolicy p(basic_options(3, 1, StepSchedule::constant(4)));
    for (int a = 0; a < 3; ++a) {
      CHECK(p.initializing());
      const auto d = p.next_decision();
      CHECK(d.arms == std::vector<int>{a});
      CHECK(d.slots == 4);
      feed(p, d, {0.5});
    }
    CHECK_FALSE(p.initializing());
    CHECK(p.play_counts() == std::vector<std::int64_t>{1, 1, 1});
    CHECK(p.elapsed_slots() == 12);
    CHECK(p.global_step() == 4);
  }
  SUBCASE("multi play pads the last batch with the lowest arm ids") {
    CeePolicy p(basic_options(5, 2, StepSchedule::constant(3)));
    const auto d1 = p.next_decision();
    CHECK(d1.arms == std::vector<int>{0, 1});
    feed(p, d1, {0.1, 0.2});
    const auto d2 = p.next_decision();
    CHECK(d2.arms == std::vector<int>{2, 3});
    feed(p, d2, {0.3, 0.4});
    const auto d3 = p.next_decision();
    CHECK(d3.arms == std::vector<int>{0, 4});
    feed(p, d3, {0.6, 0.5});
    CHECK_FALSE(p.initializing());
    CHECK(p.play_counts() == std::vector<std::int64_t>{2, 1, 1, 1, 1});
    CHECK(p.mean_sums()[0] == doctest::Approx(0.7));
  }
  SUBCASE("padded plays can be discarded") {
    auto o = basic_options(5, 2, StepSchedule::constant(3));
    o.count_padded_plays = false;
    CeePolicy p(o);
    feed(p, p.next_decision(), {0.1, 0.2});
    feed(p, p.next_decision(), {0.3, 0.4});
    feed(p, p.next_decision(), {0.6, 0.5});
    CHECK(p.play_counts() == std::vector<std::int64_t>{1, 1, 1, 1, 1});
    CHECK(p.mean_sums()[0] == doctest::Approx(0.1));
    CHECK(p.mean_sums()[4] == doctest::Approx(0.5));
    CHECK(p.elapsed_slots() == 9);  // discarding affects statistics, not time
  }
}

TEST_CASE("index values reproduce the hand-evaluated statistic") {
  CeePolicy p(basic_options(2, 1, StepSchedule::constant(1)));
  feed(p, p.next_decision(), {0.8});
  CHECK_THROWS_AS(p.index_values(), UsageError);
  feed(p, p.next_decision(), {0.2});

  auto f = p.index_values();
  const double bonus2 = std::sqrt(2.1 * std::log(2.0));
  CHECK(f[0] == doctest::Approx(0.8 + bonus2).epsilon(1e-15));
  CHECK(f[1] == doctest::Approx(0.2 + bonus2).epsilon(1e-15));

  auto d = p.next_decision();
  CHECK(d.arms == std::vector<int>{0});
  feed(p, d, {0.0});

  f = p.index_values();
  CHECK(f[0] == doctest::Approx(0.8 / 2.0 + std::sqrt(2.1 * std::log(3.0) / 2.0))
                    .epsilon(1e-15));
  CHECK(f[1] == doctest::Approx(0.2 + std::sqrt(2.1 * std::log(3.0))).epsilon(1e-15));
  d = p.next_decision();
  CHECK(d.arms == std::vector<int>{1});
  feed(p, d, {1.0});
}

TEST_CASE("ties in the index resolve to the lowest arm ids") {
  CeePolicy p(basic_options(4, 2, StepSchedule::constant(2)));
  feed(p, p.next_decision(), {0.5, 0.5});
  feed(p, p.next_decision(), {0.5, 0.5});
  const auto d = p.next_decision();
  CHECK(d.arms == std::vector<int>{0, 1});
}

TEST_CASE("the decision/report handshake is enforced") {
  CeePolicy p(basic_options(3, 1, StepSchedule::constant(5)));

  StepReport r;
  r.arms = {0};
  r.sample_means = {0.5};
  r.end_states = {0};
  r.slots_played = 5;
  CHECK_THROWS_AS(p.report_step(r), UsageError);  // nothing outstanding

  const auto d = p.next_decision();
  CHECK_THROWS_AS(p.next_decision(), UsageError);  // already outstanding

  SUBCASE("wrong arm set") {
    r.arms = {1};
    CHECK_THROWS_AS(p.report_step(r), UsageError);
  }
  SUBCASE("misaligned fields") {
    r.sample_means = {0.5, 0.5};
    CHECK_THROWS_AS(p.report_step(r), UsageError);
  }
  SUBCASE("bad slot counts") {
    r.slots_played = 0;
    CHECK_THROWS_AS(p.report_step(r), UsageError);
    r.slots_played = 6;
    CHECK_THROWS_AS(p.report_step(r), UsageError);
  }
  SUBCASE("sample mean outside the reward range") {
    r.sample_means = {1.5};
    CHECK_THROWS_AS(p.report_step(r), UsageError);
    r.sample_means = {-0.1};
    CHECK_THROWS_AS(p.report_step(r), UsageError);
  }
  SUBCASE("a truncated final step is accepted") {
    r.slots_played = 3;
    CHECK_NOTHROW(p.report_step(r));
    CHECK(p.elapsed_slots() == 3);
  }
  CHECK(d.slots == 5);
}

TEST_CASE("engine runs reproduce the straight-line reference") {
  SUBCASE("two arms, logarithmic steps") {
    auto cfg = testcfg::two_arm(StepSchedule::logarithmic(), 600, 77);
    for (int run = 0; run < 5; ++run) {
      CeeOptions o = basic_options(2, 1, cfg.cee.schedule);
      CeePolicy policy(o);
      const auto ep = run_episode(cfg, policy, run, true);
      const auto ref = testoracle::run_single_select_oracle(cfg, run);
      REQUIRE(ep.steps.size() == ref.decisions.size());
      for (std::size_t s = 0; s < ref.decisions.size(); ++s) {
        CHECK(ep.steps[s].arms == ref.decisions[s]);
        CHECK(ep.steps[s].slots == ref.step_slots[s]);
      }
      CHECK(policy.mean_sums() == ref.mean_sums);
      CHECK(policy.play_counts() == ref.play_counts);
      CHECK(policy.elapsed_slots() == ref.elapsed);
      CHECK(policy.global_step() == ref.steps + 1);
    }
  }
  SUBCASE("five arms, two plays, constant steps with padding") {
    auto cfg = testcfg::five_arm(StepSchedule::constant(7), 800, 123, 2);
    for (int run = 0; run < 3; ++run) {
      CeeOptions o = basic_options(5, 2, cfg.cee.schedule);
      CeePolicy policy(o);
      const auto ep = run_episode(cfg, policy, run, true);
      const auto ref = testoracle::run_multi_select_oracle(cfg, run);
      REQUIRE(ep.steps.size() == ref.decisions.size());
      for (std::size_t s = 0; s < ref.decisions.size(); ++s) {
        CHECK(ep.steps[s].arms == ref.decisions[s]);
        CHECK(ep.steps[s].slots == ref.step_slots[s]);
      }
      CHECK(policy.mean_sums() == ref.mean_sums);
      CHECK(policy.play_counts() == ref.play_counts);
      CHECK(policy.elapsed_slots() == ref.elapsed);
    }
  }
  SUBCASE("discarded padding also matches") {
    auto cfg = testcfg::five_arm(StepSchedule::constant(6), 500, 9, 3);
    cfg.cee.count_padded = false;
    CeeOptions o = basic_options(5, 3, cfg.cee.schedule);
    o.count_padded_plays = false;
    CeePolicy policy(o);
    const auto ep = run_episode(cfg, policy, 0, true);
    const auto ref = testoracle::run_multi_select_oracle(cfg, 0);
    REQUIRE(ep.steps.size() == ref.decisions.size());
    CHECK(policy.mean_sums() == ref.mean_sums);
    CHECK(policy.play_counts() == ref.play_counts);
  }
}
