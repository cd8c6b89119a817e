#include <cmath>
#include <vector>

#include "doctest.h"
#include "rmab/chain.hpp"
#include "rmab/concentration.hpp"
#include "rmab/errors.hpp"
#include "rmab/rng.hpp"

using namespace rmab;

namespace {

bool has_error_containing(const ChainValidation& v, const std::string& needle) {
  for (const auto& e : v.errors)
    if (e.find(needle) != std::string::npos) return true;
  return false;
}

RewardedMarkovChain three_state_doubly_stochastic() {
  RewardedMarkovChain c;
  c.state_count = 3;
  c.active = {0.2, 0.3, 0.5, 0.5, 0.2, 0.3, 0.3, 0.5, 0.2};
  c.passive = c.active;
  c.rewards = {0.2, 0.5, 0.9};
  return c;
}

}  // namespace

TEST_CASE("seed derivation is a pure function of its inputs") {
  CHECK(derive_seed(1, "a", 0) == derive_seed(1, "a", 0));
  CHECK(derive_seed(1, "a", 0) != derive_seed(1, "a", 1));
  CHECK(derive_seed(1, "a", 0) != derive_seed(1, "b", 0));
  CHECK(derive_seed(1, "a", 0) != derive_seed(2, "a", 0));
}

TEST_CASE("uniform01 stays in the half-open unit interval") {
  auto rng = make_stream(7, "unit", 0);
  for (int i = 0; i < 10000; ++i) {
    const double u = uniform01(rng);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("gilbert_elliot lays out the channel matrices") {
  const auto c = RewardedMarkovChain::gilbert_elliot(0.3, 0.9, 0.1, 1.0);
  CHECK(c.state_count == 2);
  CHECK(c.p(0, 0) == doctest::Approx(0.7));
  CHECK(c.p(0, 1) == doctest::Approx(0.3));
  CHECK(c.p(1, 0) == doctest::Approx(0.9));
  CHECK(c.p(1, 1) == doctest::Approx(0.1));
  CHECK(c.active == c.passive);
  CHECK(c.rewards == std::vector<double>{0.1, 1.0});
  CHECK(validate_chain(c).ok);
}

TEST_CASE("two-state stationary distributions match the closed form") {
  const double params[5][2] = {{0.3, 0.9}, {0.8, 0.7}, {0.5, 0.1}, {0.2, 0.4}, {0.1, 0.5}};
  const double expected_mu[5] = {0.325, 0.58, 0.85, 0.4, 0.25};
  for (int i = 0; i < 5; ++i) {
    const double p01 = params[i][0], p10 = params[i][1];
    const auto c = RewardedMarkovChain::gilbert_elliot(p01, p10, 0.1, 1.0);
    const auto s = stationary_distribution(c);
    const double pi_good = p01 / (p01 + p10);
    CHECK(s.pi[1] == doctest::Approx(pi_good).epsilon(1e-12));
    CHECK(s.pi[0] == doctest::Approx(1.0 - pi_good).epsilon(1e-12));
    CHECK(s.mu == doctest::Approx(expected_mu[i]).epsilon(1e-9));
    CHECK(s.reward_sum == doctest::Approx(1.1));
    CHECK(s.min_pi == doctest::Approx(std::min(pi_good, 1.0 - pi_good)).epsilon(1e-12));
  }
}

TEST_CASE("doubly stochastic chain has the uniform stationary distribution") {
  const auto c = three_state_doubly_stochastic();
  const auto s = stationary_distribution(c);
  for (double p : s.pi) CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(s.mu == doctest::Approx((0.2 + 0.5 + 0.9) / 3.0).epsilon(1e-12));
}

TEST_CASE("deviation constants evaluate the worst stationary mass") {
  const auto chains = validation_chains();
  // sum of rewards is 1.1 for every channel; the worst min pi is 1/6.
  CHECK(arm_deviation_bound(chains[0]) == doctest::Approx(4.4).epsilon(1e-9));
  CHECK(arm_deviation_bound(chains[2]) == doctest::Approx(6.6).epsilon(1e-9));
  CHECK(arm_deviation_bound(chains[3]) == doctest::Approx(3.3).epsilon(1e-9));
  CHECK(chain_constant_cp(chains) == doctest::Approx(6.6).epsilon(1e-9));
  CHECK_THROWS_AS(chain_constant_cp({}), ValidationError);
}

TEST_CASE("two-state eigenvalue gaps match the closed forms") {
  const double params[5][2] = {{0.3, 0.9}, {0.8, 0.7}, {0.5, 0.1}, {0.2, 0.4}, {0.1, 0.5}};
  const double plain[5] = {1.2, 1.5, 0.6, 0.6, 0.6};
  for (int i = 0; i < 5; ++i) {
    const auto c = RewardedMarkovChain::gilbert_elliot(params[i][0], params[i][1], 0.1, 1.0);
    const auto g = eigen_gap(c);
    const double lambda2 = 1.0 - params[i][0] - params[i][1];
    CHECK(g.plain == doctest::Approx(plain[i]).epsilon(1e-9));
    // Two-state chains are reversible, so the symmetrized gap is 1 - lambda2^2.
    CHECK(g.mult_symm == doctest::Approx(1.0 - lambda2 * lambda2).epsilon(1e-9));
  }
}

TEST_CASE("validation names the failure") {
  RewardedMarkovChain c;
  c.state_count = 2;
  c.rewards = {0.5, 0.5};

  SUBCASE("reducible support") {
    c.active = {1.0, 0.0, 0.0, 1.0};
    c.passive = c.active;
    const auto v = validate_chain(c);
    CHECK_FALSE(v.ok);
    CHECK(has_error_containing(v, "reducible"));
    CHECK_THROWS_AS(require_valid(c), ValidationError);
  }
  SUBCASE("periodic support") {
    c.active = {0.0, 1.0, 1.0, 0.0};
    c.passive = c.active;
    const auto v = validate_chain(c);
    CHECK_FALSE(v.ok);
    CHECK(has_error_containing(v, "periodic with period 2"));
  }
  SUBCASE("row sums off") {
    c.active = {0.5, 0.4, 0.5, 0.5};
    c.passive = {0.5, 0.5, 0.5, 0.5};
    const auto v = validate_chain(c);
    CHECK_FALSE(v.ok);
    CHECK(has_error_containing(v, "not row-stochastic"));
  }
  SUBCASE("entry outside the unit interval") {
    c.active = {1.2, -0.2, 0.5, 0.5};
    c.passive = {0.5, 0.5, 0.5, 0.5};
    const auto v = validate_chain(c);
    CHECK_FALSE(v.ok);
    CHECK(has_error_containing(v, "outside [0,1]"));
  }
  SUBCASE("zero reward rejected") {
    c.active = {0.5, 0.5, 0.5, 0.5};
    c.passive = c.active;
    c.rewards = {0.0, 1.0};
    const auto v = validate_chain(c);
    CHECK_FALSE(v.ok);
    CHECK(has_error_containing(v, "outside (0,1]"));
  }
  SUBCASE("reward above one rejected") {
    c.active = {0.5, 0.5, 0.5, 0.5};
    c.passive = c.active;
    c.rewards = {0.5, 1.5};
    CHECK_FALSE(validate_chain(c).ok);
  }
  SUBCASE("wrong matrix shape") {
    c.active = {1.0};
    c.passive = {0.5, 0.5, 0.5, 0.5};
    const auto v = validate_chain(c);
    CHECK_FALSE(v.ok);
    CHECK(has_error_containing(v, "expected 4"));
  }
}

TEST_CASE("non-reversible chains validate with a warning") {
  RewardedMarkovChain c;
  c.state_count = 3;
  c.active = {0.5, 0.5, 0.0, 0.0, 0.5, 0.5, 0.5, 0.0, 0.5};
  c.passive = c.active;
  c.rewards = {0.3, 0.6, 0.9};
  const auto v = validate_chain(c);
  CHECK(v.ok);
  CHECK_FALSE(v.reversible);
  REQUIRE_FALSE(v.warnings.empty());
  CHECK(v.warnings[0].find("not reversible") != std::string::npos);

  const auto ge = RewardedMarkovChain::gilbert_elliot(0.5, 0.1, 0.1, 1.0);
  const auto vg = validate_chain(ge);
  CHECK(vg.ok);
  CHECK(vg.reversible);
  CHECK(vg.warnings.empty());
}

TEST_CASE("step_state scans cumulative row probabilities") {
  const std::vector<double> m = {0.3, 0.7, 0.9, 0.1};
  CHECK(step_state(m, 2, 0, 0.0) == 0);
  CHECK(step_state(m, 2, 0, 0.29999) == 0);
  CHECK(step_state(m, 2, 0, 0.3) == 1);
  CHECK(step_state(m, 2, 0, 0.99999) == 1);
  CHECK(step_state(m, 2, 1, 0.89999) == 0);
  CHECK(step_state(m, 2, 1, 0.9) == 1);
}

TEST_CASE("advance reports rewards only on played slots and is deterministic") {
  const auto c = RewardedMarkovChain::gilbert_elliot(0.5, 0.1, 0.1, 1.0);
  ArmState a{0, make_stream(42, "arm", 0)};
  ArmState b{0, make_stream(42, "arm", 0)};
  for (int t = 0; t < 200; ++t) {
    const bool played = t % 3 == 0;
    const auto oa = advance(a, c, played);
    const auto ob = advance(b, c, played);
    CHECK(oa.state == ob.state);
    CHECK(oa.reward.has_value() == played);
    if (played) {
      CHECK(*oa.reward == c.rewards[oa.state]);
      CHECK(*oa.reward == *ob.reward);
    }
  }
}

TEST_CASE("stationary sampling matches the distribution in frequency") {
  const auto c = RewardedMarkovChain::gilbert_elliot(0.3, 0.9, 0.1, 1.0);
  auto rng = make_stream(9, "freq", 0);
  const int draws = 20000;
  int good = 0;
  for (int i = 0; i < draws; ++i) good += sample_stationary_state(c, rng);
  const double frac = static_cast<double>(good) / draws;
  CHECK(frac == doctest::Approx(0.25).epsilon(0.08));  // ~8 sigma window
}
