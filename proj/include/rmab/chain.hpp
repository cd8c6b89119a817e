#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rmab/rng.hpp"

namespace rmab {

// One bandit arm: a finite-state Markov chain with a bounded positive reward
// attached to each state. `active` governs transitions on slots where the arm
// is played, `passive` on all other slots. Matrices are row-major square.
struct RewardedMarkovChain {
  int state_count = 0;
  std::vector<double> active;   // row-stochastic, state_count x state_count
  std::vector<double> passive;  // row-stochastic, same shape
  std::vector<double> rewards;  // one per state, each in (0, 1]

  double p(int from, int to) const { return active[from * state_count + to]; }
  double q(int from, int to) const { return passive[from * state_count + to]; }

  // Two-state channel: state 0 = bad, state 1 = good, identical dynamics
  // whether played or not. p01 = P(bad -> good), p10 = P(good -> bad).
  static RewardedMarkovChain gilbert_elliot(double p01, double p10, double r_bad,
                                            double r_good);
};

struct ChainValidation {
  bool ok = false;
  bool reversible = false;  // meaningful only when ok
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
};

struct StationaryProfile {
  std::vector<double> pi;   // stationary distribution of the active matrix
  double mu = 0.0;          // stationary mean reward, sum_x r_x pi_x
  double min_pi = 0.0;      // smallest stationary probability
  double reward_sum = 0.0;  // sum_x r_x
};

struct EigenGaps {
  double plain = 0.0;      // 1 - lambda_2(P), second-largest eigenvalue real part
  double mult_symm = 0.0;  // 1 - lambda_2(P~ P), P~ the time reversal of P
};

// Structural checks: shape, row-stochasticity (1e-12 on row sums), rewards in
// (0,1], irreducibility and aperiodicity of the active support graph.
// Reversibility failures are warnings, never errors.
ChainValidation validate_chain(const RewardedMarkovChain& chain);

// Throws ValidationError with the joined error list if the chain is invalid.
void require_valid(const RewardedMarkovChain& chain);

StationaryProfile stationary_distribution(const RewardedMarkovChain& chain);

// Worst-case expected deviation of accumulated reward from mu*T for one arm,
// uniform over horizon and start state: (min_x pi_x)^-1 * sum_x r_x.
double arm_deviation_bound(const RewardedMarkovChain& chain);

// Maximum of arm_deviation_bound over a nonempty arm set.
double chain_constant_cp(const std::vector<RewardedMarkovChain>& chains);

EigenGaps eigen_gap(const RewardedMarkovChain& chain);

// Live state of one arm inside a simulation. Each arm owns an RNG stream so
// that arm trajectories are independent of how other arms are sampled.
struct ArmState {
  int state = 0;
  std::mt19937_64 rng;
};

struct SlotOutcome {
  int state = 0;
  std::optional<double> reward;  // engaged iff the arm was played this slot
};

// Single transition using one uniform draw: linear scan of the row's
// cumulative probabilities. Kept inline for the simulation inner loops.
inline int step_state(const std::vector<double>& matrix, int state_count, int state,
                      double u) {
  const double* row = matrix.data() + static_cast<std::size_t>(state) * state_count;
  double acc = 0.0;
  for (int next = 0; next < state_count - 1; ++next) {
    acc += row[next];
    if (u < acc) return next;
  }
  return state_count - 1;
}

// Advance one slot. Played arms move under the active matrix and yield the
// reward of the state they land in; unplayed arms move unobserved under the
// passive matrix.
inline SlotOutcome advance(ArmState& arm, const RewardedMarkovChain& chain, bool played) {
  const double u = uniform01(arm.rng);
  arm.state = step_state(played ? chain.active : chain.passive, chain.state_count,
                         arm.state, u);
  SlotOutcome out;
  out.state = arm.state;
  if (played) out.reward = chain.rewards[arm.state];
  return out;
}

// Draw an initial state from the stationary distribution of the active matrix.
int sample_stationary_state(const RewardedMarkovChain& chain, std::mt19937_64& rng);

}  // namespace rmab
