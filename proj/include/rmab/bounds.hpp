#pragma once

#include <cstdint>
#include <vector>

#include "rmab/chain.hpp"
#include "rmab/schedule.hpp"

namespace rmab {

// Ground truth a bound evaluation needs: stationary means in strictly
// decreasing order, the worst-case deviation constant of the arm set, the
// number of simultaneous plays, the exploration constant, and the step
// schedule the policy runs with.
struct ScenarioTruth {
  std::vector<double> mus;   // strictly decreasing
  std::vector<int> sigma;    // mus[r] is the mean of original arm sigma[r]
  double c_p = 0.0;
  int select_count = 1;      // K
  double exploration = 2.1;  // L, must exceed 2 for the analysis to apply
  StepSchedule schedule = StepSchedule::constant(1);

  int arm_count() const { return static_cast<int>(mus.size()); }

  static ScenarioTruth from_chains(const std::vector<RewardedMarkovChain>& chains,
                                   int select_count, double exploration,
                                   StepSchedule schedule);
  // mus_by_arm is indexed by original arm id, in no particular order.
  static ScenarioTruth from_values(const std::vector<double>& mus_by_arm, double c_p,
                                   int select_count, double exploration,
                                   StepSchedule schedule);
};

// Length of the step in progress at slot n.
std::int64_t g_of_n(const StepSchedule& schedule, std::int64_t n);

// Smallest step length that makes the drift terms controllable:
// max{2 C_P / (mu_(1) - mu_(2)), C_P / mu_(l) over all l} for single play,
// with the rank-K gap replacing the rank-1 gap for multi play.
double required_step_length(const ScenarioTruth& truth);
double required_step_length_multi(const ScenarioTruth& truth);

// First schedule index whose step length meets the (ceiled) requirement.
std::int64_t q_index(const ScenarioTruth& truth);
std::int64_t q_prime_index(const ScenarioTruth& truth);

// Constants of the regret bound
//   slope_step * G(n) ln n + slope * ln n + offset_step * G(n) + offset.
// The warmup constant grows like e^(4*floor/L) and can leave double range on
// real scenarios, so everything downstream of it is carried in long double.
struct BoundConstants {
  std::int64_t q = 0;            // step index the drift bound is anchored at
  std::int64_t step_at_q = 0;    // schedule value at q
  double drift = 0.0;            // c_p / step_at_q
  std::vector<double> margins;   // per sigma rank: deviation margins (w / m values)
  std::vector<long double> play_floors;  // per sigma rank: guaranteed play counts
  long double warmup = 0.0L;     // step count after which the floors are in force
  long double slope_step = 0.0L;
  long double slope = 0.0L;
  long double offset_step = 0.0L;
  long double offset = 0.0L;
};

// Constants with the drift anchored at q_index (q_prime_index for K >= 2).
BoundConstants bound_constants(const ScenarioTruth& truth);

// Constant-schedule variant: same construction with the anchor forced to the
// first step, q = 1.
BoundConstants corollary_constants(const ScenarioTruth& truth);

// Expected number of plays of the rank-j arm (1-based sigma rank, j > K) that
// the confidence argument cannot rule out by slot n. The raw value is the
// pre-ceiling expression; lambda_steps applies the ceiling.
long double lambda_raw(const ScenarioTruth& truth, std::int64_t n, int rank);
long double lambda_steps(const ScenarioTruth& truth, std::int64_t n, int rank);

long double regret_bound(const ScenarioTruth& truth, const BoundConstants& constants,
                         std::int64_t n);
long double regret_bound_theorem(const ScenarioTruth& truth, std::int64_t n);
long double regret_bound_corollary(const ScenarioTruth& truth, std::int64_t n);

}  // namespace rmab
