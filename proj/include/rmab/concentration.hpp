#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "rmab/chain.hpp"

namespace rmab {

// Monte Carlo check of one analytic tail or deviation bound. The estimate
// must not exceed the bound by more than three standard errors.
struct TailCheckReport {
  std::string check;
  std::string generator;
  double empirical = 0.0;
  double bound = 0.0;
  double mc_sigma = 0.0;
  bool extrapolated = false;  // bound applied outside its stated hypotheses
  bool pass = false;
  std::string detail;
};

struct TailCheckSpec {
  int length = 0;            // summands per sequence
  double range = 1.0;        // each summand lies in [0, range]
  double drift = 0.0;        // conditional means stay within mean +- drift
  double mean = 0.5;
  double deviation = 0.0;    // tail offset a
  std::int64_t replications = 100000;
  std::uint64_t seed = 0;
};

// Produces one sequence sum per call.
using SequenceSampler = std::function<double(const TailCheckSpec&, std::mt19937_64&)>;

// Scaled Bernoulli summands with constant conditional mean.
SequenceSampler iid_sampler();
// Conditional means alternate mean+drift, mean-drift across slots.
SequenceSampler alternating_sampler();

// Two reports (upper and lower tail) for the fixed-mean bound
//   P{S_n >= n mean + a} <= exp(-2 a^2 / (n range^2)).
std::vector<TailCheckReport> check_chernoff(const TailCheckSpec& spec,
                                            const SequenceSampler& sampler,
                                            const std::string& generator_name);

// Two reports for the drifted-mean bounds
//   P{S_n >= n(mean+drift) + a} <= exp(-2 (a (mean-drift)/(range (mean+drift)))^2 / n)
//   P{S_n <= n(mean-drift) - a} <= exp(-2 (a/range)^2 / n).
std::vector<TailCheckReport> check_drifted_chernoff(const TailCheckSpec& spec,
                                                    const SequenceSampler& sampler,
                                                    const std::string& generator_name);

struct MarkovDeviationSpec {
  std::vector<std::int64_t> horizons;
  std::int64_t replications = 100000;
  std::uint64_t seed = 0;
  int start_state = -1;  // -1 draws the start from the stationary distribution
};

// Reports, two per horizon, comparing the mean accumulated-reward deviation
// from mu*T against the arm deviation bound. The bound is proved for the
// upward direction; the mirrored check is marked extrapolated.
std::vector<TailCheckReport> check_markov_deviation(const RewardedMarkovChain& chain,
                                                    const MarkovDeviationSpec& spec);

// Exact expected deviation sum_{t=1..T} (E[r(s_t) | s_0 = x] - mu).
double exact_deviation(const RewardedMarkovChain& chain, int start_state,
                       std::int64_t horizon);

// Start state maximizing the exact deviation at the given horizon.
int worst_start_state(const RewardedMarkovChain& chain, std::int64_t horizon);

// The bundled two-state reference channels used by the validate command.
std::vector<RewardedMarkovChain> validation_chains();

struct ValidationSuite {
  std::vector<TailCheckReport> reports;
  bool all_pass = true;
};

// The full battery: fixed-mean tails, drifted tails at drift 0 / 0.05 / 0.2,
// and deviation checks for every bundled channel from both the stationary
// start and the worst single start, at horizons 10 .. 10^4.
ValidationSuite run_validation_suite(std::uint64_t seed, std::int64_t replications);

}  // namespace rmab
