#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rmab/chain.hpp"
#include "rmab/policy.hpp"
#include "rmab/scenario.hpp"

namespace rmab {

// All arms of one episode. Every slot advances every arm: played arms under
// their active matrices with observed rewards, the rest unobserved under
// their passive matrices. Each arm draws from its own derived stream, so a
// trajectory does not depend on what the policy does elsewhere.
class Environment {
 public:
  Environment(const std::vector<RewardedMarkovChain>& chains,
              const std::vector<int>& start_states, std::uint64_t run_seed);

  int arm_count() const { return static_cast<int>(arms_.size()); }

  // played[a] != 0 selects arm a; rewards[a] is written for played arms only.
  void step(const std::vector<char>& played, std::vector<double>& rewards);

  int state_of(int arm) const { return arms_[static_cast<std::size_t>(arm)].state; }

 private:
  std::vector<RewardedMarkovChain> chains_;
  std::vector<ArmState> arms_;
};

// Reference policy that always plays a fixed arm set.
class GeniePolicy : public Policy {
 public:
  explicit GeniePolicy(std::vector<int> arms, std::int64_t chunk = 4096);
  Decision next_decision() override;
  void report_step(const StepReport& report) override;
  std::string name() const override { return "genie"; }

 private:
  std::vector<int> arms_;
  std::int64_t chunk_;
  bool pending_ = false;
};

struct StepLogEntry {
  std::int64_t start_slot = 0;  // 0-based
  std::int64_t slots = 0;
  std::vector<int> arms;
};

struct EpisodeResult {
  std::vector<double> cumulative_reward;  // aligned with config sample points
  double final_reward = 0.0;
  std::int64_t slots = 0;
  std::vector<StepLogEntry> steps;  // filled only when recording is requested
};

// Time-averaged results across runs at each sample point.
struct RegretTrace {
  std::string policy;
  double genie_rate = 0.0;
  std::vector<std::int64_t> n;
  std::vector<double> mean_reward;      // mean across runs of cumulative reward
  std::vector<double> regret;           // n * genie_rate - mean_reward
  std::vector<double> regret_over_ln_n;
  std::vector<double> reward_variance;  // across-run variance of cumulative reward
  std::vector<std::vector<double>> per_run;  // [run][sample point]
};

struct ExperimentResult {
  std::vector<EpisodeResult> episodes;
  RegretTrace trace;
};

// Policy instance for one of the configured names: cee, rca, rucb, genie.
std::unique_ptr<Policy> make_policy(const ScenarioConfig& config,
                                    const std::string& policy_name);

// One episode under the decision/report handshake. The run seed is derived
// from (config seed, policy name, run index); the policy must be fresh.
EpisodeResult run_episode(const ScenarioConfig& config, Policy& policy,
                          int run_index, bool record_steps = false);

// runs independent episodes plus the aggregated trace.
ExperimentResult run_experiment(const ScenarioConfig& config,
                                const std::string& policy_name);

RegretTrace estimate_regret(const ScenarioConfig& config, const std::string& policy_name,
                            const std::vector<EpisodeResult>& episodes);

// Percentile bootstrap confidence interval for the mean of the samples.
std::pair<double, double> bootstrap_mean_ci(const std::vector<double>& samples,
                                            int resamples, double level,
                                            std::uint64_t seed);

}  // namespace rmab
