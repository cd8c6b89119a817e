#include "rmab/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rmab/baselines.hpp"
#include "rmab/cee.hpp"
#include "rmab/errors.hpp"
#include "rmab/rng.hpp"

namespace rmab {

Environment::Environment(const std::vector<RewardedMarkovChain>& chains,
                         const std::vector<int>& start_states, std::uint64_t run_seed)
    : chains_(chains) {
  if (chains_.empty()) throw UsageError("environment requires at least one arm");
  if (start_states.size() != chains_.size())
    throw UsageError("environment start states not aligned with arms");
  arms_.resize(chains_.size());
  for (std::size_t a = 0; a < chains_.size(); ++a) {
    arms_[a].rng = make_stream(run_seed, "arm", static_cast<std::uint64_t>(a));
    if (start_states[a] >= 0) {
      if (start_states[a] >= chains_[a].state_count)
        throw UsageError("environment start state out of range");
      arms_[a].state = start_states[a];
    } else {
      arms_[a].state = sample_stationary_state(chains_[a], arms_[a].rng);
    }
  }
}

void Environment::step(const std::vector<char>& played, std::vector<double>& rewards) {
  for (std::size_t a = 0; a < arms_.size(); ++a) {
    const auto& chain = chains_[a];
    const double u = uniform01(arms_[a].rng);
    arms_[a].state = step_state(played[a] ? chain.active : chain.passive,
                                chain.state_count, arms_[a].state, u);
    if (played[a]) rewards[a] = chain.rewards[arms_[a].state];
  }
}

GeniePolicy::GeniePolicy(std::vector<int> arms, std::int64_t chunk)
    : arms_(std::move(arms)), chunk_(chunk) {
  if (arms_.empty()) throw ConfigError("genie policy requires a nonempty arm set");
  if (chunk_ < 1) throw ConfigError("genie policy requires a positive chunk size");
  std::sort(arms_.begin(), arms_.end());
}

Decision GeniePolicy::next_decision() {
  if (pending_) throw UsageError("next_decision called while a step report is outstanding");
  pending_ = true;
  return Decision{arms_, chunk_};
}

void GeniePolicy::report_step(const StepReport& report) {
  if (!pending_) throw UsageError("report_step called with no decision outstanding");
  if (report.arms != arms_)
    throw UsageError("step report arm set does not match the outstanding decision");
  pending_ = false;
}

std::unique_ptr<Policy> make_policy(const ScenarioConfig& cfg,
                                    const std::string& policy_name) {
  const int n = cfg.arm_count();
  if (policy_name == "cee") {
    CeeOptions o;
    o.arm_count = n;
    o.select_count = cfg.select_count;
    o.exploration = cfg.cee.exploration;
    o.schedule = cfg.cee.schedule;
    o.count_padded_plays = cfg.cee.count_padded;
    return std::make_unique<CeePolicy>(o);
  }
  if (policy_name == "rca") {
    if (!cfg.rca)
      throw ConfigError("scenario does not configure rca_exploration");
    if (cfg.select_count != 1)
      throw ConfigError("the rca baseline plays a single arm; select must be 1");
    return std::make_unique<RcaPolicy>(n, cfg.rca->exploration);
  }
  if (policy_name == "rucb") {
    if (!cfg.rucb || !(cfg.rucb->exploration > 0.0) ||
        !(cfg.rucb->exploit_threshold > 0.0))
      throw ConfigError(
          "scenario does not configure rucb_exploration and rucb_threshold");
    if (cfg.select_count != 1)
      throw ConfigError("the rucb baseline plays a single arm; select must be 1");
    return std::make_unique<RucbPolicy>(n, cfg.rucb->exploration,
                                        cfg.rucb->exploit_threshold);
  }
  if (policy_name == "genie") {
    std::vector<int> best(cfg.rank_order.begin(),
                          cfg.rank_order.begin() + cfg.select_count);
    return std::make_unique<GeniePolicy>(std::move(best));
  }
  throw ConfigError("unknown policy '" + policy_name + "'");
}

EpisodeResult run_episode(const ScenarioConfig& cfg, Policy& policy, int run_index,
                          bool record_steps) {
  const int n = cfg.arm_count();
  const std::uint64_t run_seed =
      derive_seed(cfg.seed, "run:" + policy.name(), static_cast<std::uint64_t>(run_index));
  Environment env(cfg.arms, cfg.start_states, run_seed);

  EpisodeResult result;
  result.cumulative_reward.reserve(cfg.sample_points.size());

  std::vector<char> played(static_cast<std::size_t>(n), 0);
  std::vector<double> rewards(static_cast<std::size_t>(n), 0.0);
  std::vector<double> sums;
  StepReport report;

  double cumulative = 0.0;
  std::int64_t slot = 0;
  std::size_t next_point = 0;

  while (slot < cfg.horizon) {
    const Decision d = policy.next_decision();
    if (d.arms.empty() || d.slots < 1)
      throw UsageError("policy produced an empty decision");
    for (std::size_t i = 0; i < d.arms.size(); ++i) {
      const int a = d.arms[i];
      if (a < 0 || a >= n) throw UsageError("policy selected an arm out of range");
      if (i > 0 && d.arms[i] <= d.arms[i - 1])
        throw UsageError("policy decisions must list distinct arms in ascending order");
    }

    const std::int64_t len = std::min(d.slots, cfg.horizon - slot);
    std::fill(played.begin(), played.end(), 0);
    for (int a : d.arms) played[static_cast<std::size_t>(a)] = 1;
    sums.assign(d.arms.size(), 0.0);

    for (std::int64_t s = 0; s < len; ++s) {
      env.step(played, rewards);
      for (std::size_t i = 0; i < d.arms.size(); ++i) {
        const double r = rewards[static_cast<std::size_t>(d.arms[i])];
        sums[i] += r;
        cumulative += r;
      }
      ++slot;
      if (next_point < cfg.sample_points.size() &&
          slot == cfg.sample_points[next_point]) {
        result.cumulative_reward.push_back(cumulative);
        ++next_point;
      }
    }

    report.arms = d.arms;
    report.sample_means.assign(d.arms.size(), 0.0);
    for (std::size_t i = 0; i < d.arms.size(); ++i)
      report.sample_means[i] = sums[i] / static_cast<double>(len);
    report.end_states.resize(d.arms.size());
    for (std::size_t i = 0; i < d.arms.size(); ++i)
      report.end_states[i] = env.state_of(d.arms[i]);
    report.slots_played = len;
    policy.report_step(report);

    if (record_steps) {
      StepLogEntry e;
      e.start_slot = slot - len;
      e.slots = len;
      e.arms = d.arms;
      result.steps.push_back(std::move(e));
    }
  }

  result.final_reward = cumulative;
  result.slots = slot;
  return result;
}

RegretTrace estimate_regret(const ScenarioConfig& cfg, const std::string& policy_name,
                            const std::vector<EpisodeResult>& episodes) {
  if (episodes.empty()) throw UsageError("estimate_regret requires at least one episode");
  const std::size_t points = cfg.sample_points.size();
  for (const auto& e : episodes)
    if (e.cumulative_reward.size() != points)
      throw UsageError("episode sample points do not match the scenario grid");

  RegretTrace t;
  t.policy = policy_name;
  t.genie_rate = cfg.genie_rate;
  t.n = cfg.sample_points;
  t.mean_reward.resize(points);
  t.regret.resize(points);
  t.regret_over_ln_n.resize(points);
  t.reward_variance.resize(points);
  t.per_run.reserve(episodes.size());
  for (const auto& e : episodes) t.per_run.push_back(e.cumulative_reward);

  const double runs = static_cast<double>(episodes.size());
  for (std::size_t p = 0; p < points; ++p) {
    double sum = 0.0;
    for (const auto& e : episodes) sum += e.cumulative_reward[p];
    const double mean = sum / runs;
    double ss = 0.0;
    for (const auto& e : episodes) {
      const double d = e.cumulative_reward[p] - mean;
      ss += d * d;
    }
    t.mean_reward[p] = mean;
    t.regret[p] = static_cast<double>(t.n[p]) * cfg.genie_rate - mean;
    t.regret_over_ln_n[p] =
        t.n[p] > 1 ? t.regret[p] / std::log(static_cast<double>(t.n[p])) : 0.0;
    t.reward_variance[p] = episodes.size() > 1 ? ss / (runs - 1.0) : 0.0;
  }
  return t;
}

ExperimentResult run_experiment(const ScenarioConfig& cfg,
                                const std::string& policy_name) {
  ExperimentResult r;
  r.episodes.reserve(static_cast<std::size_t>(cfg.runs));
  for (int run = 0; run < cfg.runs; ++run) {
    auto policy = make_policy(cfg, policy_name);
    r.episodes.push_back(run_episode(cfg, *policy, run));
  }
  r.trace = estimate_regret(cfg, policy_name, r.episodes);
  return r;
}

std::pair<double, double> bootstrap_mean_ci(const std::vector<double>& samples,
                                            int resamples, double level,
                                            std::uint64_t seed) {
  if (samples.empty()) throw UsageError("bootstrap requires at least one sample");
  if (resamples < 10) throw UsageError("bootstrap requires at least 10 resamples");
  if (!(level > 0.0) || !(level < 1.0))
    throw UsageError("bootstrap level must lie in (0,1)");

  const std::size_t m = samples.size();
  std::vector<double> means;
  means.reserve(static_cast<std::size_t>(resamples));
  for (int r = 0; r < resamples; ++r) {
    auto rng = make_stream(seed, "boot", static_cast<std::uint64_t>(r));
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const auto pick = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(m));
      sum += samples[std::min(pick, m - 1)];
    }
    means.push_back(sum / static_cast<double>(m));
  }
  std::sort(means.begin(), means.end());
  const double tail = (1.0 - level) / 2.0;
  const auto lo_idx = static_cast<std::size_t>(tail * (resamples - 1));
  const auto hi_idx = static_cast<std::size_t>((1.0 - tail) * (resamples - 1));
  return {means[lo_idx], means[hi_idx]};
}

}  // namespace rmab
