#include "rmab/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rmab/errors.hpp"

namespace rmab {

namespace {

struct ArmSetSummary {
  int s_max = 0;
  double r_max = 0.0;
  double pi_hat_max = 0.0;
  double eps_min = 1.0;
  double eps_star = 1.0;
  std::vector<double> mus;
};

ArmSetSummary summarize(const std::vector<RewardedMarkovChain>& chains) {
  if (chains.empty()) throw ValidationError("baseline thresholds: empty arm set");
  ArmSetSummary s;
  for (const auto& c : chains) {
    const auto prof = stationary_distribution(c);
    const auto gaps = eigen_gap(c);
    s.s_max = std::max(s.s_max, c.state_count);
    s.r_max = std::max(s.r_max, *std::max_element(c.rewards.begin(), c.rewards.end()));
    s.pi_hat_max = std::max(s.pi_hat_max, *std::max_element(prof.pi.begin(), prof.pi.end()));
    s.eps_min = std::min(s.eps_min, gaps.mult_symm);
    s.eps_star = std::min(s.eps_star, gaps.plain);
    s.mus.push_back(prof.mu);
  }
  if (s.eps_min <= 0.0 || s.eps_star <= 0.0)
    throw ValidationError("baseline thresholds: an arm has a non-positive eigenvalue gap");
  return s;
}

void validate_handshake(const std::optional<Decision>& pending, const StepReport& r) {
  if (!pending) throw UsageError("report_step called with no decision outstanding");
  if (r.arms != pending->arms)
    throw UsageError("step report arm set does not match the outstanding decision");
  if (r.sample_means.size() != r.arms.size() || r.end_states.size() != r.arms.size())
    throw UsageError("step report fields are not aligned with its arm set");
  if (r.slots_played < 1 || r.slots_played > pending->slots) {
    std::ostringstream os;
    os << "step report covers " << r.slots_played << " slots, expected 1.."
       << pending->slots;
    throw UsageError(os.str());
  }
}

}  // namespace

double rca_threshold(const std::vector<RewardedMarkovChain>& chains) {
  const auto s = summarize(chains);
  const double sm = static_cast<double>(s.s_max);
  return 112.0 * sm * sm * s.r_max * s.r_max * s.pi_hat_max * s.pi_hat_max / s.eps_min;
}

BaselineThresholds baseline_thresholds(const std::vector<RewardedMarkovChain>& chains,
                                       int K) {
  const int n = static_cast<int>(chains.size());
  if (K < 1 || K >= n) {
    std::ostringstream os;
    os << "baseline thresholds require 1 <= K < N, got K=" << K << " with N=" << n;
    throw ValidationError(os.str());
  }
  const auto s = summarize(chains);
  BaselineThresholds t;
  t.s_max = s.s_max;
  t.r_max = s.r_max;
  t.pi_hat_max = s.pi_hat_max;
  t.eps_min = s.eps_min;
  t.eps_star = s.eps_star;

  const double sm = static_cast<double>(s.s_max);
  t.rca_l_min = 112.0 * sm * sm * s.r_max * s.r_max * s.pi_hat_max * s.pi_hat_max / s.eps_min;

  const double r2 = s.r_max * s.r_max;
  t.rucb_l_min = (80.0 * r2 * sm * sm / (3.0 - 2.0 * std::sqrt(2.0)) + 10.0 * r2) / s.eps_star;
  t.rucb_l_rounded = std::ceil(t.rucb_l_min * 10.0) / 10.0;

  std::vector<double> mus = s.mus;
  std::sort(mus.begin(), mus.end(), std::greater<>());
  t.top_gap = mus[static_cast<std::size_t>(K - 1)] - mus[static_cast<std::size_t>(K)];
  if (t.top_gap <= 0.0)
    throw ValidationError("baseline thresholds: zero gap between ranks K and K+1");
  t.rucb_d_min = 4.0 * t.rucb_l_rounded / (t.top_gap * t.top_gap);
  return t;
}

std::pair<double, double> rucb_thresholds(const std::vector<RewardedMarkovChain>& chains,
                                          int K) {
  const auto t = baseline_thresholds(chains, K);
  return {t.rucb_l_min, t.rucb_d_min};
}

// ---------------------------------------------------------------------------

RcaPolicy::RcaPolicy(int arm_count, double exploration, bool record_blocks)
    : n_(arm_count), l_(exploration), record_(record_blocks) {
  if (n_ < 2) throw ConfigError("rca policy requires at least 2 arms");
  if (!(l_ > 0.0)) throw ConfigError("rca exploration constant must be positive");
  s2_.assign(n_, 0.0);
  t2_.assign(n_, 0);
  block_count_.assign(n_, 0);
}

int RcaPolicy::pick_arm() const {
  for (int a = 0; a < n_; ++a)
    if (block_count_[a] == 0) return a;
  const auto f = index_values();
  int best = 0;
  for (int a = 1; a < n_; ++a)
    if (f[a] > f[best]) best = a;
  return best;
}

std::vector<double> RcaPolicy::index_values() const {
  if (total_t2_ < 1) throw UsageError("rca index undefined before any cycle sample");
  std::vector<double> f(n_);
  const double log_t = std::max(std::log(static_cast<double>(total_t2_)), 0.0);
  for (int a = 0; a < n_; ++a) {
    if (t2_[a] == 0) throw UsageError("rca index undefined for an unsampled arm");
    const double cnt = static_cast<double>(t2_[a]);
    f[a] = s2_[a] / cnt + std::sqrt(l_ * log_t / cnt);
  }
  return f;
}

Decision RcaPolicy::next_decision() {
  if (pending_) throw UsageError("next_decision called while a step report is outstanding");
  if (cur_ < 0) {
    cur_ = pick_arm();
    in_sb2_ = false;
    block_start_ = slot_;
    block_sb2_ = 0;
  }
  Decision d;
  d.arms = {cur_};
  d.slots = 1;
  pending_ = d;
  return d;
}

void RcaPolicy::report_step(const StepReport& report) {
  validate_handshake(pending_, report);
  const int state = report.end_states[0];
  const double reward = report.sample_means[0];
  slot_ += 1;
  if (!in_sb2_) {
    if (state == 0) {
      in_sb2_ = true;
      t2_[cur_] += 1;
      s2_[cur_] += reward;
      total_t2_ += 1;
      block_sb2_ += 1;
    }
  } else if (state == 0) {
    // Second regeneration visit: the block ends here and the terminal slot is
    // excluded from SB2, so retained segments are full i.i.d. cycles.
    block_count_[cur_] += 1;
    if (record_)
      blocks_.push_back({cur_, block_start_, slot_ - block_start_, block_sb2_});
    cur_ = -1;
  } else {
    t2_[cur_] += 1;
    s2_[cur_] += reward;
    total_t2_ += 1;
    block_sb2_ += 1;
  }
  pending_.reset();
}

// ---------------------------------------------------------------------------

RucbPolicy::RucbPolicy(int arm_count, double exploration, double exploit_threshold,
                       bool record_epochs)
    : n_(arm_count), l_(exploration), d_(exploit_threshold), record_(record_epochs) {
  if (n_ < 2) throw ConfigError("rucb policy requires at least 2 arms");
  if (!(l_ > 0.0)) throw ConfigError("rucb exploration constant must be positive");
  if (!(d_ > 0.0)) throw ConfigError("rucb exploitation threshold must be positive");
  c_ = static_cast<std::int64_t>(std::ceil(l_));
  sum_.assign(n_, 0.0);
  cnt_.assign(n_, 0);
}

std::int64_t RucbPolicy::run_length(std::int64_t completed_epochs,
                                    std::int64_t factor) const {
  long double len = static_cast<long double>(factor) * static_cast<long double>(c_);
  for (std::int64_t k = 0; k < completed_epochs && len <= 1.0e15L; ++k) len *= 4.0L;
  if (len > 1.0e15L) return static_cast<std::int64_t>(1.0e15L);
  return static_cast<std::int64_t>(len);
}

int RucbPolicy::best_arm() const {
  int best = -1;
  double best_mean = 0.0;
  for (int a = 0; a < n_; ++a) {
    if (cnt_[a] == 0) continue;
    const double m = sum_[a] / static_cast<double>(cnt_[a]);
    if (best < 0 || m > best_mean) {
      best = a;
      best_mean = m;
    }
  }
  return best < 0 ? 0 : best;
}

void RucbPolicy::plan_epoch() {
  const double log_t = std::log(static_cast<double>(slot_ + 1));
  if (static_cast<double>(explored_) <= d_ * log_t) {
    exploring_ = true;
    epoch_run_len_ = run_length(n_explore_, 1);
    run_arm_ = 0;
    run_left_ = epoch_run_len_;
    if (record_) epochs_.push_back({true, slot_, epoch_run_len_ * n_});
  } else {
    exploring_ = false;
    run_arm_ = best_arm();
    run_left_ = run_length(n_exploit_, 2);
    if (record_) epochs_.push_back({false, slot_, run_left_});
  }
}

Decision RucbPolicy::next_decision() {
  if (pending_) throw UsageError("next_decision called while a step report is outstanding");
  if (run_arm_ < 0) plan_epoch();
  Decision d;
  d.arms = {run_arm_};
  d.slots = run_left_;
  pending_ = d;
  return d;
}

void RucbPolicy::report_step(const StepReport& report) {
  validate_handshake(pending_, report);
  const int arm = report.arms[0];
  slot_ += report.slots_played;
  if (exploring_) {
    sum_[arm] += report.sample_means[0] * static_cast<double>(report.slots_played);
    cnt_[arm] += report.slots_played;
    explored_ += report.slots_played;
  }
  run_left_ -= report.slots_played;
  if (run_left_ == 0) {
    if (exploring_) {
      if (arm == n_ - 1) {
        n_explore_ += 1;
        run_arm_ = -1;
      } else {
        run_arm_ = arm + 1;
        run_left_ = epoch_run_len_;
      }
    } else {
      n_exploit_ += 1;
      run_arm_ = -1;
    }
  }
  pending_.reset();
}

std::vector<double> RucbPolicy::exploration_means() const {
  std::vector<double> m(n_, 0.0);
  for (int a = 0; a < n_; ++a)
    if (cnt_[a] > 0) m[a] = sum_[a] / static_cast<double>(cnt_[a]);
  return m;
}

}  // namespace rmab
