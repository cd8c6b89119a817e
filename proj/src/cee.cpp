#include "rmab/cee.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rmab/errors.hpp"

namespace rmab {

CeePolicy::CeePolicy(CeeOptions opts) : opts_(std::move(opts)) {
  const int n = opts_.arm_count;
  const int k = opts_.select_count;
  if (n < 2) throw ConfigError("cee policy requires at least 2 arms");
  if (k < 1) throw ConfigError("cee policy requires K >= 1");
  if (k >= n) {
    std::ostringstream os;
    os << "cee policy requires K < N, got K=" << k << " with N=" << n;
    throw ConfigError(os.str());
  }
  if (!(opts_.exploration > 0.0))
    throw ConfigError("cee exploration constant must be positive");
  if (opts_.exploration <= 2.0 && !opts_.allow_small_exploration) {
    std::ostringstream os;
    os << "cee exploration constant L=" << opts_.exploration
       << " must exceed 2 (set allow_small_exploration to override)";
    throw ConfigError(os.str());
  }

  mean_sums_.assign(n, 0.0);
  play_counts_.assign(n, 0);

  const int batches = (n + k - 1) / k;
  init_batches_.resize(batches);
  batch_pads_.resize(batches);
  for (int b = 0; b < batches; ++b) {
    for (int a = b * k; a < std::min((b + 1) * k, n); ++a) init_batches_[b].push_back(a);
    for (int a = 0; static_cast<int>(init_batches_[b].size()) < k; ++a) {
      init_batches_[b].push_back(a);
      batch_pads_[b].push_back(a);
    }
    std::sort(init_batches_[b].begin(), init_batches_[b].end());
  }
}

Decision CeePolicy::next_decision() {
  if (pending_)
    throw UsageError("next_decision called while a step report is outstanding");
  Decision d;
  d.slots = opts_.schedule.at(step_);
  if (initializing())
    d.arms = init_batches_[batch_];
  else
    d.arms = select_top();
  pending_ = d;
  return d;
}

std::vector<double> CeePolicy::index_values() const {
  if (initializing())
    throw UsageError("index_values is undefined during initialization");
  std::vector<double> f(opts_.arm_count);
  const double log_n = std::max(std::log(static_cast<double>(slots_)), 0.0);
  for (int j = 0; j < opts_.arm_count; ++j) {
    const double visits = static_cast<double>(play_counts_[j]);
    f[j] = mean_sums_[j] / visits + std::sqrt(opts_.exploration * log_n / visits);
  }
  return f;
}

std::vector<int> CeePolicy::select_top() const {
  const auto f = index_values();
  std::vector<int> order(opts_.arm_count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return f[a] > f[b]; });
  std::vector<int> top(order.begin(), order.begin() + opts_.select_count);
  std::sort(top.begin(), top.end());
  return top;
}

void CeePolicy::report_step(const StepReport& report) {
  if (!pending_) throw UsageError("report_step called with no decision outstanding");
  if (report.arms != pending_->arms)
    throw UsageError("step report arm set does not match the outstanding decision");
  if (report.sample_means.size() != report.arms.size() ||
      report.end_states.size() != report.arms.size())
    throw UsageError("step report fields are not aligned with its arm set");
  if (report.slots_played < 1 || report.slots_played > pending_->slots) {
    std::ostringstream os;
    os << "step report covers " << report.slots_played << " slots, expected 1.."
       << pending_->slots;
    throw UsageError(os.str());
  }
  for (double m : report.sample_means)
    if (!(m >= 0.0) || m > 1.0 + 1e-12) {
      std::ostringstream os;
      os << "sample mean " << m << " outside [0,1]";
      throw UsageError(os.str());
    }

  const bool init = initializing();
  for (std::size_t idx = 0; idx < report.arms.size(); ++idx) {
    const int arm = report.arms[idx];
    if (init && !opts_.count_padded_plays) {
      const auto& pads = batch_pads_[batch_];
      if (std::find(pads.begin(), pads.end(), arm) != pads.end()) continue;
    }
    mean_sums_[arm] += report.sample_means[idx];
    play_counts_[arm] += 1;
  }
  slots_ += report.slots_played;
  step_ += 1;
  if (init) batch_ += 1;
  pending_.reset();
}

}  // namespace rmab
