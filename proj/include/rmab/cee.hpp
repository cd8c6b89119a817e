#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rmab/policy.hpp"
#include "rmab/schedule.hpp"

namespace rmab {

struct CeeOptions {
  int arm_count = 0;                              // N >= 2
  int select_count = 1;                           // K, 1 <= K < N
  double exploration = 2.1;                       // L, must exceed 2
  StepSchedule schedule = StepSchedule::constant(1);
  bool allow_small_exploration = false;           // accept L <= 2 (no guarantee)
  bool count_padded_plays = true;                 // see below
};

// Index policy with geometrically growing observation blocks. Each step i
// commits to K arms for B_i slots; the per-arm statistic is the average of
// the per-step sample means, and selection maximizes
//   F(j) = Xhat_j / i_j + sqrt(L * ln(n) / i_j)
// where n counts elapsed slots and i_j completed steps on arm j.
//
// Initialization covers every arm once in ceil(N/K) batches of K arms; when
// K does not divide N the final batch is padded with the lowest-indexed
// already-covered arms. Padded plays update those arms' statistics unless
// count_padded_plays is off, in which case their observations are discarded.
class CeePolicy : public Policy {
 public:
  explicit CeePolicy(CeeOptions opts);

  Decision next_decision() override;
  void report_step(const StepReport& report) override;
  std::string name() const override { return "cee"; }

  bool initializing() const { return batch_ < static_cast<int>(init_batches_.size()); }

  // F(j) for every arm. Only defined once initialization has finished.
  std::vector<double> index_values() const;

  const std::vector<double>& mean_sums() const { return mean_sums_; }          // Xhat_j
  const std::vector<std::int64_t>& play_counts() const { return play_counts_; } // i_j
  std::int64_t global_step() const { return step_; }                           // i
  std::int64_t elapsed_slots() const { return slots_; }                        // n
  const CeeOptions& options() const { return opts_; }

 private:
  std::vector<int> select_top() const;

  CeeOptions opts_;
  std::vector<std::vector<int>> init_batches_;
  std::vector<std::vector<int>> batch_pads_;  // padded arm ids per batch
  std::vector<double> mean_sums_;
  std::vector<std::int64_t> play_counts_;
  std::int64_t step_ = 1;   // 1-based index of the next step
  std::int64_t slots_ = 0;  // total slots played so far
  int batch_ = 0;           // initialization batches completed
  std::optional<Decision> pending_;
};

}  // namespace rmab
