#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rmab/chain.hpp"
#include "rmab/policy.hpp"

namespace rmab {

// Tuning constants the two reference policies need to carry their guarantees
// on a given arm set, together with the quantities they are built from.
struct BaselineThresholds {
  double rca_l_min = 0.0;      // 112 * S_max^2 r_max^2 pihat_max^2 / eps_min
  double rucb_l_min = 0.0;     // (80 r_max^2 S_max^2 / (3 - 2 sqrt 2) + 10 r_max^2) / eps_star
  double rucb_l_rounded = 0.0; // rucb_l_min rounded up to the next tenth
  double rucb_d_min = 0.0;     // 4 * rucb_l_rounded / top_gap^2
  int s_max = 0;               // largest state count
  double r_max = 0.0;          // largest per-state reward
  double pi_hat_max = 0.0;     // largest stationary probability across arms
  double eps_min = 0.0;        // smallest multiplicative-symmetrization gap
  double eps_star = 0.0;       // smallest plain eigenvalue gap
  double top_gap = 0.0;        // mu_sigma(1) - mu_sigma(K+1)
};

double rca_threshold(const std::vector<RewardedMarkovChain>& chains);

// (L, D) for the epoch policy with K simultaneous plays. L is the exact lower
// bound; D is evaluated at L rounded up to the next tenth, the coarser
// constant one would actually configure, so the pair is jointly usable.
std::pair<double, double> rucb_thresholds(const std::vector<RewardedMarkovChain>& chains,
                                          int K);

BaselineThresholds baseline_thresholds(const std::vector<RewardedMarkovChain>& chains,
                                       int K);

// Single-play policy built on regenerative cycles. Play proceeds in blocks:
// a block plays one arm until its second visit to the designated regeneration
// state (state 0). Slots from the first visit up to, but not including, the
// second form the SB2 segment; only SB2 samples feed the statistics
//   F(j) = S2_j / T2_j + sqrt(L * ln(t2) / T2_j),  t2 = sum_j T2_j,
// which makes the retained samples i.i.d. cycles. Every arm gets one block
// up front; afterwards each block goes to the arm maximizing F.
class RcaPolicy : public Policy {
 public:
  struct BlockRecord {
    int arm = 0;
    std::int64_t start_slot = 0;  // 0-based global slot of the block's first play
    std::int64_t length = 0;      // total slots, terminal regeneration visit included
    std::int64_t sb2_length = 0;
  };

  RcaPolicy(int arm_count, double exploration, bool record_blocks = false);

  Decision next_decision() override;  // always a single slot
  void report_step(const StepReport& report) override;
  std::string name() const override { return "rca"; }

  std::vector<double> index_values() const;
  const std::vector<BlockRecord>& blocks() const { return blocks_; }
  std::int64_t total_sb2_slots() const { return total_t2_; }
  const std::vector<std::int64_t>& sb2_counts() const { return t2_; }
  const std::vector<double>& sb2_sums() const { return s2_; }
  const std::vector<std::int64_t>& block_counts() const { return block_count_; }

 private:
  int pick_arm() const;

  int n_;
  double l_;
  bool record_;
  std::vector<double> s2_;
  std::vector<std::int64_t> t2_;
  std::vector<std::int64_t> block_count_;
  std::int64_t total_t2_ = 0;
  std::int64_t slot_ = 0;
  int cur_ = -1;          // arm of the active block, -1 between blocks
  bool in_sb2_ = false;
  std::int64_t block_start_ = 0;
  std::int64_t block_sb2_ = 0;
  std::optional<Decision> pending_;
  std::vector<BlockRecord> blocks_;
};

// Single-play policy with deterministic exploration/exploitation epochs.
// Before epoch boundaries at next slot t it compares the exploration slot
// count X with D * ln(t): exploration epochs sweep every arm for
// ceil(L) * 4^(k-1) slots each (k counting exploration epochs), exploitation
// epochs play the arm with the best exploration-phase sample mean for
// 2 * ceil(L) * 4^(k-1) slots. Only exploration slots feed the means.
class RucbPolicy : public Policy {
 public:
  struct EpochRecord {
    bool exploration = false;
    std::int64_t start_slot = 0;
    std::int64_t length = 0;  // planned length; the horizon may cut it short
  };

  RucbPolicy(int arm_count, double exploration, double exploit_threshold,
             bool record_epochs = false);

  Decision next_decision() override;
  void report_step(const StepReport& report) override;
  std::string name() const override { return "rucb"; }

  std::vector<double> exploration_means() const;
  const std::vector<EpochRecord>& epochs() const { return epochs_; }
  std::int64_t exploration_slots() const { return explored_; }

 private:
  void plan_epoch();
  std::int64_t run_length(std::int64_t completed_epochs, std::int64_t factor) const;
  int best_arm() const;

  int n_;
  double l_;
  double d_;
  bool record_;
  std::int64_t c_;  // ceil(L), slots are integral
  std::vector<double> sum_;
  std::vector<std::int64_t> cnt_;
  std::int64_t explored_ = 0;
  std::int64_t slot_ = 0;
  std::int64_t n_explore_ = 0;  // completed exploration epochs
  std::int64_t n_exploit_ = 0;  // completed exploitation epochs
  bool exploring_ = false;
  int run_arm_ = -1;            // arm of the current run
  std::int64_t run_left_ = 0;   // slots left in the current run
  std::int64_t epoch_run_len_ = 0;
  std::optional<Decision> pending_;
  std::vector<EpochRecord> epochs_;
};

}  // namespace rmab
