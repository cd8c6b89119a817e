#pragma once

#include <cstdint>
#include <vector>

namespace rmab {

// Deterministic step-length sequence {B_i}, 1-based. Lengths are positive and
// non-decreasing. Non-constant schedules must diverge: the logarithmic kind
// does by construction, custom prefixes carry an explicit attestation and
// refuse to fabricate values past the supplied prefix.
class StepSchedule {
 public:
  enum class Kind { Constant, Logarithmic, Custom };

  static StepSchedule constant(std::int64_t b);
  // B_i = ceil(ln(i + 1)) + 1.
  static StepSchedule logarithmic();
  static StepSchedule custom(std::vector<std::int64_t> prefix, bool divergence_attested);

  Kind kind() const { return kind_; }
  bool divergence_attested() const { return attested_; }
  std::int64_t constant_value() const;
  const std::vector<std::int64_t>& prefix() const { return prefix_; }

  // B_i for i >= 1. Custom schedules throw UsageError past their prefix.
  std::int64_t at(std::int64_t i) const;

  // B_1 + ... + B_i.
  std::int64_t cumulative(std::int64_t i) const;

  // Smallest I with cumulative(I) >= n, for n >= 1.
  std::int64_t step_holding(std::int64_t n) const;

  // Length of the step in progress at slot n: B_{step_holding(n)}.
  std::int64_t value_at_slot(std::int64_t n) const;

  // Smallest i with B_i >= value, or -1 if the schedule never reaches it
  // (constant schedules below value; custom prefixes are searched only as far
  // as they are specified and throw if exhausted).
  std::int64_t first_index_at_least(std::int64_t value) const;

 private:
  StepSchedule() = default;

  Kind kind_ = Kind::Constant;
  bool attested_ = true;
  std::int64_t constant_ = 1;
  std::vector<std::int64_t> prefix_;
  std::vector<std::int64_t> prefix_cumulative_;
};

}  // namespace rmab
