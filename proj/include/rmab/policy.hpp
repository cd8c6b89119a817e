#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rmab {

// A commitment to play a set of arms for a number of consecutive slots.
// Arms are distinct and listed in ascending index order.
struct Decision {
  std::vector<int> arms;
  std::int64_t slots = 0;
};

// Observations for one completed step, aligned with the decision's arm order.
// Only played arms are reported: the environment never leaks the state of
// arms the policy did not select.
struct StepReport {
  std::vector<int> arms;             // must equal the outstanding decision's arms
  std::vector<double> sample_means;  // mean reward per played arm over slots_played
  std::vector<int> end_states;       // state observed on the last played slot, per arm
  std::int64_t slots_played = 0;     // <= decision slots; smaller only at the horizon
};

// Decision/report handshake: next_decision() and report_step() strictly
// alternate. Policies are deterministic given their report stream.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual Decision next_decision() = 0;
  virtual void report_step(const StepReport& report) = 0;
  virtual std::string name() const = 0;
};

}  // namespace rmab
