#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rmab/chain.hpp"
#include "rmab/schedule.hpp"

namespace rmab {

struct CeeParams {
  double exploration = 2.1;
  StepSchedule schedule = StepSchedule::constant(1);
  bool count_padded = true;
};

struct RcaParams {
  double exploration = 0.0;
};

struct RucbParams {
  double exploration = 0.0;
  double exploit_threshold = 0.0;
};

// A fully resolved experiment description: the arm set, the player
// parameters, and the measurement grid. Derived fields (stationary profiles,
// rank order, genie rate) are filled in at load time.
struct ScenarioConfig {
  std::string name;
  std::vector<RewardedMarkovChain> arms;
  std::vector<std::string> arm_labels;
  std::vector<int> start_states;  // -1 draws from the stationary distribution
  int select_count = 1;           // K
  std::int64_t horizon = 0;
  int runs = 1;
  std::uint64_t seed = 0;
  std::string default_policy = "cee";
  CeeParams cee;
  std::optional<RcaParams> rca;
  std::optional<RucbParams> rucb;
  std::vector<std::int64_t> sample_points;  // ascending, last == horizon

  // Derived at load time.
  std::vector<StationaryProfile> profiles;
  std::vector<int> rank_order;  // arm ids sorted by stationary mean, descending
  double genie_rate = 0.0;      // sum of the top-K stationary means
  std::vector<std::string> warnings;

  int arm_count() const { return static_cast<int>(arms.size()); }
};

// Line-oriented scenario format; see docs/scenario-format.md. Parse errors
// carry the origin name and 1-based line number.
ScenarioConfig parse_scenario(const std::string& text, const std::string& origin);
ScenarioConfig load_scenario(const std::filesystem::path& path);

// Recompute the derived fields after programmatic edits.
void finalize_scenario(ScenarioConfig& config);

}  // namespace rmab
