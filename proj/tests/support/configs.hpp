#pragma once

#include <cstdint>

#include "rmab/concentration.hpp"
#include "rmab/scenario.hpp"

namespace testcfg {

// Two-channel setup for cheap end-to-end runs.
inline rmab::ScenarioConfig two_arm(rmab::StepSchedule schedule, std::int64_t horizon,
                                    std::uint64_t seed) {
  rmab::ScenarioConfig cfg;
  cfg.name = "two-arm";
  cfg.arms = {rmab::RewardedMarkovChain::gilbert_elliot(0.5, 0.1, 0.1, 1.0),
              rmab::RewardedMarkovChain::gilbert_elliot(0.2, 0.4, 0.1, 1.0)};
  cfg.arm_labels = {"a", "b"};
  cfg.start_states = {-1, -1};
  cfg.select_count = 1;
  cfg.horizon = horizon;
  cfg.runs = 1;
  cfg.seed = seed;
  cfg.cee.schedule = std::move(schedule);
  rmab::finalize_scenario(cfg);
  return cfg;
}

// The five bundled channels.
inline rmab::ScenarioConfig five_arm(rmab::StepSchedule schedule, std::int64_t horizon,
                                     std::uint64_t seed, int select_count = 1) {
  rmab::ScenarioConfig cfg;
  cfg.name = "five-arm";
  cfg.arms = rmab::validation_chains();
  cfg.arm_labels = {"ch1", "ch2", "ch3", "ch4", "ch5"};
  cfg.start_states.assign(5, -1);
  cfg.select_count = select_count;
  cfg.horizon = horizon;
  cfg.runs = 1;
  cfg.seed = seed;
  cfg.cee.schedule = std::move(schedule);
  rmab::finalize_scenario(cfg);
  return cfg;
}

}  // namespace testcfg
