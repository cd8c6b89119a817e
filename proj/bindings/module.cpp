#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rmab/baselines.hpp"
#include "rmab/bounds.hpp"
#include "rmab/cee.hpp"
#include "rmab/chain.hpp"
#include "rmab/concentration.hpp"
#include "rmab/errors.hpp"
#include "rmab/scenario.hpp"
#include "rmab/schedule.hpp"
#include "rmab/sim.hpp"

namespace py = pybind11;
using namespace rmab;

namespace {

// Bound constants can exceed double range; clamp to +-inf instead of relying
// on the narrowing cast.
double shrink(long double v) {
  constexpr double kMax = std::numeric_limits<double>::max();
  if (v > kMax) return std::numeric_limits<double>::infinity();
  if (v < -kMax) return -std::numeric_limits<double>::infinity();
  return static_cast<double>(v);
}

double log10_of(long double v) {
  if (v <= 0.0L) return -std::numeric_limits<double>::infinity();
  return static_cast<double>(std::log10(v));
}

py::dict constants_dict(const BoundConstants& c) {
  py::dict d;
  d["q"] = c.q;
  d["step_at_q"] = c.step_at_q;
  d["drift"] = c.drift;
  d["margins"] = c.margins;
  std::vector<double> floors;
  for (const auto f : c.play_floors) floors.push_back(shrink(f));
  d["play_floors"] = floors;
  d["warmup"] = shrink(c.warmup);
  d["warmup_log10"] = log10_of(c.warmup);
  d["slope_step"] = shrink(c.slope_step);
  d["slope"] = shrink(c.slope);
  d["offset_step"] = shrink(c.offset_step);
  d["offset_step_log10"] = log10_of(c.offset_step);
  d["offset"] = shrink(c.offset);
  d["offset_log10"] = log10_of(c.offset);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "restless multi-armed bandit toolkit core";

  py::register_exception<Error>(m, "Error");

  py::class_<RewardedMarkovChain>(m, "Chain")
      .def(py::init([](int states, std::vector<double> active,
                       std::vector<double> rewards,
                       std::optional<std::vector<double>> passive) {
             RewardedMarkovChain c;
             c.state_count = states;
             c.active = std::move(active);
             c.passive = passive ? std::move(*passive) : c.active;
             c.rewards = std::move(rewards);
             return c;
           }),
           py::arg("states"), py::arg("active"), py::arg("rewards"),
           py::arg("passive") = py::none(),
           "Row-major flat matrices; passive defaults to active.")
      .def_static("gilbert_elliot", &RewardedMarkovChain::gilbert_elliot,
                  py::arg("p01"), py::arg("p10"), py::arg("r_bad"), py::arg("r_good"))
      .def_readonly("state_count", &RewardedMarkovChain::state_count)
      .def_readonly("rewards", &RewardedMarkovChain::rewards)
      .def("p", &RewardedMarkovChain::p, py::arg("from_state"), py::arg("to_state"))
      .def("q", &RewardedMarkovChain::q, py::arg("from_state"), py::arg("to_state"));

  py::class_<ChainValidation>(m, "ChainValidation")
      .def_readonly("ok", &ChainValidation::ok)
      .def_readonly("reversible", &ChainValidation::reversible)
      .def_readonly("errors", &ChainValidation::errors)
      .def_readonly("warnings", &ChainValidation::warnings);

  py::class_<StationaryProfile>(m, "StationaryProfile")
      .def_readonly("pi", &StationaryProfile::pi)
      .def_readonly("mu", &StationaryProfile::mu)
      .def_readonly("min_pi", &StationaryProfile::min_pi)
      .def_readonly("reward_sum", &StationaryProfile::reward_sum);

  py::class_<EigenGaps>(m, "EigenGaps")
      .def_readonly("plain", &EigenGaps::plain)
      .def_readonly("mult_symm", &EigenGaps::mult_symm);

  m.def("validate_chain", &validate_chain, py::arg("chain"));
  m.def("require_valid", &require_valid, py::arg("chain"));
  m.def("stationary", &stationary_distribution, py::arg("chain"));
  m.def("deviation_bound", &arm_deviation_bound, py::arg("chain"));
  m.def("chain_constant", &chain_constant_cp, py::arg("chains"));
  m.def("eigen_gaps", &eigen_gap, py::arg("chain"));
  m.def("validation_chains", &validation_chains);

  py::class_<StepSchedule>(m, "Schedule")
      .def_static("constant", &StepSchedule::constant, py::arg("step_length"))
      .def_static("logarithmic", &StepSchedule::logarithmic)
      .def_static("custom", &StepSchedule::custom, py::arg("prefix"),
                  py::arg("divergence_attested"))
      .def("at", &StepSchedule::at, py::arg("index"))
      .def("cumulative", &StepSchedule::cumulative, py::arg("index"))
      .def("step_holding", &StepSchedule::step_holding, py::arg("slot"))
      .def("value_at_slot", &StepSchedule::value_at_slot, py::arg("slot"))
      .def("first_index_at_least", &StepSchedule::first_index_at_least,
           py::arg("value"));

  py::class_<ScenarioTruth>(m, "Truth")
      .def_static("from_chains", &ScenarioTruth::from_chains, py::arg("chains"),
                  py::arg("select_count"), py::arg("exploration"), py::arg("schedule"))
      .def_static("from_values", &ScenarioTruth::from_values, py::arg("mus_by_arm"),
                  py::arg("c_p"), py::arg("select_count"), py::arg("exploration"),
                  py::arg("schedule"))
      .def_readonly("mus", &ScenarioTruth::mus)
      .def_readonly("sigma", &ScenarioTruth::sigma)
      .def_readonly("c_p", &ScenarioTruth::c_p)
      .def_readonly("select_count", &ScenarioTruth::select_count)
      .def_readonly("exploration", &ScenarioTruth::exploration);

  m.def("required_step_length", &required_step_length, py::arg("truth"));
  m.def("required_step_length_multi", &required_step_length_multi, py::arg("truth"));
  m.def("q_index", &q_index, py::arg("truth"));
  m.def("q_prime_index", &q_prime_index, py::arg("truth"));
  m.def("bound_constants",
        [](const ScenarioTruth& t) { return constants_dict(bound_constants(t)); },
        py::arg("truth"));
  m.def("corollary_constants",
        [](const ScenarioTruth& t) { return constants_dict(corollary_constants(t)); },
        py::arg("truth"));
  m.def("lambda_raw",
        [](const ScenarioTruth& t, std::int64_t n, int rank) {
          return shrink(lambda_raw(t, n, rank));
        },
        py::arg("truth"), py::arg("n"), py::arg("rank"));
  m.def("lambda_steps",
        [](const ScenarioTruth& t, std::int64_t n, int rank) {
          return shrink(lambda_steps(t, n, rank));
        },
        py::arg("truth"), py::arg("n"), py::arg("rank"));
  m.def("regret_bound_theorem",
        [](const ScenarioTruth& t, std::int64_t n) {
          return shrink(regret_bound_theorem(t, n));
        },
        py::arg("truth"), py::arg("n"));
  m.def("regret_bound_corollary",
        [](const ScenarioTruth& t, std::int64_t n) {
          return shrink(regret_bound_corollary(t, n));
        },
        py::arg("truth"), py::arg("n"));
  m.def("regret_bound_corollary_log10",
        [](const ScenarioTruth& t, std::int64_t n) {
          return log10_of(regret_bound_corollary(t, n));
        },
        py::arg("truth"), py::arg("n"));

  py::class_<BaselineThresholds>(m, "BaselineThresholds")
      .def_readonly("rca_l_min", &BaselineThresholds::rca_l_min)
      .def_readonly("rucb_l_min", &BaselineThresholds::rucb_l_min)
      .def_readonly("rucb_l_rounded", &BaselineThresholds::rucb_l_rounded)
      .def_readonly("rucb_d_min", &BaselineThresholds::rucb_d_min)
      .def_readonly("s_max", &BaselineThresholds::s_max)
      .def_readonly("r_max", &BaselineThresholds::r_max)
      .def_readonly("pi_hat_max", &BaselineThresholds::pi_hat_max)
      .def_readonly("eps_min", &BaselineThresholds::eps_min)
      .def_readonly("eps_star", &BaselineThresholds::eps_star)
      .def_readonly("top_gap", &BaselineThresholds::top_gap);

  m.def("rca_threshold", &rca_threshold, py::arg("chains"));
  m.def("rucb_thresholds", &rucb_thresholds, py::arg("chains"), py::arg("select_count"));
  m.def("baseline_thresholds", &baseline_thresholds, py::arg("chains"),
        py::arg("select_count"));

  py::class_<Decision>(m, "Decision")
      .def_readonly("arms", &Decision::arms)
      .def_readonly("slots", &Decision::slots);

  py::class_<StepReport>(m, "StepReport")
      .def(py::init<>())
      .def_readwrite("arms", &StepReport::arms)
      .def_readwrite("sample_means", &StepReport::sample_means)
      .def_readwrite("end_states", &StepReport::end_states)
      .def_readwrite("slots_played", &StepReport::slots_played);

  py::class_<CeePolicy>(m, "CeePolicy")
      .def(py::init([](int arm_count, int select_count, double exploration,
                       const StepSchedule& schedule, bool count_padded,
                       bool allow_small_exploration) {
             CeeOptions o;
             o.arm_count = arm_count;
             o.select_count = select_count;
             o.exploration = exploration;
             o.schedule = schedule;
             o.count_padded_plays = count_padded;
             o.allow_small_exploration = allow_small_exploration;
             return CeePolicy(o);
           }),
           py::arg("arm_count"), py::arg("select_count") = 1,
           py::arg("exploration") = 2.1,
           py::arg("schedule") = StepSchedule::constant(1),
           py::arg("count_padded") = true, py::arg("allow_small_exploration") = false)
      .def("next_decision", &CeePolicy::next_decision)
      .def("report_step", &CeePolicy::report_step, py::arg("report"))
      .def("name", &CeePolicy::name)
      .def("initializing", &CeePolicy::initializing)
      .def("index_values", &CeePolicy::index_values)
      .def("mean_sums", &CeePolicy::mean_sums)
      .def("play_counts", &CeePolicy::play_counts)
      .def("global_step", &CeePolicy::global_step)
      .def("elapsed_slots", &CeePolicy::elapsed_slots);

  py::class_<RcaPolicy::BlockRecord>(m, "BlockRecord")
      .def_readonly("arm", &RcaPolicy::BlockRecord::arm)
      .def_readonly("start_slot", &RcaPolicy::BlockRecord::start_slot)
      .def_readonly("length", &RcaPolicy::BlockRecord::length)
      .def_readonly("sb2_length", &RcaPolicy::BlockRecord::sb2_length);

  py::class_<RcaPolicy>(m, "RcaPolicy")
      .def(py::init<int, double, bool>(), py::arg("arm_count"), py::arg("exploration"),
           py::arg("record_blocks") = false)
      .def("next_decision", &RcaPolicy::next_decision)
      .def("report_step", &RcaPolicy::report_step, py::arg("report"))
      .def("name", &RcaPolicy::name)
      .def("index_values", &RcaPolicy::index_values)
      .def("blocks", &RcaPolicy::blocks)
      .def("total_sb2_slots", &RcaPolicy::total_sb2_slots)
      .def("sb2_counts", &RcaPolicy::sb2_counts)
      .def("sb2_sums", &RcaPolicy::sb2_sums)
      .def("block_counts", &RcaPolicy::block_counts);

  py::class_<RucbPolicy::EpochRecord>(m, "EpochRecord")
      .def_readonly("exploration", &RucbPolicy::EpochRecord::exploration)
      .def_readonly("start_slot", &RucbPolicy::EpochRecord::start_slot)
      .def_readonly("length", &RucbPolicy::EpochRecord::length);

  py::class_<RucbPolicy>(m, "RucbPolicy")
      .def(py::init<int, double, double, bool>(), py::arg("arm_count"),
           py::arg("exploration"), py::arg("exploit_threshold"),
           py::arg("record_epochs") = false)
      .def("next_decision", &RucbPolicy::next_decision)
      .def("report_step", &RucbPolicy::report_step, py::arg("report"))
      .def("name", &RucbPolicy::name)
      .def("exploration_means", &RucbPolicy::exploration_means)
      .def("epochs", &RucbPolicy::epochs)
      .def("exploration_slots", &RucbPolicy::exploration_slots);

  py::class_<GeniePolicy>(m, "GeniePolicy")
      .def(py::init<std::vector<int>, std::int64_t>(), py::arg("arms"),
           py::arg("chunk") = 4096)
      .def("next_decision", &GeniePolicy::next_decision)
      .def("report_step", &GeniePolicy::report_step, py::arg("report"))
      .def("name", &GeniePolicy::name);

  py::class_<ScenarioConfig>(m, "Scenario")
      .def_readonly("name", &ScenarioConfig::name)
      .def_readonly("arms", &ScenarioConfig::arms)
      .def_readonly("arm_labels", &ScenarioConfig::arm_labels)
      .def_readonly("start_states", &ScenarioConfig::start_states)
      .def_readonly("select_count", &ScenarioConfig::select_count)
      .def_readonly("horizon", &ScenarioConfig::horizon)
      .def_readonly("runs", &ScenarioConfig::runs)
      .def_readonly("seed", &ScenarioConfig::seed)
      .def_readonly("default_policy", &ScenarioConfig::default_policy)
      .def_readonly("sample_points", &ScenarioConfig::sample_points)
      .def_readonly("rank_order", &ScenarioConfig::rank_order)
      .def_readonly("genie_rate", &ScenarioConfig::genie_rate)
      .def_readonly("warnings", &ScenarioConfig::warnings)
      .def("arm_count", &ScenarioConfig::arm_count);

  m.def("parse_scenario", &parse_scenario, py::arg("text"), py::arg("origin"));
  m.def("load_scenario",
        [](const std::string& path) { return load_scenario(path); }, py::arg("path"));

  py::class_<RegretTrace>(m, "RegretTrace")
      .def_readonly("policy", &RegretTrace::policy)
      .def_readonly("genie_rate", &RegretTrace::genie_rate)
      .def_readonly("n", &RegretTrace::n)
      .def_readonly("mean_reward", &RegretTrace::mean_reward)
      .def_readonly("regret", &RegretTrace::regret)
      .def_readonly("regret_over_ln_n", &RegretTrace::regret_over_ln_n)
      .def_readonly("reward_variance", &RegretTrace::reward_variance)
      .def_readonly("per_run", &RegretTrace::per_run);

  m.def("run_experiment",
        [](const ScenarioConfig& cfg, const std::string& policy) {
          return run_experiment(cfg, policy).trace;
        },
        py::arg("scenario"), py::arg("policy"));
  m.def("bootstrap_mean_ci", &bootstrap_mean_ci, py::arg("samples"),
        py::arg("resamples"), py::arg("level"), py::arg("seed"));

  py::class_<TailCheckReport>(m, "TailCheckReport")
      .def_readonly("check", &TailCheckReport::check)
      .def_readonly("generator", &TailCheckReport::generator)
      .def_readonly("empirical", &TailCheckReport::empirical)
      .def_readonly("bound", &TailCheckReport::bound)
      .def_readonly("mc_sigma", &TailCheckReport::mc_sigma)
      .def_readonly("extrapolated", &TailCheckReport::extrapolated)
      .def_readonly("pass_", &TailCheckReport::pass)
      .def_readonly("detail", &TailCheckReport::detail);

  py::class_<ValidationSuite>(m, "ValidationSuite")
      .def_readonly("reports", &ValidationSuite::reports)
      .def_readonly("all_pass", &ValidationSuite::all_pass);

  m.def("run_validation_suite", &run_validation_suite, py::arg("seed"),
        py::arg("replications"));
  m.def("exact_deviation", &exact_deviation, py::arg("chain"), py::arg("start_state"),
        py::arg("horizon"));
  m.def("worst_start_state", &worst_start_state, py::arg("chain"), py::arg("horizon"));
}
