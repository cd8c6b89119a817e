#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "rmab/baselines.hpp"
#include "rmab/bounds.hpp"
#include "rmab/concentration.hpp"
#include "rmab/errors.hpp"
#include "rmab/export.hpp"
#include "rmab/scenario.hpp"
#include "rmab/sim.hpp"

namespace {

int exit_code_for(const rmab::Error& e) {
  const auto& cls = e.error_class();
  if (cls == "usage") return 2;
  if (cls == "config") return 3;
  if (cls == "validation") return 4;
  if (cls == "io") return 5;
  if (cls == "numeric") return 6;
  return 10;
}

std::string resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("RMAB_OUT_DIR"); env && *env) return env;
  return "out";
}

void print_warnings(const rmab::ScenarioConfig& cfg) {
  for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << "\n";
}

int cmd_simulate(const std::string& scenario, std::string policy, std::int64_t horizon,
                 int runs, std::int64_t seed, const std::string& out_flag) {
  auto cfg = rmab::load_scenario(scenario);
  if (horizon > 0) cfg.horizon = horizon;
  if (runs > 0) cfg.runs = runs;
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
  if (horizon > 0 || runs > 0) {
    cfg.sample_points.clear();
    rmab::finalize_scenario(cfg);
  }
  print_warnings(cfg);
  if (policy.empty()) policy = cfg.default_policy;

  const auto result = rmab::run_experiment(cfg, policy);
  std::map<std::string, rmab::RegretTrace> traces{{policy, result.trace}};
  const auto out_dir = resolve_out_dir(out_flag);
  // Fold in policies exported here earlier so every plot keeps one series per
  // policy.
  if (std::filesystem::is_directory(out_dir)) {
    for (const auto& entry : std::filesystem::directory_iterator(out_dir)) {
      if (entry.path().extension() != ".csv") continue;
      const auto name = entry.path().stem().string();
      if (name == policy) continue;
      try {
        const auto table = rmab::read_trace_csv(entry.path());
        rmab::RegretTrace prior;
        prior.policy = name;
        prior.n = table.n;
        prior.mean_reward = table.mean_reward;
        prior.regret = table.regret;
        prior.regret_over_ln_n = table.regret_over_ln_n;
        prior.reward_variance = table.reward_variance;
        traces.emplace(name, std::move(prior));
      } catch (const rmab::Error&) {
        // Not one of ours; leave it out of the plots.
      }
    }
  }
  rmab::export_results(traces, out_dir);

  const auto& t = result.trace;
  const std::size_t last = t.n.size() - 1;
  std::cout << "scenario " << cfg.name << ": policy " << policy << ", " << cfg.runs
            << " run(s), horizon " << cfg.horizon << "\n";
  std::cout << std::setprecision(10);
  std::cout << "final regret " << t.regret[last] << " (regret/ln n "
            << t.regret_over_ln_n[last] << ", reward variance "
            << t.reward_variance[last] << ")\n";
  std::cout << "wrote " << out_dir << "/" << policy << ".csv and comparison plots\n";
  return 0;
}

int cmd_bounds(const std::string& scenario) {
  const auto cfg = rmab::load_scenario(scenario);
  print_warnings(cfg);
  const auto truth = rmab::ScenarioTruth::from_chains(
      cfg.arms, cfg.select_count, cfg.cee.exploration, cfg.cee.schedule);

  std::cout << std::setprecision(10);
  std::cout << "arms " << truth.arm_count() << ", K " << truth.select_count << ", L "
            << truth.exploration << "\n";
  std::cout << "stationary means (descending):";
  for (std::size_t r = 0; r < truth.mus.size(); ++r)
    std::cout << " " << truth.mus[r] << "(arm " << truth.sigma[r] << ")";
  std::cout << "\n";
  std::cout << "deviation constant " << truth.c_p << "\n";
  const double need = truth.select_count == 1
                          ? rmab::required_step_length(truth)
                          : rmab::required_step_length_multi(truth);
  std::cout << "required step length " << need << " (ceil "
            << static_cast<std::int64_t>(std::ceil(need)) << ")\n";
  const auto q = truth.select_count == 1 ? rmab::q_index(truth)
                                         : rmab::q_prime_index(truth);
  std::cout << "anchor step index " << q << " with length " << truth.schedule.at(q)
            << "\n";

  // The constants overflow double on harsh scenarios; print the long doubles
  // directly and annotate anything huge with its log10.
  const auto fmt_big = [](long double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    if (v > 1e15L)
      os << " (log10 " << std::setprecision(6)
         << static_cast<double>(std::log10(v)) << ")";
    return os.str();
  };
  const auto c = rmab::bound_constants(truth);
  std::cout << "warmup steps " << fmt_big(c.warmup) << "\n";
  std::cout << "bound: " << fmt_big(c.slope_step) << " * G(n) ln n + "
            << fmt_big(c.slope) << " * ln n + " << fmt_big(c.offset_step)
            << " * G(n) + " << fmt_big(c.offset) << "\n";
  for (const auto n : cfg.sample_points) {
    const auto bound = rmab::regret_bound(truth, c, n);
    std::cout << "n " << n << ": G(n) " << rmab::g_of_n(truth.schedule, n)
              << ", regret bound " << fmt_big(bound) << "\n";
  }
  return 0;
}

int cmd_thresholds(const std::string& scenario) {
  const auto cfg = rmab::load_scenario(scenario);
  print_warnings(cfg);
  const auto truth = rmab::ScenarioTruth::from_chains(
      cfg.arms, cfg.select_count, cfg.cee.exploration, cfg.cee.schedule);
  const auto t = rmab::baseline_thresholds(cfg.arms, cfg.select_count);

  std::cout << std::setprecision(10);
  const double need = truth.select_count == 1
                          ? rmab::required_step_length(truth)
                          : rmab::required_step_length_multi(truth);
  std::cout << "cee step length requirement " << need << " (ceil "
            << static_cast<std::int64_t>(std::ceil(need)) << ")\n";
  std::cout << "rca exploration requirement " << t.rca_l_min << "\n";
  std::cout << "rucb exploration requirement " << t.rucb_l_min << " (rounded "
            << t.rucb_l_rounded << ")\n";
  std::cout << "rucb exploitation threshold " << t.rucb_d_min << "\n";
  std::cout << "context: s_max " << t.s_max << ", r_max " << t.r_max << ", pi_hat_max "
            << t.pi_hat_max << ", eps_min " << t.eps_min << ", eps_star " << t.eps_star
            << ", top gap " << t.top_gap << "\n";
  return 0;
}

int cmd_validate(std::int64_t seed, std::int64_t reps, const std::string& out_flag) {
  const auto suite =
      rmab::run_validation_suite(static_cast<std::uint64_t>(seed), reps);
  std::printf("%-24s %-12s %12s %12s %12s %5s %s\n", "check", "generator", "empirical",
              "bound", "mc_sigma", "pass", "detail");
  for (const auto& r : suite.reports) {
    std::printf("%-24s %-12s %12.5g %12.5g %12.5g %5s %s%s\n", r.check.c_str(),
                r.generator.c_str(), r.empirical, r.bound, r.mc_sigma,
                r.pass ? "yes" : "NO", r.detail.c_str(),
                r.extrapolated ? " [extrapolated]" : "");
  }
  if (!out_flag.empty()) {
    std::filesystem::create_directories(out_flag);
    std::ofstream csv(std::filesystem::path(out_flag) / "validation.csv");
    csv << "check,generator,empirical,bound,mc_sigma,extrapolated,pass,detail\n";
    for (const auto& r : suite.reports)
      csv << r.check << ',' << r.generator << ',' << std::setprecision(17)
          << r.empirical << ',' << r.bound << ',' << r.mc_sigma << ','
          << (r.extrapolated ? 1 : 0) << ',' << (r.pass ? 1 : 0) << ',' << r.detail
          << "\n";
  }
  std::cout << (suite.all_pass ? "all checks passed" : "CHECK FAILURES PRESENT")
            << " (" << suite.reports.size() << " checks)\n";
  return suite.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"restless-bandit simulation and analysis toolkit"};
  app.require_subcommand(1);

  std::string scenario, policy, out_dir;
  std::int64_t horizon = 0, seed = -1, reps = 100000;
  int runs = 0;

  auto* sim = app.add_subcommand("simulate", "run a policy on a scenario");
  sim->add_option("--scenario", scenario, "scenario file")->required();
  sim->add_option("--policy", policy, "cee, rca, rucb, or genie");
  sim->add_option("--horizon", horizon, "override the scenario horizon");
  sim->add_option("--runs", runs, "override the scenario run count");
  sim->add_option("--seed", seed, "override the scenario seed");
  sim->add_option("--out", out_dir, "output directory (default $RMAB_OUT_DIR or ./out)");

  auto* bounds = app.add_subcommand("bounds", "evaluate the analytic regret bound");
  bounds->add_option("--scenario", scenario, "scenario file")->required();

  auto* thresholds =
      app.add_subcommand("thresholds", "tuning requirements for all policies");
  thresholds->add_option("--scenario", scenario, "scenario file")->required();

  auto* validate =
      app.add_subcommand("validate", "Monte Carlo checks of the concentration bounds");
  validate->add_option("--seed", seed, "master seed")->required();
  validate->add_option("--reps", reps, "replications per check (default 100000)");
  validate->add_option("--out", out_dir, "also write a CSV report here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed())
      return cmd_simulate(scenario, policy, horizon, runs, seed, out_dir);
    if (bounds->parsed()) return cmd_bounds(scenario);
    if (thresholds->parsed()) return cmd_thresholds(scenario);
    if (validate->parsed()) return cmd_validate(seed < 0 ? 0 : seed, reps, out_dir);
  } catch (const rmab::Error& e) {
    std::cerr << "error[" << e.error_class() << "]: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << "\n";
    return 10;
  }
  return 0;
}
