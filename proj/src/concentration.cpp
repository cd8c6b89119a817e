#include "rmab/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rmab/errors.hpp"
#include "rmab/rng.hpp"

namespace rmab {

namespace {

void validate_spec(const TailCheckSpec& s, bool drifted) {
  if (s.length < 1) throw UsageError("tail check requires a sequence length >= 1");
  if (!(s.range > 0.0)) throw UsageError("tail check requires a positive range");
  if (!(s.deviation > 0.0)) throw UsageError("tail check requires a positive deviation");
  if (s.replications < 1) throw UsageError("tail check requires replications >= 1");
  if (!(s.mean > 0.0) || s.mean >= s.range)
    throw UsageError("tail check requires 0 < mean < range");
  if (s.drift < 0.0) throw UsageError("tail check drift must be nonnegative");
  if (drifted && s.drift >= s.mean)
    throw UsageError("drifted tail bound requires drift < mean");
  if (s.mean + s.drift > s.range)
    throw UsageError("tail check requires mean + drift <= range");
}

std::string spec_detail(const TailCheckSpec& s) {
  std::ostringstream os;
  os << "n=" << s.length << " a=" << s.deviation << " b=" << s.range
     << " mu=" << s.mean << " c=" << s.drift << " reps=" << s.replications;
  return os.str();
}

// Shared tail counting: fraction of replications with S_n >= hi / <= lo.
std::pair<double, double> tail_fractions(const TailCheckSpec& s,
                                         const SequenceSampler& sampler, double hi,
                                         double lo) {
  std::int64_t up = 0, down = 0;
  for (std::int64_t r = 0; r < s.replications; ++r) {
    auto rng = make_stream(s.seed, "tail", static_cast<std::uint64_t>(r));
    const double sum = sampler(s, rng);
    if (sum >= hi) ++up;
    if (sum <= lo) ++down;
  }
  const double reps = static_cast<double>(s.replications);
  return {static_cast<double>(up) / reps, static_cast<double>(down) / reps};
}

TailCheckReport make_tail_report(std::string check, std::string generator,
                                 double empirical, double bound, double reps,
                                 std::string detail, bool extrapolated = false) {
  TailCheckReport r;
  r.check = std::move(check);
  r.generator = std::move(generator);
  r.empirical = empirical;
  r.bound = bound;
  r.mc_sigma = std::sqrt(empirical * (1.0 - empirical) / reps);
  r.extrapolated = extrapolated;
  r.pass = empirical <= bound + 3.0 * r.mc_sigma;
  r.detail = std::move(detail);
  return r;
}

}  // namespace

SequenceSampler iid_sampler() {
  return [](const TailCheckSpec& s, std::mt19937_64& rng) {
    const double p = s.mean / s.range;
    double sum = 0.0;
    for (int t = 0; t < s.length; ++t)
      if (uniform01(rng) < p) sum += s.range;
    return sum;
  };
}

SequenceSampler alternating_sampler() {
  return [](const TailCheckSpec& s, std::mt19937_64& rng) {
    const double p_hi = (s.mean + s.drift) / s.range;
    const double p_lo = (s.mean - s.drift) / s.range;
    double sum = 0.0;
    for (int t = 1; t <= s.length; ++t)
      if (uniform01(rng) < (t % 2 ? p_hi : p_lo)) sum += s.range;
    return sum;
  };
}

std::vector<TailCheckReport> check_chernoff(const TailCheckSpec& spec,
                                            const SequenceSampler& sampler,
                                            const std::string& generator_name) {
  validate_spec(spec, false);
  const double n = static_cast<double>(spec.length);
  const double center = n * spec.mean;
  const auto [up, down] =
      tail_fractions(spec, sampler, center + spec.deviation, center - spec.deviation);
  const double z = spec.deviation / spec.range;
  const double bound = std::exp(-2.0 * z * z / n);
  const double reps = static_cast<double>(spec.replications);
  const std::string detail = spec_detail(spec);
  return {make_tail_report("fixed-mean-upper", generator_name, up, bound, reps, detail),
          make_tail_report("fixed-mean-lower", generator_name, down, bound, reps, detail)};
}

std::vector<TailCheckReport> check_drifted_chernoff(const TailCheckSpec& spec,
                                                    const SequenceSampler& sampler,
                                                    const std::string& generator_name) {
  validate_spec(spec, true);
  const double n = static_cast<double>(spec.length);
  const double hi = n * (spec.mean + spec.drift) + spec.deviation;
  const double lo = n * (spec.mean - spec.drift) - spec.deviation;
  const auto [up, down] = tail_fractions(spec, sampler, hi, lo);

  const double zu = spec.deviation * (spec.mean - spec.drift) /
                    (spec.range * (spec.mean + spec.drift));
  const double bound_up = std::exp(-2.0 * zu * zu / n);
  const double zd = spec.deviation / spec.range;
  const double bound_down = std::exp(-2.0 * zd * zd / n);

  const double reps = static_cast<double>(spec.replications);
  const std::string detail = spec_detail(spec);
  return {
      make_tail_report("drifted-mean-upper", generator_name, up, bound_up, reps, detail),
      make_tail_report("drifted-mean-lower", generator_name, down, bound_down, reps,
                       detail)};
}

std::vector<TailCheckReport> check_markov_deviation(const RewardedMarkovChain& chain,
                                                    const MarkovDeviationSpec& spec) {
  require_valid(chain);
  if (spec.horizons.empty())
    throw UsageError("markov deviation check requires at least one horizon");
  if (spec.replications < 2)
    throw UsageError("markov deviation check requires replications >= 2");
  if (spec.start_state < -1 || spec.start_state >= chain.state_count)
    throw UsageError("markov deviation check start state out of range");

  std::vector<std::int64_t> horizons = spec.horizons;
  std::sort(horizons.begin(), horizons.end());
  if (horizons.front() < 1)
    throw UsageError("markov deviation horizons must be >= 1");
  const std::int64_t t_max = horizons.back();

  const auto prof = stationary_distribution(chain);
  const double bound = prof.reward_sum / prof.min_pi;

  const std::size_t h = horizons.size();
  std::vector<long double> sum_dev(h, 0.0L), sumsq_dev(h, 0.0L);

  for (std::int64_t rep = 0; rep < spec.replications; ++rep) {
    auto rng = make_stream(spec.seed, "markov", static_cast<std::uint64_t>(rep));
    int state = spec.start_state;
    if (state < 0) {
      const double u = uniform01(rng);
      double acc = 0.0;
      state = chain.state_count - 1;
      for (int i = 0; i < chain.state_count - 1; ++i) {
        acc += prof.pi[i];
        if (u < acc) {
          state = i;
          break;
        }
      }
    }
    double reward_sum = 0.0;
    std::size_t next_h = 0;
    for (std::int64_t t = 1; t <= t_max; ++t) {
      state = step_state(chain.active, chain.state_count, state, uniform01(rng));
      reward_sum += chain.rewards[state];
      if (t == horizons[next_h]) {
        const long double dev = reward_sum - prof.mu * static_cast<double>(t);
        sum_dev[next_h] += dev;
        sumsq_dev[next_h] += dev * dev;
        ++next_h;
        if (next_h == h) break;
      }
    }
  }

  std::vector<TailCheckReport> out;
  const long double reps = static_cast<long double>(spec.replications);
  for (std::size_t i = 0; i < h; ++i) {
    const double mean = static_cast<double>(sum_dev[i] / reps);
    const double var =
        static_cast<double>((sumsq_dev[i] - sum_dev[i] * sum_dev[i] / reps) /
                            (reps - 1.0L));
    const double sigma = std::sqrt(std::max(var, 0.0) / static_cast<double>(reps));
    std::ostringstream os;
    os << "T=" << horizons[i] << " reps=" << spec.replications << " start="
       << (spec.start_state < 0 ? std::string("stationary")
                                : std::to_string(spec.start_state));
    TailCheckReport up;
    up.check = "markov-deviation-upper";
    up.generator = "chain-path";
    up.empirical = mean;
    up.bound = bound;
    up.mc_sigma = sigma;
    up.pass = mean <= bound + 3.0 * sigma;
    up.detail = os.str();
    out.push_back(up);

    TailCheckReport down = up;
    down.check = "markov-deviation-lower";
    down.empirical = -mean;
    down.extrapolated = true;
    down.pass = -mean <= bound + 3.0 * sigma;
    out.push_back(down);
  }
  return out;
}

double exact_deviation(const RewardedMarkovChain& chain, int start_state,
                       std::int64_t horizon) {
  require_valid(chain);
  if (start_state < 0 || start_state >= chain.state_count)
    throw UsageError("exact deviation start state out of range");
  const auto prof = stationary_distribution(chain);
  const int n = chain.state_count;
  std::vector<double> v(n, 0.0), next(n, 0.0);
  v[start_state] = 1.0;
  double dev = 0.0;
  for (std::int64_t t = 1; t <= horizon; ++t) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) next[j] += v[i] * chain.active[i * n + j];
    std::swap(v, next);
    double step_mean = 0.0;
    for (int j = 0; j < n; ++j) step_mean += v[j] * chain.rewards[j];
    dev += step_mean - prof.mu;
  }
  return dev;
}

int worst_start_state(const RewardedMarkovChain& chain, std::int64_t horizon) {
  int best = 0;
  double best_dev = exact_deviation(chain, 0, horizon);
  for (int s = 1; s < chain.state_count; ++s) {
    const double d = exact_deviation(chain, s, horizon);
    if (d > best_dev) {
      best = s;
      best_dev = d;
    }
  }
  return best;
}

std::vector<RewardedMarkovChain> validation_chains() {
  return {RewardedMarkovChain::gilbert_elliot(0.3, 0.9, 0.1, 1.0),
          RewardedMarkovChain::gilbert_elliot(0.8, 0.7, 0.1, 1.0),
          RewardedMarkovChain::gilbert_elliot(0.5, 0.1, 0.1, 1.0),
          RewardedMarkovChain::gilbert_elliot(0.2, 0.4, 0.1, 1.0),
          RewardedMarkovChain::gilbert_elliot(0.1, 0.5, 0.1, 1.0)};
}

ValidationSuite run_validation_suite(std::uint64_t seed, std::int64_t replications) {
  ValidationSuite suite;
  std::uint64_t group = 0;
  auto push = [&](std::vector<TailCheckReport> reports) {
    for (auto& r : reports) {
      suite.all_pass = suite.all_pass && r.pass;
      suite.reports.push_back(std::move(r));
    }
  };

  TailCheckSpec coin;
  coin.length = 100;
  coin.range = 1.0;
  coin.mean = 0.5;
  coin.deviation = 20.0;
  coin.replications = replications;
  coin.seed = derive_seed(seed, "suite", group++);
  push(check_chernoff(coin, iid_sampler(), "iid-coin"));

  for (double drift : {0.0, 0.05, 0.2}) {
    TailCheckSpec s;
    s.length = 200;
    s.range = 1.0;
    s.mean = 0.5;
    s.drift = drift;
    s.deviation = 30.0;
    s.replications = replications;
    s.seed = derive_seed(seed, "suite", group++);
    push(check_drifted_chernoff(s, alternating_sampler(), "alternating"));
  }

  const std::vector<std::int64_t> horizons = {10, 100, 1000, 10000};
  for (const auto& chain : validation_chains()) {
    MarkovDeviationSpec m;
    m.horizons = horizons;
    m.replications = replications;
    m.start_state = -1;
    m.seed = derive_seed(seed, "suite", group++);
    push(check_markov_deviation(chain, m));

    MarkovDeviationSpec w = m;
    w.start_state = worst_start_state(chain, horizons.back());
    w.seed = derive_seed(seed, "suite", group++);
    push(check_markov_deviation(chain, w));
  }
  return suite;
}

}  // namespace rmab
