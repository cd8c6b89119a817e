#include "rmab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "rmab/errors.hpp"

namespace rmab {

namespace {

constexpr long double kPiSqOver3 =
    static_cast<long double>(std::numbers::pi_v<long double>) *
    std::numbers::pi_v<long double> / 3.0L;

// exp on long double overflows just above this exponent.
constexpr long double kMaxExpArg = 11000.0L;

void validate_truth(const ScenarioTruth& t) {
  const int n = t.arm_count();
  if (n < 2) throw ValidationError("scenario truth requires at least 2 arms");
  if (t.select_count < 1 || t.select_count >= n) {
    std::ostringstream os;
    os << "scenario truth requires 1 <= K < N, got K=" << t.select_count
       << " with N=" << n;
    throw ValidationError(os.str());
  }
  if (!(t.c_p > 0.0)) throw ValidationError("deviation constant must be positive");
  if (!(t.exploration > 2.0))
    throw ValidationError("bound evaluation requires an exploration constant above 2");
  for (int r = 0; r + 1 < n; ++r)
    if (!(t.mus[r] > t.mus[r + 1]))
      throw ValidationError("stationary means must be distinct to order the arms");
  if (!(t.mus[n - 1] > 0.0))
    throw ValidationError("stationary means must be positive");
}

double required(const ScenarioTruth& t, int boundary_rank) {
  const double gap = t.mus[boundary_rank - 1] - t.mus[boundary_rank];
  const double mu_min = t.mus.back();
  return std::max(2.0 * t.c_p / gap, t.c_p / mu_min);
}

std::int64_t anchor_index(const ScenarioTruth& t, int boundary_rank) {
  const double need = std::ceil(required(t, boundary_rank));
  const auto idx = t.schedule.first_index_at_least(static_cast<std::int64_t>(need));
  if (idx < 0) {
    std::ostringstream os;
    os << "schedule never reaches the required step length " << need;
    throw ValidationError(os.str());
  }
  return idx;
}

// L (1 + (mu_j + c)/(mu_j - c))^2 / (mu_base - mu_j - 2c)^2, the per-rank
// coefficient shared by the lambda counts and the bound slopes.
long double rank_coefficient(const ScenarioTruth& t, int rank, double drift) {
  const double mu_j = t.mus[static_cast<std::size_t>(rank - 1)];
  if (!(mu_j > drift)) {
    std::ostringstream os;
    os << "mean at rank " << rank << " (" << mu_j
       << ") does not exceed the drift term " << drift;
    throw ValidationError(os.str());
  }
  const int base_rank = t.select_count == 1 ? 1 : t.select_count;
  const double gap = t.mus[static_cast<std::size_t>(base_rank - 1)] - mu_j - 2.0 * drift;
  if (!(gap > 0.0)) {
    std::ostringstream os;
    os << "gap to rank " << rank << " does not clear twice the drift term "
       << drift << "; the schedule is infeasible for this arm set";
    throw ValidationError(os.str());
  }
  const long double ratio = 1.0L + (static_cast<long double>(mu_j) + drift) /
                                       (static_cast<long double>(mu_j) - drift);
  return static_cast<long double>(t.exploration) * ratio * ratio /
         (static_cast<long double>(gap) * gap);
}

BoundConstants compute_constants(const ScenarioTruth& t, std::int64_t q) {
  const int n = t.arm_count();
  const int k = t.select_count;
  BoundConstants c;
  c.q = q;
  c.step_at_q = t.schedule.at(q);
  c.drift = t.c_p / static_cast<double>(c.step_at_q);

  c.margins.resize(n);
  for (int r = 1; r <= n; ++r) {
    const double mu = t.mus[static_cast<std::size_t>(r - 1)];
    if (r <= k) {
      c.margins[r - 1] = static_cast<double>(q) * (mu - c.drift);
    } else {
      c.margins[r - 1] = static_cast<double>(q) * (mu - c.drift) / (mu + c.drift) *
                         (mu + c.drift - 1.0);
    }
  }

  const long double root_gap = std::sqrt(static_cast<long double>(t.exploration)) -
                               std::sqrt(2.0L);
  c.play_floors.resize(n);
  for (int r = 0; r < n; ++r) {
    const long double scaled = static_cast<long double>(c.margins[r]) / root_gap;
    c.play_floors[r] =
        1.0L + std::ceil(std::max(static_cast<long double>(q), scaled * scaled));
  }

  // Warmup step count: the single-play analysis and the multi-play analysis
  // print slightly different majorants, reproduced here verbatim.
  long double warm = 0.0L;
  const long double nm1 = static_cast<long double>(n - 1);
  for (int r = 0; r < n; ++r) {
    const long double floor_r = c.play_floors[r];
    const long double exp_arg = 4.0L * floor_r / static_cast<long double>(t.exploration);
    if (exp_arg > kMaxExpArg) {
      std::ostringstream os;
      os << "warmup constant overflows long double (exp argument " <<
          static_cast<double>(exp_arg) << ")";
      throw NumericError(os.str());
    }
    long double linear, exponential;
    if (k == 1) {
      linear = nm1 * (4.0L * floor_r + 1.0L) + floor_r;
      exponential = nm1 * std::exp(exp_arg) + floor_r;
    } else {
      linear = nm1 * (5.0L * floor_r + 1.0L) + floor_r;
      exponential = nm1 * (std::exp(exp_arg) + floor_r) + floor_r;
    }
    warm = std::max({warm, linear, exponential});
  }
  c.warmup = std::ceil(warm);

  const long double tail = c.warmup + kPiSqOver3;
  long double slope_step = 0.0L, slope = 0.0L, gap_sum = 0.0L;
  for (int r = k + 1; r <= n; ++r) {
    const long double coeff = std::ceil(rank_coefficient(t, r, c.drift));
    const long double weight =
        static_cast<long double>(t.mus[0]) - t.mus[static_cast<std::size_t>(r - 1)];
    const long double base_gap =
        static_cast<long double>(t.mus[static_cast<std::size_t>(k - 1)]) -
        t.mus[static_cast<std::size_t>(r - 1)];
    slope_step += weight * coeff;
    slope += coeff;
    gap_sum += base_gap;
  }
  c.slope_step = slope_step;
  c.slope = 3.0L * t.c_p * slope;
  c.offset_step = tail * gap_sum + static_cast<long double>(k);
  c.offset = 3.0L * static_cast<long double>(n - k) * t.c_p * tail;
  return c;
}

}  // namespace

ScenarioTruth ScenarioTruth::from_values(const std::vector<double>& mus_by_arm,
                                         double c_p, int select_count,
                                         double exploration, StepSchedule schedule) {
  ScenarioTruth t;
  t.c_p = c_p;
  t.select_count = select_count;
  t.exploration = exploration;
  t.schedule = std::move(schedule);
  t.sigma.resize(mus_by_arm.size());
  std::iota(t.sigma.begin(), t.sigma.end(), 0);
  std::stable_sort(t.sigma.begin(), t.sigma.end(), [&](int a, int b) {
    return mus_by_arm[static_cast<std::size_t>(a)] >
           mus_by_arm[static_cast<std::size_t>(b)];
  });
  t.mus.reserve(mus_by_arm.size());
  for (int id : t.sigma) t.mus.push_back(mus_by_arm[static_cast<std::size_t>(id)]);
  validate_truth(t);
  return t;
}

ScenarioTruth ScenarioTruth::from_chains(const std::vector<RewardedMarkovChain>& chains,
                                         int select_count, double exploration,
                                         StepSchedule schedule) {
  std::vector<double> mus;
  mus.reserve(chains.size());
  for (const auto& c : chains) mus.push_back(stationary_distribution(c).mu);
  return from_values(mus, chain_constant_cp(chains), select_count, exploration,
                     std::move(schedule));
}

std::int64_t g_of_n(const StepSchedule& schedule, std::int64_t n) {
  return schedule.value_at_slot(n);
}

double required_step_length(const ScenarioTruth& truth) {
  validate_truth(truth);
  return required(truth, 1);
}

double required_step_length_multi(const ScenarioTruth& truth) {
  validate_truth(truth);
  return required(truth, truth.select_count);
}

std::int64_t q_index(const ScenarioTruth& truth) {
  validate_truth(truth);
  return anchor_index(truth, 1);
}

std::int64_t q_prime_index(const ScenarioTruth& truth) {
  validate_truth(truth);
  return anchor_index(truth, truth.select_count);
}

BoundConstants bound_constants(const ScenarioTruth& truth) {
  validate_truth(truth);
  const std::int64_t q =
      truth.select_count == 1 ? anchor_index(truth, 1)
                              : anchor_index(truth, truth.select_count);
  return compute_constants(truth, q);
}

BoundConstants corollary_constants(const ScenarioTruth& truth) {
  validate_truth(truth);
  return compute_constants(truth, 1);
}

long double lambda_raw(const ScenarioTruth& truth, std::int64_t n, int rank) {
  validate_truth(truth);
  if (n < 2) throw UsageError("lambda is defined for n >= 2");
  if (rank <= truth.select_count || rank > truth.arm_count()) {
    std::ostringstream os;
    os << "lambda rank " << rank << " must name a suboptimal rank in ("
       << truth.select_count << ", " << truth.arm_count() << "]";
    throw UsageError(os.str());
  }
  const std::int64_t q = truth.select_count == 1
                             ? anchor_index(truth, 1)
                             : anchor_index(truth, truth.select_count);
  const double drift = truth.c_p / static_cast<double>(truth.schedule.at(q));
  return rank_coefficient(truth, rank, drift) *
         std::log(static_cast<long double>(n));
}

long double lambda_steps(const ScenarioTruth& truth, std::int64_t n, int rank) {
  return std::ceil(lambda_raw(truth, n, rank));
}

long double regret_bound(const ScenarioTruth& truth, const BoundConstants& constants,
                         std::int64_t n) {
  if (n < 1) throw UsageError("regret bound is defined for n >= 1");
  const long double g = static_cast<long double>(g_of_n(truth.schedule, n));
  const long double log_n = std::log(static_cast<long double>(n));
  return constants.slope_step * g * log_n + constants.slope * log_n +
         constants.offset_step * g + constants.offset;
}

long double regret_bound_theorem(const ScenarioTruth& truth, std::int64_t n) {
  return regret_bound(truth, bound_constants(truth), n);
}

long double regret_bound_corollary(const ScenarioTruth& truth, std::int64_t n) {
  return regret_bound(truth, corollary_constants(truth), n);
}

}  // namespace rmab
